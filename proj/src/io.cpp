#include "lsmm/io.hpp"

#include <cstdio>
#include <fstream>

namespace lsmm::io {

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ConfigError("expected a matrix as an array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != cols) {
            throw ConfigError("matrix rows have inconsistent lengths");
        }
        for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
    }
    return M;
}

json colvec_to_json(const ColVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

ColVec colvec_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("expected a vector as a flat array");
    ColVec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

json rowvec_to_json(const RowVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

RowVec rowvec_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("expected a vector as a flat array");
    RowVec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

json system_to_json(const StateSpace& sys) {
    json j;
    j["A"] = matrix_to_json(sys.A);
    j["B"] = colvec_to_json(sys.B.col(0));
    j["C"] = rowvec_to_json(sys.C.row(0));
    return j;
}

StateSpace system_from_json(const json& j) {
    if (!j.contains("A") || !j.contains("B") || !j.contains("C")) {
        throw ConfigError("system JSON must contain A, B, C");
    }
    StateSpace sys;
    sys.A = matrix_from_json(j["A"]);
    sys.B = colvec_from_json(j["B"]);
    sys.C = rowvec_from_json(j["C"]);
    sys.validate();
    return sys;
}

json polymap_to_json(const PolyMap& p) {
    json j;
    j["num_inputs"] = p.num_inputs();
    j["num_outputs"] = p.num_outputs();
    j["max_degree"] = p.max_degree();
    json terms = json::array();
    for (int i = 0; i < p.num_outputs(); ++i) {
        for (const auto& [alpha, c] : p.terms(i)) {
            json t;
            t["output"] = i;
            t["exponents"] = alpha;
            t["coeff"] = c;
            terms.push_back(std::move(t));
        }
    }
    j["terms"] = std::move(terms);
    return j;
}

PolyMap polymap_from_json(const json& j) {
    PolyMap p(j.at("num_inputs").get<int>(), j.at("num_outputs").get<int>(),
              j.at("max_degree").get<int>());
    for (const auto& t : j.at("terms")) {
        p.set_coeff(t.at("output").get<int>(), t.at("exponents").get<MultiIndex>(),
                    t.at("coeff").get<double>());
    }
    return p;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "w")), columns_(header.size()) {
    if (file_ == nullptr) throw ConfigError("cannot open file for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::fputs(header[i].c_str(), file_);
        std::fputc(i + 1 < header.size() ? ',' : '\n', file_);
    }
}

CsvWriter::~CsvWriter() {
    if (file_ != nullptr) std::fclose(file_);
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw Error("CSV row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::fputs(format_double(values[i]).c_str(), file_);
        std::fputc(i + 1 < values.size() ? ',' : '\n', file_);
    }
}

}  // namespace lsmm::io
