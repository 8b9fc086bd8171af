#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "lsmm/reduction.hpp"
#include "lsmm/polymap.hpp"
#include "lsmm/types.hpp"

namespace lsmm::io {

using nlohmann::json;

json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const json& j);

/// Column vector as a flat array.
json colvec_to_json(const ColVec& v);
ColVec colvec_from_json(const json& j);

/// Row vector as a flat array.
json rowvec_to_json(const RowVec& v);
RowVec rowvec_from_json(const json& j);

/// {"A": [[...]], "B": [...], "C": [...]} row-major decimal.
json system_to_json(const StateSpace& sys);
StateSpace system_from_json(const json& j);

json polymap_to_json(const PolyMap& p);
PolyMap polymap_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Full-precision decimal rendering (17 significant digits).
std::string format_double(double x);

/// CSV with a header row, comma separator, 17 significant digits.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);

  private:
    std::FILE* file_;
    std::size_t columns_;
};

}  // namespace lsmm::io
