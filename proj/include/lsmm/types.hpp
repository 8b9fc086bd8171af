#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace lsmm {

using Matrix = Eigen::MatrixXd;
using ColVec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVec = Eigen::RowVectorXcd;

/// Set of eigenvalues clustered into distinct values with multiplicities.
/// Values are kept in dominance order (descending real part, ties broken by
/// ascending |Im|, conjugate pairs adjacent with positive imaginary part first).
struct Spectrum {
    std::vector<Complex> values;
    std::vector<int> multiplicities;

    [[nodiscard]] int total() const {
        int n = 0;
        for (int m : multiplicities) n += m;
        return n;
    }
};

}  // namespace lsmm
