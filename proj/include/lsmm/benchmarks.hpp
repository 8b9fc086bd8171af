#pragma once

#include <cstdint>
#include <utility>

#include "lsmm/polymap.hpp"
#include "lsmm/reduction.hpp"

namespace lsmm {

/// xoshiro256++ with splitmix64 seeding. Used instead of std::mt19937 so
/// builds are bit-reproducible across standard libraries.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed);
    std::uint64_t next();
    /// Uniform double strictly inside (lo, hi).
    double uniform(double lo, double hi);

  private:
    std::uint64_t s_[4];
};

/// Flexible-structure benchmark: K lightly damped second-order modes.
struct FssParams {
    int modes = 30;
    std::uint64_t seed = 1;
    double chi_lo = 0.0, chi_hi = 0.001;   // damping ratio range
    double phi_lo = 0.0, phi_hi = 100.0;   // natural frequency range
    double b_lo = 0.0, b_hi = 1.0;         // input coefficient range
    double c_lo = 0.0, c_hi = 10.0;        // output coefficient range
};

/// Block-diagonal state space: blocks [[-2 chi phi, -phi], [phi, 0]],
/// B_k = [b_k; 0], C_k = [c_rk, c_dk / phi_k]. Draw order per mode:
/// chi, phi, b, c_r, c_d.
StateSpace build_fss(const FssParams& params);

/// Chain of n-1 saturating inverter stages behind a first-order input lag:
///   x1' = -x1/tau_1 + alpha u / tau_1,
///   xi' = -xi/tau_i + g_i(x_{i-1}) / tau_i,  g_i(x) = -Vdd_i tanh(x / V_T),
///   y = x_n,
/// with tanh Taylor-expanded to `expand_degree` (odd). Defaults follow the
/// benchmark values Vdd_i = 1/(4(i+1)), tau_i = 4(i+1).
struct InverterChainParams {
    int n = 12;
    double v_threshold = 0.25;
    double alpha = 4.0;
    int expand_degree = 3;
};

struct InverterChain {
    PolyVectorField field;
    PolyMap output;  // h(x) = x_n
};

InverterChain build_inverter_chain(const InverterChainParams& params);

}  // namespace lsmm
