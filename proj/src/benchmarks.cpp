#include "lsmm/benchmarks.hpp"

#include <cmath>

namespace lsmm {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Xoshiro256::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform(double lo, double hi) {
    const double u = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

StateSpace build_fss(const FssParams& params) {
    if (params.modes < 1) throw Error("build_fss: need at least one mode");
    const int n = 2 * params.modes;
    StateSpace sys;
    sys.A = Matrix::Zero(n, n);
    sys.B = Matrix::Zero(n, 1);
    sys.C = Matrix::Zero(1, n);

    Xoshiro256 rng(params.seed);
    for (int k = 0; k < params.modes; ++k) {
        const double chi = rng.uniform(params.chi_lo, params.chi_hi);
        const double phi = rng.uniform(params.phi_lo, params.phi_hi);
        const double b = rng.uniform(params.b_lo, params.b_hi);
        const double c_r = rng.uniform(params.c_lo, params.c_hi);
        const double c_d = rng.uniform(params.c_lo, params.c_hi);
        const int p = 2 * k;
        sys.A(p, p) = -2.0 * chi * phi;
        sys.A(p, p + 1) = -phi;
        sys.A(p + 1, p) = phi;
        sys.B(p, 0) = b;
        sys.C(0, p) = c_r;
        sys.C(0, p + 1) = c_d / phi;
    }
    return sys;
}

InverterChain build_inverter_chain(const InverterChainParams& params) {
    if (params.n < 2) throw Error("build_inverter_chain: need at least two stages");
    if (params.expand_degree < 1 || params.expand_degree % 2 == 0) {
        throw Error("build_inverter_chain: expand_degree must be odd and >= 1");
    }
    // tanh(z) = z - z^3/3 + 2 z^5/15 - 17 z^7/315 + 62 z^9/2835 - ...
    static constexpr double tanh_coeff[] = {1.0, -1.0 / 3.0, 2.0 / 15.0, -17.0 / 315.0,
                                            62.0 / 2835.0};
    if (params.expand_degree > 9) {
        throw Error("build_inverter_chain: tanh expansion supported up to degree 9");
    }

    const int n = params.n;
    PolyMap f(n + 1, n, params.expand_degree);
    auto tau = [](int i) { return 4.0 * (i + 1); };      // i is 1-based
    auto vdd = [](int i) { return 1.0 / (4.0 * (i + 1)); };

    // First stage: input lag.
    {
        MultiIndex a(n + 1, 0);
        a[0] = 1;
        f.set_coeff(0, a, -1.0 / tau(1));
        MultiIndex u(n + 1, 0);
        u[n] = 1;
        f.set_coeff(0, u, params.alpha / tau(1));
    }
    // Remaining stages: lag driven by the saturating inverter of the
    // previous voltage.
    for (int i = 2; i <= n; ++i) {
        const int row = i - 1;
        MultiIndex a(n + 1, 0);
        a[row] = 1;
        f.set_coeff(row, a, -1.0 / tau(i));
        for (int d = 1; d <= params.expand_degree; d += 2) {
            const double c = -vdd(i) * tanh_coeff[(d - 1) / 2] /
                             std::pow(params.v_threshold, static_cast<double>(d));
            MultiIndex g(n + 1, 0);
            g[row - 1] = d;
            f.set_coeff(row, g, c / tau(i));
        }
    }

    PolyMap h(n, 1, 1);
    MultiIndex last(n, 0);
    last[n - 1] = 1;
    h.set_coeff(0, last, 1.0);

    InverterChain chain{PolyVectorField{n, std::move(f)}, std::move(h)};
    chain.field.validate();
    return chain;
}

}  // namespace lsmm
