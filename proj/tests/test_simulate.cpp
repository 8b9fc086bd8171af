#include <doctest.h>

#include <cmath>

#include "lsmm/simulate.hpp"
#include "support.hpp"

using namespace lsmm;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

ReducedModel exact_model(const StateSpace& sys, const SignalGenerator& gen) {
    std::vector<Complex> targets;
    for (int i = 0; i < gen.nu(); ++i) targets.emplace_back(-1.0 - 0.5 * i, 0.0);
    const ColVec delta = pole_place_siso(gen.S, gen.L, targets);
    return surrogate_model(sys, gen, delta);
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("exponential decay") {
    SimConfig cfg;
    cfg.t_final = 1.0;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-10;
    const VectorField field = [](double, const ColVec& x) { return ColVec(-x); };
    const Trajectory traj = integrate_rk23(field, ColVec::Ones(1), {0.0, 0.5, 1.0}, cfg);
    REQUIRE(traj.size() == 3);
    CHECK(std::abs(traj.values[2][0] - std::exp(-1.0)) < 10 * cfg.rel_tol);
}

TEST_CASE("constant fields are integrated exactly") {
    SimConfig cfg;
    cfg.t_final = 5.0;
    const VectorField field = [](double, const ColVec& x) { return ColVec(ColVec::Zero(x.size())); };
    ColVec x0(2);
    x0 << 3.25, -1.5;
    const Trajectory traj = integrate_rk23(field, x0, uniform_grid(5.0, 11), cfg);
    for (const ColVec& v : traj.values) {
        CHECK(v[0] == 3.25);
        CHECK(v[1] == -1.5);
    }
}

TEST_CASE("rotation conserves the norm") {
    SimConfig cfg;
    cfg.t_final = 100.0;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    Matrix S(2, 2);
    S << 0, 1, -1, 0;
    const VectorField field = [&](double, const ColVec& x) { return ColVec(S * x); };
    ColVec x0(2);
    x0 << 1, 0;
    const Trajectory traj = integrate_rk23(field, x0, uniform_grid(100.0, 101), cfg);
    for (const ColVec& v : traj.values) {
        CHECK(std::abs(v.norm() - 1.0) < 1e-6);
    }
}

TEST_CASE("step size underflow on a finite-time blowup") {
    SimConfig cfg;
    cfg.t_final = 2.0;
    const VectorField field = [](double, const ColVec& x) {
        return ColVec(x.array().square().matrix());
    };
    CHECK_THROWS_AS(integrate_rk23(field, ColVec::Ones(1), {0.0, 2.0}, cfg), Error);
}

TEST_CASE("rms of sinusoids and constants") {
    Trajectory traj;
    const int n = 20001;
    const double T = 8 * M_PI;  // whole periods
    for (int i = 0; i < n; ++i) {
        const double t = T * i / (n - 1);
        traj.times.push_back(t);
        traj.values.push_back(ColVec::Constant(1, std::sin(t)));
    }
    CHECK(rms_value(traj, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));

    Trajectory constant;
    constant.times = {0.0, 1.0, 2.0};
    constant.values.assign(3, ColVec::Constant(1, -0.75));
    CHECK(rms_value(constant, 0.0) == doctest::Approx(0.75));

    Trajectory zero;
    zero.times = {0.0, 1.0};
    zero.values.assign(2, ColVec::Zero(1));
    CHECK(rms_value(zero, 0.0) == 0.0);
    CHECK_THROWS_AS(rms_value(zero, 5.0), EmptyWindow);
}

TEST_CASE("step response of the driven lag") {
    StateSpace sys{scalar(-1), scalar(1), scalar(1)};
    SignalGenerator gen{Matrix::Zero(1, 1), scalar(1), ColVec::Ones(1), std::nullopt};
    SimConfig cfg;
    cfg.t_final = 20.0;
    const Trajectory traj = simulate_interconnection(gen, sys, cfg);
    CHECK(std::abs(traj.values.back()[0] - 1.0) < 1e-6);
}

TEST_CASE("gamma estimate vanishes for exact matching") {
    const StateSpace sys{scalar(-1), scalar(1), scalar(1)};
    const SignalGenerator gen = build_generator(InterpolationSpec::from_frequencies({1.0}));
    const ReducedModel model = exact_model(sys, gen);
    SimConfig cfg;
    cfg.t_final = 60.0;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    CHECK(estimate_gamma_rms(sys, model, gen, cfg) < 1e-6);
}

TEST_CASE("gamma estimate respects the a-priori bound") {
    std::mt19937_64 rng(401);
    for (int trial = 0; trial < 5; ++trial) {
        const StateSpace sys = lsmm::test::random_stable_system(rng, 5);
        const auto spec = InterpolationSpec::from_frequencies(lsmm::test::random_frequencies(rng, 2));
        const SignalGenerator gen = build_generator(spec);
        const ReducedModel model = lsmm::test::random_stable_model(rng, 2);
        SimConfig cfg;
        cfg.t_final = 60.0;
        cfg.rel_tol = 1e-10;
        cfg.abs_tol = 1e-12;
        const double gamma = estimate_gamma_rms(sys, model, gen, cfg);
        CHECK(gamma <= error_bound(sys, model, gen) + 1e-6);
    }
}

TEST_CASE("gamma estimate rejects unstable models and non-skew generators") {
    const StateSpace sys{scalar(-1), scalar(1), scalar(1)};
    const SignalGenerator gen = build_generator(InterpolationSpec::from_frequencies({1.0}));
    ReducedModel unstable;
    unstable.F = scalar(0.5);
    unstable.G = scalar(1);
    unstable.H = scalar(1);
    SimConfig cfg;
    CHECK_THROWS_AS(estimate_gamma_rms(sys, unstable, gen, cfg), Unstable);

    SignalGenerator not_skew{scalar(-0.5), scalar(1), ColVec::Ones(1), std::nullopt};
    ReducedModel stable;
    stable.F = scalar(-2);
    stable.G = scalar(1);
    stable.H = scalar(1);
    CHECK_THROWS_AS(estimate_gamma_rms(sys, stable, not_skew, cfg), NotSkewSymmetric);
}

TEST_CASE("steady-state prediction for an exact model is zero") {
    const StateSpace sys{scalar(-1), scalar(1), scalar(1)};
    const SignalGenerator gen = build_generator(InterpolationSpec::from_frequencies({1.0}));
    const ReducedModel model = exact_model(sys, gen);
    const Trajectory pred = steady_state_error_prediction(sys, model, gen, uniform_grid(10.0, 21));
    for (const ColVec& v : pred.values) CHECK(std::abs(v[0]) < 1e-9);
}

TEST_CASE("steady-state prediction for a constant generator") {
    const StateSpace sys{scalar(-1), scalar(1), scalar(1)};
    SignalGenerator gen{Matrix::Zero(1, 1), scalar(1), ColVec::Constant(1, 0.7), std::nullopt};
    ReducedModel model;
    model.F = scalar(-2);
    model.G = scalar(1);
    model.H = scalar(1);
    const Matrix Pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    const Matrix P = solve_sylvester(model.F, model.G, gen.L, gen.S);
    const double expected = ((sys.C * Pi - model.H * P) * gen.omega0)(0);
    const Trajectory pred = steady_state_error_prediction(sys, model, gen, uniform_grid(5.0, 6));
    for (const ColVec& v : pred.values) CHECK(v[0] == doctest::Approx(expected));
}

TEST_CASE("simulated error converges to the predicted steady state") {
    std::mt19937_64 rng(409);
    const StateSpace sys = lsmm::test::random_stable_system(rng, 5);
    const auto spec = InterpolationSpec::from_frequencies({0.9, 2.0});
    const SignalGenerator gen = build_generator(spec);
    const ReducedModel model = lsmm::test::random_stable_model(rng, 2);

    SimConfig cfg;
    cfg.t_final = 60.0;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    cfg.output_samples = 601;

    // error system trajectory
    const int nu = gen.nu();
    const int n = sys.order();
    const int r = model.order();
    ColVec z0 = ColVec::Zero(nu + n + r);
    z0.head(nu) = gen.omega0;
    const VectorField field = [&](double, const ColVec& z) {
        ColVec dz(nu + n + r);
        dz.head(nu) = gen.S * z.head(nu);
        dz.segment(nu, n) = sys.A * z.segment(nu, n) + sys.B * gen.L * z.head(nu);
        dz.tail(r) = model.F * z.tail(r) + model.G * gen.L * z.head(nu);
        return dz;
    };
    const Trajectory full = integrate_rk23(field, z0, uniform_grid(cfg.t_final, 601), cfg);
    const Trajectory pred = steady_state_error_prediction(sys, model, gen, full.times);
    auto window_peak = [&](double lo, double hi) {
        double peak = 0.0;
        for (std::size_t i = 0; i < full.times.size(); ++i) {
            if (full.times[i] < lo || full.times[i] > hi) continue;
            const double e = (sys.C * full.values[i].segment(nu, n) -
                              model.H * full.values[i].tail(r))(0);
            peak = std::max(peak, std::abs(e - pred.values[i][0]));
        }
        return peak;
    };
    CHECK(window_peak(0.7 * cfg.t_final, cfg.t_final) < 1e-6);
    // exponentially decaying envelope: successive windows shrink
    const double early = window_peak(0.1 * cfg.t_final, 0.3 * cfg.t_final);
    const double late = window_peak(0.4 * cfg.t_final, 0.6 * cfg.t_final);
    CHECK(late < 0.5 * early);
}

TEST_CASE("frequency response of the first-order lag") {
    const StateSpace sys{scalar(-1), scalar(1), scalar(1)};
    const auto resp = frequency_response(sys, {0.0, 1.0});
    CHECK(std::abs(resp[0] - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(resp[1] - 1.0 / Complex(1, 1)) < 1e-12);

    Matrix S(2, 2);
    S << 0, 1, -1, 0;
    const StateSpace marginal{S, Matrix::Ones(2, 1), Matrix::Ones(1, 2)};
    CHECK_THROWS_AS(frequency_response(marginal, {1.0}), PointInSpectrum);
}

}  // TEST_SUITE
