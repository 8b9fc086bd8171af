#pragma once

#include <functional>
#include <vector>

#include "lsmm/polymap.hpp"
#include "lsmm/reduction.hpp"
#include "lsmm/series.hpp"

namespace lsmm {

struct IntegratorStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long field_evals = 0;
};

/// Time series of vector-valued samples on a strictly increasing grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<ColVec> values;
    IntegratorStats meta;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    /// One component of the samples as a dense column.
    [[nodiscard]] ColVec component(int index) const;
};

struct SimConfig {
    double t_final = 100.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double steady_state_fraction = 0.5;
    int output_samples = 2001;

    void validate() const;
};

using VectorField = std::function<ColVec(double, const ColVec&)>;

/// Adaptive Bogacki-Shampine (2,3) pair with FSAL and cubic Hermite dense
/// output at the requested times (which must be ascending, within
/// [0, config.t_final]).
Trajectory integrate_rk23(const VectorField& field, const ColVec& x0,
                          const std::vector<double>& sample_times, const SimConfig& config);

/// Uniform grid of `count` samples on [0, t_final].
std::vector<double> uniform_grid(double t_final, int count);

/// Generator-driven simulation; returns the scalar output y(t) of the driven
/// system from x(0) = 0, omega(0) = gen.omega0.
Trajectory simulate_interconnection(const SignalGenerator& gen, const StateSpace& sys,
                                    const SimConfig& config);
Trajectory simulate_interconnection(const SignalGenerator& gen, const PolyVectorField& field,
                                    const PolyMap& h, const SimConfig& config);
/// Nonlinear reduced model: emits one sample row per time with the outputs
/// truncated at every odd order up to the model degree (order 1 first).
Trajectory simulate_interconnection(const SignalGenerator& gen, const NonlinearReducedModel& model,
                                    const SimConfig& config);

/// r.m.s. value of the (vector) samples over [window_start, t_final] by the
/// trapezoidal rule.
double rms_value(const Trajectory& traj, double window_start);

/// Single-trajectory lower estimate of the worst-case steady-state rms gain
/// of the error system, from omega(0) = gen.omega0.
double estimate_gamma_rms(const StateSpace& sys, const ReducedModel& model,
                          const SignalGenerator& gen, const SimConfig& config);

/// Steady-state error prediction e_ss(t) = (C Pi - H P) omega(t) with
/// omega(t) = exp(S t) omega0 evaluated through the eigendecomposition of S.
Trajectory steady_state_error_prediction(const StateSpace& sys, const ReducedModel& model,
                                         const SignalGenerator& gen,
                                         const std::vector<double>& times);

/// Transfer function values W(i omega) = C (i omega I - A)^-1 B.
std::vector<Complex> frequency_response(const StateSpace& sys, const std::vector<double>& omegas);
std::vector<Complex> frequency_response(const ReducedModel& model,
                                        const std::vector<double>& omegas);

}  // namespace lsmm
