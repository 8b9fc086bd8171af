#pragma once

#include <stdexcept>
#include <string>

namespace lsmm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input validation
struct NonFinite : Error {
    using Error::Error;
};
struct NotConjugateClosed : Error {
    using Error::Error;
};
struct TargetsNotConjugateClosed : Error {
    using Error::Error;
};

// Linear algebra
struct SpectraOverlap : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};
struct NotObservable : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct PairSplit : Error {
    using Error::Error;
};
struct DegenerateEigenvalue : Error {
    using Error::Error;
};
struct PointInSpectrum : Error {
    using Error::Error;
};

// Reduction
struct NotAdmissible : Error {
    explicit NotAdmissible(std::string condition, const std::string& detail)
        : Error("parameters not admissible (" + condition + "): " + detail),
          which_condition(std::move(condition)) {}
    std::string which_condition;
};
struct NotConditionedInvariant : Error {
    using Error::Error;
};

// Power series
struct Resonance : Error {
    explicit Resonance(int degree, const std::string& detail)
        : Error("resonance at degree " + std::to_string(degree) + ": " + detail), k(degree) {}
    int k;
};
struct DegreeOverflow : Error {
    using Error::Error;
};
struct OrderExceedsDegree : Error {
    using Error::Error;
};
struct EmptySampleSet : Error {
    using Error::Error;
};

// Simulation
struct Unstable : Error {
    explicit Unstable(std::string part, const std::string& detail)
        : Error("unstable " + part + ": " + detail), which(std::move(part)) {}
    std::string which;
};
struct NotSkewSymmetric : Error {
    using Error::Error;
};
struct StepSizeUnderflow : Error {
    using Error::Error;
};
struct NonFiniteState : Error {
    using Error::Error;
};
struct EmptyWindow : Error {
    using Error::Error;
};

// CLI / configuration
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace lsmm
