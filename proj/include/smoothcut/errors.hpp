#pragma once

#include <stdexcept>
#include <string>

namespace smoothcut {

// Thrown by the inscribed-ellipsoid solver when no ellipsoid with minimum
// eigenvalue above the configured floor fits the polytope.
struct InfeasibleOrDegenerate : std::runtime_error {
    explicit InfeasibleOrDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct LPFailure : std::runtime_error {
    explicit LPFailure(const std::string& what) : std::runtime_error(what) {}
};

// A realizable-only learner received labels no classifier in its class can produce.
struct NonRealizable : std::runtime_error {
    explicit NonRealizable(const std::string& what) : std::runtime_error(what) {}
};

struct ErmInfeasible : std::runtime_error {
    explicit ErmInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// A declared feature-map contract (derivative bound, range, degree, Lipschitz
// constant) failed a probe.
struct SpecViolation : std::runtime_error {
    explicit SpecViolation(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDistribution : std::runtime_error {
    explicit InvalidDistribution(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace smoothcut
