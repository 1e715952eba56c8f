// Error types thrown by the ccm library.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccm {

struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, double residual,
                  std::vector<std::complex<double>> iterate = {})
        : std::runtime_error(what), best_residual(residual), best_iterate(std::move(iterate)) {}
    double best_residual;
    std::vector<std::complex<double>> best_iterate;
};

struct DuplicateNodes : std::runtime_error {
    explicit DuplicateNodes(const std::string& what) : std::runtime_error(what) {}
};

struct DegeneratePoint : std::runtime_error {
    explicit DegeneratePoint(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSpectrum : std::runtime_error {
    explicit DegenerateSpectrum(const std::string& what) : std::runtime_error(what) {}
};

struct PoleAtZ : std::runtime_error {
    explicit PoleAtZ(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroCoupling : std::runtime_error {
    explicit ZeroCoupling(const std::string& what) : std::runtime_error(what) {}
};

struct SamplingFailed : std::runtime_error {
    explicit SamplingFailed(const std::string& what) : std::runtime_error(what) {}
};

struct CollisionDetected : std::runtime_error {
    explicit CollisionDetected(const std::string& what) : std::runtime_error(what) {}
};

struct EvaluationFailure : std::runtime_error {
    explicit EvaluationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct DivisibilityViolation : std::runtime_error {
    explicit DivisibilityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ccm
