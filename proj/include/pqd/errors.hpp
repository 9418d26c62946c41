#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pqd {

enum class ErrorKind {
    domain_error,
    accuracy_loss,
    no_convergence,
    oscillation_detected,
    step_too_coarse,
    branch_lost,
    branch_violation,
    cross_check_failure,
    grid_outside_span,
    quadrature_nonconvergence,
    pole_on_grid,
    truncation_too_small,
    transform_nonconvergence,
    unknown_tag,
    branch_crossing_ambiguity,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Carries the best iterate so callers can decide whether to retry from it.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::complex<double> best, double residual)
        : Error(ErrorKind::no_convergence, what), best_(best), residual_(residual) {}
    std::complex<double> best() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    std::complex<double> best_;
    double residual_;
};

}  // namespace pqd
