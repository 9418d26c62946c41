#include "pqd/errors.hpp"

namespace pqd {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::accuracy_loss: return "accuracy-loss";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::oscillation_detected: return "oscillation-detected";
    case ErrorKind::step_too_coarse: return "step-size-too-coarse";
    case ErrorKind::branch_lost: return "branch-lost";
    case ErrorKind::branch_violation: return "branch-violation";
    case ErrorKind::cross_check_failure: return "cross-check-failure";
    case ErrorKind::grid_outside_span: return "grid-outside-branch-span";
    case ErrorKind::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorKind::pole_on_grid: return "pole-on-grid";
    case ErrorKind::truncation_too_small: return "truncation-too-small";
    case ErrorKind::transform_nonconvergence: return "transform-nonconvergence";
    case ErrorKind::unknown_tag: return "unknown-tag";
    case ErrorKind::branch_crossing_ambiguity: return "branch-crossing-ambiguity";
    }
    return "error";
}

}  // namespace pqd
