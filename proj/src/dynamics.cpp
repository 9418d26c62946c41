#include "pqd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pqd {

void ReservoirSpec::validate() const
{
    if (!std::isfinite(delta)) throw Error(ErrorKind::domain_error, "detuning must be finite");
    if (!(A > 0.0)) throw Error(ErrorKind::domain_error, "curvature A must be positive");
    if (!(C >= 0.0)) throw Error(ErrorKind::domain_error, "coupling C must be non-negative");
    if (!(gamma >= 0.0)) throw Error(ErrorKind::domain_error, "background rate gamma must be non-negative");
}

cplx ReservoirSpec::phase() const
{
    return std::polar(1.0, kind == ExtremumKind::minimum ? -std::numbers::pi / 4.0 : std::numbers::pi / 4.0);
}

namespace {

// Principal-branch continuation into Re z <= 0, cut running left from i delta; the inversion
// contour wraps around that cut.
cplx continued_transform(const ReservoirSpec& spec, cplx z)
{
    return 1.0 / (z + 0.5 * spec.gamma + spec.phase() * spec.C / std::sqrt(z - cplx(0.0, spec.delta)));
}

}  // namespace

cplx amplitude_transform(const ReservoirSpec& spec, cplx z)
{
    if (!(z.real() > 0.0)) throw Error(ErrorKind::branch_violation, "amplitude transform needs Re z > 0");
    return continued_transform(spec, z);
}

VolterraKernel memory_kernel(const ReservoirSpec& spec)
{
    const cplx pre = spec.phase() * spec.C / std::sqrt(std::numbers::pi);
    const double d = spec.delta;
    return {[pre, d](double tau) { return pre * std::polar(1.0, d * tau); }, true};
}

InversionSettings default_inversion(const ReservoirSpec& spec)
{
    InversionSettings st;
    st.center = spec.delta;
    // poles of the transform lie within about C^{2/3} + gamma/2 of the branch point
    st.extent = std::abs(spec.delta) + 0.5 * spec.gamma + std::pow(spec.C, 2.0 / 3.0) + 1.0;
    return st;
}

AmplitudeTrace decay_trace(const ReservoirSpec& spec, const TimeGrid& grid, const DecayOptions& opt)
{
    spec.validate();
    grid.validate();
    AmplitudeTrace tr;
    tr.grid = grid;
    const InversionSettings st = opt.auto_inversion ? default_inversion(spec) : opt.inversion;
    tr.b_e = invert_laplace([&](cplx z) { return continued_transform(spec, z); }, grid, st);
    tr.b_e[0] = 1.0;

    if (opt.cross_check) {
        const auto vb = solve_volterra(0.5 * spec.gamma, memory_kernel(spec), grid, opt.volterra);
        for (std::size_t i = 0; i < grid.count; ++i) tr.cross_check = std::max(tr.cross_check, std::abs(vb[i] - tr.b_e[i]));
        if (!(tr.cross_check <= opt.cross_tol))
            throw Error(ErrorKind::cross_check_failure, "Laplace inversion and Volterra solution differ by " +
                                                            std::to_string(tr.cross_check));
    }
    tr.population.resize(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) tr.population[i] = std::norm(tr.b_e[i]);
    return tr;
}

}  // namespace pqd
