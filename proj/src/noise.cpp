#include "pqd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pqd/parallel.hpp"

namespace pqd {

cplx SelfEnergy::on_axis(double) const
{
    throw Error(ErrorKind::domain_error, "this self-energy backend has no closed-form boundary value");
}

QuadraticSelfEnergy::QuadraticSelfEnergy(ReservoirSpec spec) : spec_(spec) { spec_.validate(); }

cplx QuadraticSelfEnergy::at(cplx z) const
{
    if (!(z.real() > 0.0)) throw Error(ErrorKind::branch_violation, "self-energy needs Re z > 0");
    return 0.5 * spec_.gamma + spec_.phase() * spec_.C / std::sqrt(z - cplx(0.0, spec_.delta));
}

double QuadraticSelfEnergy::re_on_axis(double omega) const
{
    const double d = omega - spec_.delta;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    // the continuum term is purely imaginary on one side of the branch point
    const bool open = spec_.kind == ExtremumKind::minimum ? d < 0.0 : d > 0.0;
    return 0.5 * spec_.gamma + (open ? spec_.C / std::sqrt(std::abs(d)) : 0.0);
}

cplx QuadraticSelfEnergy::on_axis(double omega) const
{
    const double d = omega - spec_.delta;
    if (d == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    cplx v = 0.5 * spec_.gamma + spec_.phase() * spec_.C / std::sqrt(cplx(0.0, d));
    return {re_on_axis(omega), v.imag()};
}

void NumericReservoirParams::validate() const
{
    if (!std::isfinite(delta)) throw Error(ErrorKind::domain_error, "detuning must be finite");
    if (!(C >= 0.0)) throw Error(ErrorKind::domain_error, "coupling C must be non-negative");
    if (!(gamma >= 0.0)) throw Error(ErrorKind::domain_error, "background rate gamma must be non-negative");
    if (!(omega_p_over_beta > 0.0) || !std::isfinite(omega_p_over_beta))
        throw Error(ErrorKind::domain_error, "omega_p/beta must be positive");
}

NumericSelfEnergy::NumericSelfEnergy(const ModeBranch& branch, NumericReservoirParams params) : p_(params)
{
    p_.validate();
    if (!branch.polishable())
        throw Error(ErrorKind::domain_error, "numeric self-energy needs a branch that can be polished");
    branch_ = std::make_shared<const ModeBranch>(branch);
    dens_ = std::make_shared<const CrossingDensity>(*branch_);
    const auto& e = dens_->edges();
    if (p_.edge_index >= e.size())
        throw Error(ErrorKind::domain_error, "branch n = " + std::to_string(branch.n) + " has " +
                                                 std::to_string(e.size()) + " band edges, asked for index " +
                                                 std::to_string(p_.edge_index));
    edge_ = e[p_.edge_index];
}

NumericSelfEnergy::NumericSelfEnergy(const NumericSelfEnergy& base, NumericReservoirParams params)
    : dens_(base.dens_), branch_(base.branch_), p_(params), edge_(base.edge_)
{
    p_.validate();
    if (p_.edge_index != base.p_.edge_index) edge_ = dens_->edges().at(p_.edge_index);
}

double NumericSelfEnergy::coupling_sq() const
{
    return p_.C * std::sqrt(edge_.A * p_.omega_p_over_beta) / std::numbers::pi;
}

double NumericSelfEnergy::re_on_axis(double omega) const
{
    // pi g^2 rho(omega0 - omega), rho counting crossings per unit beta
    if (omega == p_.delta) return std::numeric_limits<double>::infinity();
    const double r = p_.omega_p_over_beta;
    const double target = edge_.omega_c + (p_.delta - omega) / r;
    if (target < dens_->lo() || target > dens_->hi()) return 0.5 * p_.gamma;
    return 0.5 * p_.gamma + p_.C * std::sqrt(edge_.A / r) * (*dens_)(target);
}

cplx NumericSelfEnergy::at(cplx z) const
{
    if (!(z.real() > 0.0)) throw Error(ErrorKind::branch_violation, "self-energy needs Re z > 0");
    const double r = p_.omega_p_over_beta;
    const double wc = edge_.omega_c;
    auto f = [&](double k) {
        const double w = branch_root_at(*branch_, k).real();
        return 1.0 / (z + cplx(0.0, r * (w - wc) - p_.delta));
    };
    const double resonance = wc + (p_.delta - z.imag()) / r;
    const auto res_k = dens_->crossings(resonance);

    boost::math::quadrature::tanh_sinh<double> ts;
    cplx total = 0.0;
    for (const auto& [a, b] : dens_->runs()) {
        std::vector<double> cuts{a, b};
        for (const auto& e : dens_->edges())
            if (e.k_c > a && e.k_c < b) cuts.push_back(e.k_c);
        for (double k : res_k)
            if (k > a && k < b) cuts.push_back(k);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double err = 0.0;
            const cplx v = ts.integrate(f, cuts[i], cuts[i + 1], 1e-10, &err);
            if (!(err <= 1e-8 * std::max(1.0, std::abs(v))))
                throw Error(ErrorKind::quadrature_nonconvergence,
                            "self-energy quadrature error estimate " + std::to_string(err));
            total += v;
        }
    }
    return 0.5 * p_.gamma + coupling_sq() * total;
}

cplx reservoir_selfenergy(const SelfEnergy& se, cplx z) { return se.at(z); }

const char* to_string(KernelForm form) { return form == KernelForm::hermitian ? "hermitian" : "literal"; }

KernelForm parse_kernel_form(const std::string& s)
{
    if (s == "hermitian") return KernelForm::hermitian;
    if (s == "literal") return KernelForm::literal;
    throw Error(ErrorKind::unknown_tag, "kernel form '" + s + "' (expected hermitian or literal)");
}

cplx population_kernel(const SelfEnergy& se, double omega, KernelForm form)
{
    if (form == KernelForm::hermitian) return se.re_on_axis(omega) + se.re_on_axis(-omega);
    return se.on_axis(omega) + std::conj(se.on_axis(-omega));
}

void JunctionRates::validate() const
{
    if (!(gamma_L > 0.0) || !std::isfinite(gamma_L)) throw Error(ErrorKind::domain_error, "Gamma_L must be positive");
    if (!(gamma_R > 0.0) || !std::isfinite(gamma_R)) throw Error(ErrorKind::domain_error, "Gamma_R must be positive");
}

double fano_from_kernel(const JunctionRates& rates, double omega, cplx A, double im_slope0)
{
    const double gl = rates.gamma_L, gr = rates.gamma_R, sig = gl + gr;
    if (!std::isfinite(A.real()) || !std::isfinite(A.imag())) return 1.0 - 2.0 * gl * gr / (sig * sig + omega * omega);
    const cplx E = A * cplx(sig, omega) + cplx(gl, omega) * cplx(gr, omega);
    const double e2 = std::norm(E);
    if (e2 == 0.0 || !std::isfinite(e2))
        throw Error(ErrorKind::pole_on_grid, "noise denominator vanishes at omega = " + std::to_string(omega));
    const double q = omega == 0.0 ? im_slope0 : A.imag() / omega;
    const double bsum = gl * (-2.0 * std::norm(A) - 2.0 * sig * A.real() + 2.0 * (gl * gr - omega * omega) * q) / e2;
    return 1.0 + gr * bsum;
}

namespace {

double literal_slope0(const SelfEnergy& se)
{
    // Im A(i omega)/omega at 0 for the literal kernel: 2 d/d omega Im c(i omega + 0)
    if (const auto* q = dynamic_cast<const QuadraticSelfEnergy*>(&se)) {
        const auto& s = q->spec();
        if (s.delta == 0.0) return std::numeric_limits<double>::infinity();
        const cplx root = std::sqrt(cplx(0.0, -s.delta));
        const cplx d = s.phase() * s.C * (-0.5) * cplx(0.0, 1.0) / (root * root * root);
        return 2.0 * d.imag();
    }
    throw Error(ErrorKind::domain_error, "literal kernel form needs the quadratic backend");
}

}  // namespace

NoiseSpectrum noise_spectrum(const JunctionRates& rates, const SelfEnergy& se, const std::vector<double>& omega,
                             const NoiseOptions& opt)
{
    rates.validate();
    NoiseSpectrum out;
    out.omega = omega;
    out.fano.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        // S is even in omega; evaluating at |omega| keeps the symmetry exact
        const double w = std::abs(omega[i]);
        const cplx A = population_kernel(se, w, opt.form);
        const double s0 = (w == 0.0 && opt.form == KernelForm::literal) ? literal_slope0(se) : 0.0;
        out.fano[i] = fano_from_kernel(rates, w, A, s0);
    }
    return out;
}

double markov_fano(const JunctionRates& rates, double gamma, double omega)
{
    return fano_from_kernel(rates, std::abs(omega), cplx(gamma, 0.0));
}

std::vector<double> detect_jumps(const std::vector<double>& omega, const std::vector<double>& fano,
                                 const JumpOptions& opt)
{
    std::vector<double> out;
    const std::size_t n = fano.size();
    if (n < 2 || omega.size() != n) return out;
    std::vector<double> d(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) d[j] = std::abs(fano[j + 1] - fano[j]);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (!(d[j] > opt.min_jump)) continue;
        const double l = j == 0 ? 0.0 : d[j - 1];
        const double r = j + 2 == n ? 0.0 : d[j + 1];
        if (d[j] > opt.prominence * std::max(l, r)) out.push_back(0.5 * (omega[j] + omega[j + 1]));
    }
    return out;
}

NoiseMap noise_map(const JunctionRates& rates, const SelfEnergyFactory& factory, const std::vector<double>& delta,
                   const std::vector<double>& omega, const NoiseOptions& opt, const JumpOptions& jopt)
{
    rates.validate();
    NoiseMap m;
    m.delta = delta;
    m.omega = omega;
    m.fano.assign(delta.size() * omega.size(), 0.0);
    std::vector<std::vector<double>> row_jumps(delta.size());
    parallel_for(delta.size(), [&](std::size_t i) {
        const auto se = factory(delta[i]);
        const auto row = noise_spectrum(rates, *se, omega, opt);
        std::copy(row.fano.begin(), row.fano.end(), m.fano.begin() + static_cast<std::ptrdiff_t>(i * omega.size()));
        row_jumps[i] = detect_jumps(omega, row.fano, jopt);
    });
    for (std::size_t i = 0; i < delta.size(); ++i)
        for (double w : row_jumps[i]) m.jumps.push_back({delta[i], w});
    return m;
}

std::vector<double> symmetric_grid(double half_width, std::size_t count)
{
    if (!(half_width > 0.0) || count < 2) throw Error(ErrorKind::domain_error, "grid needs half_width > 0, count >= 2");
    const double step = 2.0 * half_width / static_cast<double>(count - 1);
    std::vector<double> g(count);
    for (std::size_t j = 0; j < count; ++j) {
        const auto m = static_cast<long long>(2 * j) - static_cast<long long>(count - 1);
        g[j] = static_cast<double>(m) * (0.5 * step);
    }
    return g;
}

std::vector<double> offset_grid(double half_width, std::size_t count)
{
    auto g = symmetric_grid(half_width, count);
    const double step = 2.0 * half_width / static_cast<double>(count - 1);
    for (double& v : g) v += 0.5 * step;
    return g;
}

}  // namespace pqd
