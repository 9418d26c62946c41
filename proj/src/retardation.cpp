#include "pqd/retardation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "pqd/parallel.hpp"

namespace pqd {

const char* to_string(RateConvention c) { return c == RateConvention::amplitude ? "amplitude" : "population"; }

RateConvention parse_rate_convention(const std::string& s)
{
    if (s == "amplitude") return RateConvention::amplitude;
    if (s == "population") return RateConvention::population;
    throw Error(ErrorKind::unknown_tag, "rate convention '" + s + "' (expected amplitude or population)");
}

void TwoDotConfig::validate() const
{
    if (!(gamma_0 > 0.0) || !std::isfinite(gamma_0)) throw Error(ErrorKind::domain_error, "gamma_0 must be positive");
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::domain_error, "separation r must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain_error, "group velocity v must be positive");
    if (theta && !std::isfinite(*theta)) throw Error(ErrorKind::domain_error, "theta must be finite");
    if (omega0_over_gamma0 && !(*omega0_over_gamma0 > 0.0))
        throw Error(ErrorKind::domain_error, "omega0/gamma_0 must be positive");
    if (coupled && !theta && !omega0_over_gamma0)
        throw Error(ErrorKind::domain_error, "coupled dots need theta or omega0_over_gamma0");
}

double TwoDotConfig::amplitude_rate() const
{
    return convention == RateConvention::amplitude ? gamma_0 : 0.5 * gamma_0;
}

double TwoDotConfig::phase() const
{
    if (theta) return *theta;
    if (omega0_over_gamma0) return gamma_0 * tau_d() * *omega0_over_gamma0;
    return 0.0;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Phase step per order: i e^{i theta}, theta reduced first so large k0 r keeps its digits.
double order_phase(const TwoDotConfig& cfg)
{
    return std::remainder(cfg.phase(), two_pi) + 0.5 * std::numbers::pi;
}

struct Pair {
    cplx b1, b2;
};

Pair series_at(const TwoDotConfig& cfg, double t, std::size_t m_max)
{
    const double g = cfg.amplitude_rate();
    if (!cfg.coupled) return {std::exp(-g * t), 0.0};
    const double tau = cfg.tau_d();
    const double ph = order_phase(cfg);
    const auto m_top = static_cast<std::size_t>(std::floor(t / tau));
    const std::size_t m_use = std::min(m_max, m_top);
    auto logmag = [&](std::size_t m) {
        const double md = static_cast<double>(m);
        const double x = t - md * tau;
        if (m > 0 && !(x > 0.0)) return -std::numeric_limits<double>::infinity();
        return (m > 0 ? md * std::log(g * x) : 0.0) - std::lgamma(md + 1.0) - g * x;
    };
    // log|term| is concave in m, so only a window around its peak contributes at double precision
    std::size_t lo = 0, hi = m_use;
    if (m_use > 32) {
        std::size_t a = 0, b = m_use;
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            if (logmag(mid + 1) > logmag(mid)) a = mid + 1;
            else b = mid;
        }
        const double peak = logmag(a);
        lo = a;
        while (lo > 0 && logmag(lo - 1) > peak - 80.0) --lo;
        hi = a;
        while (hi < m_use && logmag(hi + 1) > peak - 80.0) ++hi;
    }
    Pair p{0.0, 0.0};
    double last = 0.0;
    for (std::size_t m = lo; m <= hi; ++m) {
        const double lm = logmag(m);
        if (!std::isfinite(lm)) continue;
        const cplx term = std::polar(std::exp(lm), std::remainder(static_cast<double>(m) * ph, two_pi));
        (m % 2 == 0 ? p.b1 : p.b2) += term;
    }
    if (m_use < m_top) {
        last = std::exp(logmag(m_use));
        if (last > 1e-12 * (std::abs(p.b1) + std::abs(p.b2)))
            throw Error(ErrorKind::truncation_too_small, "delay series cut at m = " + std::to_string(m_max) +
                                                             " while terms up to m = " + std::to_string(m_top) +
                                                             " contribute at t = " + std::to_string(t));
    }
    return p;
}

RetardedAmplitudes pack(const TimeGrid& grid, std::vector<cplx> b1, std::vector<cplx> b2)
{
    RetardedAmplitudes out;
    out.grid = grid;
    out.survival.resize(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) out.survival[i] = std::norm(b1[i]) + std::norm(b2[i]);
    out.b1 = std::move(b1);
    out.b2 = std::move(b2);
    return out;
}

}  // namespace

std::size_t minimal_series_order(const TwoDotConfig& cfg, double t_max)
{
    return static_cast<std::size_t>(std::ceil(t_max / cfg.tau_d()));
}

RetardedAmplitudes retarded_amplitudes_series(const TwoDotConfig& cfg, const TimeGrid& grid, std::size_t m_max)
{
    cfg.validate();
    grid.validate();
    std::vector<cplx> b1(grid.count), b2(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const auto p = series_at(cfg, grid.t(i), m_max);
        b1[i] = p.b1;
        b2[i] = p.b2;
    }
    return pack(grid, std::move(b1), std::move(b2));
}

RetardedTransforms retarded_amplitudes_laplace(const TwoDotConfig& cfg, cplx s)
{
    cfg.validate();
    if (!(s.real() > 0.0)) throw Error(ErrorKind::branch_violation, "retarded transforms need Re s > 0");
    const double g = cfg.amplitude_rate();
    RetardedTransforms out;
    if (!cfg.coupled) {
        out.C_plus = out.C_minus = out.b1 = 1.0 / (s + g);
        out.b2 = 0.0;
        return out;
    }
    const cplx hop = cplx(0.0, g) * std::polar(1.0, std::remainder(cfg.phase(), two_pi)) * std::exp(-s * cfg.tau_d());
    out.C_plus = 1.0 / (s + g - hop);
    out.C_minus = 1.0 / (s + g + hop);
    out.b1 = 0.5 * (out.C_plus + out.C_minus);
    out.b2 = 0.5 * (out.C_plus - out.C_minus);
    return out;
}

RetardedAmplitudes retarded_amplitudes_inverted(const TwoDotConfig& cfg, const TimeGrid& grid,
                                                const InversionSettings& settings)
{
    cfg.validate();
    grid.validate();
    const double g = cfg.amplitude_rate();
    const double tau = cfg.tau_d();
    const std::size_t m_top = cfg.coupled ? minimal_series_order(cfg, grid.t_max()) : 0;
    const double ph = order_phase(cfg);
    std::vector<cplx> b1(grid.count, 0.0), b2(grid.count, 0.0);
    std::vector<std::vector<cplx>> terms(m_top + 1, std::vector<cplx>(grid.count, 0.0));
    parallel_for(m_top + 1, [&](std::size_t m) {
        const double md = static_cast<double>(m);
        const cplx coef = std::polar(std::pow(g, md), std::remainder(md * ph, two_pi));
        auto F = [&](cplx s) { return std::pow(s + g, -(md + 1.0)); };
        std::vector<double> x;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < grid.count; ++i) {
            const double xi = grid.t(i) - md * tau;
            if (xi > 0.0) {
                x.push_back(xi);
                idx.push_back(i);
            }
        }
        if (m == 0) terms[0][0] = 1.0;
        const auto f = invert_laplace(F, x, settings);
        for (std::size_t q = 0; q < idx.size(); ++q) terms[m][idx[q]] = coef * f[q];
    });
    for (std::size_t m = 0; m <= m_top; ++m)
        for (std::size_t i = 0; i < grid.count; ++i) (m % 2 == 0 ? b1 : b2)[i] += terms[m][i];
    return pack(grid, std::move(b1), std::move(b2));
}

double survival_at(const TwoDotConfig& cfg, double t)
{
    const auto p = series_at(cfg, t, static_cast<std::size_t>(-1));
    return std::norm(p.b1) + std::norm(p.b2);
}

RetardedNoise retarded_noise_spectrum(const TwoDotConfig& cfg, const JunctionRates& rates,
                                      const std::vector<double>& omega, const RetardedNoiseOptions& opt)
{
    cfg.validate();
    rates.validate();
    const double g = cfg.amplitude_rate();
    double w_max = 0.0;
    for (double w : omega) {
        if (!std::isfinite(w)) throw Error(ErrorKind::domain_error, "omega grid must be finite");
        w_max = std::max(w_max, std::abs(w));
    }
    double h = opt.panel_width / g;
    if (w_max > 0.0) h = std::min(h, 2.0 / w_max);
    // panels never straddle a delay m tau, where the survival has a derivative jump
    const double block = cfg.coupled ? cfg.tau_d() : h;
    const auto per_block = static_cast<std::size_t>(std::ceil(block / h));
    const double ph_w = block / static_cast<double>(per_block);
    const double cap = opt.horizon_cap / g;

    using GL = boost::math::quadrature::gauss<double, 16>;
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    const double hw = 0.5 * ph_w;
    std::vector<double> off, base_w;  // node offsets from the panel centre and their weights
    for (std::size_t q = 0; q < xs.size(); ++q)
        for (int sgn : {-1, 1}) {
            if (xs[q] == 0.0 && sgn > 0) continue;
            off.push_back(sgn * hw * xs[q]);
            base_w.push_back(hw * ws[q]);
        }
    const std::size_t nq = off.size();
    std::vector<double> node_w;  // panel-major, survival folded in
    double n0 = 0.0, n1 = 0.0;
    std::size_t panels = 0;
    for (;;) {
        const double c = (static_cast<double>(panels) + 0.5) * ph_w;
        for (std::size_t q = 0; q < nq; ++q) {
            const double wt = base_w[q] * survival_at(cfg, c + off[q]);
            node_w.push_back(wt);
            n0 += wt;
            n1 += wt * (c + off[q]);
        }
        ++panels;
        const double b = static_cast<double>(panels) * ph_w;
        const double n_end = survival_at(cfg, b);
        if (n_end < opt.survival_floor) break;
        if (b >= cap) {
            if (n_end > opt.fail_level)
                throw Error(ErrorKind::transform_nonconvergence,
                            "survival still " + std::to_string(n_end) + " at the horizon cap t = " + std::to_string(b));
            break;
        }
    }

    // exponential tail past the horizon, rate from the last few delay blocks
    const double T = static_cast<double>(panels) * ph_w;
    const double nT = survival_at(cfg, T);
    const double span = std::min(0.5 * T, 8.0 * block);
    const double nb = survival_at(cfg, T - span);
    const double kappa = (nT > 0.0 && nb > nT) ? std::log(nb / nT) / span : 0.0;
    const bool tail = kappa > 0.0;
    if (tail) {
        n0 += nT / kappa;
        n1 += nT * (T / kappa + 1.0 / (kappa * kappa));
    }

    RetardedNoise out;
    out.gamma0_tau = cfg.gamma_0 * cfg.tau_d();
    out.theta = cfg.phase();
    out.horizon = static_cast<double>(panels) * ph_w;
    out.spectrum.omega = omega;
    out.spectrum.fano.resize(omega.size());
    const double slope0 = n1 / (n0 * n0) - 1.0;
    parallel_for(omega.size(), [&](std::size_t i) {
        const double w = std::abs(omega[i]);
        std::vector<cplx> f(nq);
        for (std::size_t q = 0; q < nq; ++q) f[q] = std::polar(1.0, -w * off[q]);
        const cplx rot = std::polar(1.0, -w * ph_w);
        cplx cur = 0.0, nt = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            // panel-centre phase by rotation, resynchronised now and then
            if (p % 256 == 0) cur = std::polar(1.0, -w * (static_cast<double>(p) + 0.5) * ph_w);
            cplx acc = 0.0;
            const double* wp = &node_w[p * nq];
            for (std::size_t q = 0; q < nq; ++q) acc += wp[q] * f[q];
            nt += cur * acc;
            cur *= rot;
        }
        if (tail) nt += nT * std::polar(1.0, -w * T) / cplx(kappa, w);
        const cplx A2 = 1.0 / nt - cplx(0.0, w);
        out.spectrum.fano[i] = fano_from_kernel(rates, w, A2, slope0);
    });
    return out;
}

}  // namespace pqd
