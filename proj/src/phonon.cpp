#include "pqd/phonon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "pqd/parallel.hpp"

namespace pqd {

void ElasticSlab::validate() const
{
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::domain_error, "slab width must be positive");
    if (!(c_t > 0.0) || !std::isfinite(c_t)) throw Error(ErrorKind::domain_error, "c_t must be positive");
    if (!(c_l > c_t) || !std::isfinite(c_l)) throw Error(ErrorKind::domain_error, "c_l must exceed c_t");
}

const char* to_string(PhononFamily f) { return f == PhononFamily::dilatational ? "dilatational" : "flexural"; }

PhononFamily parse_phonon_family(const std::string& s)
{
    if (s == "dilatational") return PhononFamily::dilatational;
    if (s == "flexural") return PhononFamily::flexural;
    throw Error(ErrorKind::unknown_tag, "phonon family '" + s + "' (expected dilatational or flexural)");
}

namespace {

constexpr double pi = std::numbers::pi;

// sin(q/2)/q, regular at q = 0
cplx half_sinc(cplx q)
{
    if (std::abs(q) < 1e-3) {
        const cplx q2 = q * q;
        return 0.5 * (1.0 - q2 / 24.0 + q2 * q2 / 1920.0);
    }
    return std::sin(0.5 * q) / q;
}

double real_residual(PhononFamily f, double Q, double W, double ratio)
{
    return rayleigh_lamb_parts(f, Q, W, ratio).value.real();
}

double refine(PhononFamily f, double Q, double ratio, double a, double b, double fa, double fb)
{
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    boost::uintmax_t iters = 200;
    auto g = [&](double W) { return real_residual(f, Q, W, ratio); };
    const auto br = boost::math::tools::toms748_solve(g, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52),
                                                      iters);
    return 0.5 * (br.first + br.second);
}

// Roots on the node list: sign changes, plus close pairs hidden between nodes where |R| dips.
// W = 0 solves the equation for every Q; near it the two terms cancel and nodes whose value is
// below the rounding floor carry no sign information, so they are dropped.
std::vector<double> scan_nodes(PhononFamily f, double Q, double ratio, const std::vector<double>& nodes)
{
    std::vector<double> W, r;
    for (double x : nodes) {
        const auto p = rayleigh_lamb_parts(f, Q, x, ratio);
        if (std::abs(p.value.real()) <= 1e-14 * p.magnitude) continue;
        W.push_back(x);
        r.push_back(p.value.real());
    }
    std::vector<double> roots;
    for (std::size_t j = 0; j + 1 < W.size(); ++j) {
        if (r[j] == 0.0) {
            roots.push_back(W[j]);
            continue;
        }
        if ((r[j] < 0.0) != (r[j + 1] < 0.0) && r[j + 1] != 0.0) {
            roots.push_back(refine(f, Q, ratio, W[j], W[j + 1], r[j], r[j + 1]));
            continue;
        }
        if (j == 0 || r[j + 1] == 0.0) continue;
        const bool same = (r[j - 1] < 0.0) == (r[j] < 0.0) && (r[j] < 0.0) == (r[j + 1] < 0.0);
        if (!same || !(std::abs(r[j]) < std::abs(r[j - 1]) && std::abs(r[j]) <= std::abs(r[j + 1]))) continue;
        const double s = r[j] > 0.0 ? 1.0 : -1.0;
        auto h = [&](double x) { return s * real_residual(f, Q, x, ratio); };
        const auto m = boost::math::tools::brent_find_minima(h, W[j - 1], W[j + 1], 52);
        if (m.second < 0.0) {
            const double wm = m.first, rm = s * m.second;
            // roots on either side of the dip; the left one may already sit before node j
            const double left_a = wm > W[j] ? W[j] : W[j - 1];
            const double left_fa = wm > W[j] ? r[j] : r[j - 1];
            const double right_b = wm > W[j] ? W[j + 1] : W[j];
            const double right_fb = wm > W[j] ? r[j + 1] : r[j];
            roots.push_back(refine(f, Q, ratio, left_a, wm, left_fa, rm));
            roots.push_back(refine(f, Q, ratio, wm, right_b, rm, right_fb));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

PhononSample make_phonon_sample(PhononFamily f, double Q, double W, double ratio)
{
    const auto p = rayleigh_lamb_parts(f, Q, W, ratio);
    PhononSample s;
    s.q_w = Q;
    s.omega_w = W;
    s.ql_w = p.ql;
    s.qt_w = p.qt;
    s.residual = p.scale > 0.0 ? std::abs(p.value) / p.scale : std::abs(p.value);
    return s;
}

}  // namespace

PhononResidual rayleigh_lamb_parts(PhononFamily family, double Q, double W, double ratio)
{
    PhononResidual out;
    out.ql = std::sqrt(cplx(W * W / (ratio * ratio) - Q * Q, 0.0));
    out.qt = std::sqrt(cplx(W * W - Q * Q, 0.0));
    const cplx& ql = out.ql;
    const cplx& qt = out.qt;
    const cplx d = Q * Q - qt * qt;
    cplx t1, t2;
    if (family == PhononFamily::dilatational) {
        t1 = half_sinc(qt) * std::cos(0.5 * ql) * d * d;
        t2 = 4.0 * Q * Q * ql * std::sin(0.5 * ql) * std::cos(0.5 * qt);
    } else {
        t1 = half_sinc(ql) * std::cos(0.5 * qt) * d * d;
        t2 = 4.0 * Q * Q * qt * std::sin(0.5 * qt) * std::cos(0.5 * ql);
    }
    out.value = t1 + t2;
    out.magnitude = std::abs(t1) + std::abs(t2);
    // factor-wise bounds, so a term that vanishes through sin or cos still sets the scale
    auto bound = [](cplx q) { return std::cosh(0.5 * std::abs(q.imag())); };
    const cplx qs = family == PhononFamily::dilatational ? qt : ql;
    const cplx qo = family == PhononFamily::dilatational ? ql : qt;
    const double b = bound(ql) * bound(qt);
    out.scale = std::norm(d) * b * std::min(0.5, 1.0 / std::abs(qs)) + 4.0 * Q * Q * std::abs(qo) * b;
    return out;
}

cplx rayleigh_lamb_residual(PhononFamily family, double q_parallel, double omega, const ElasticSlab& slab)
{
    slab.validate();
    if (!(q_parallel >= 0.0)) throw Error(ErrorKind::domain_error, "q_parallel must be >= 0");
    if (!(omega > 0.0)) throw Error(ErrorKind::domain_error, "omega must be positive");
    return rayleigh_lamb_parts(family, q_parallel * slab.w, omega * slab.w / slab.c_t, slab.ratio()).value;
}

std::vector<double> phonon_cutoffs(PhononFamily family, double ratio, std::size_t count)
{
    if (!(ratio > 1.0)) throw Error(ErrorKind::domain_error, "c_l/c_t must exceed 1");
    std::vector<double> c{0.0};
    // even roots 2 pi m a, odd roots (2m+1) pi b
    const double a = family == PhononFamily::dilatational ? 1.0 : ratio;
    const double b = family == PhononFamily::dilatational ? ratio : 1.0;
    for (std::size_t m = 1; m <= count; ++m) c.push_back(2.0 * pi * static_cast<double>(m) * a);
    for (std::size_t m = 0; m < count; ++m) c.push_back(static_cast<double>(2 * m + 1) * pi * b);
    std::sort(c.begin(), c.end());
    c.resize(count);
    return c;
}

std::vector<double> phonon_roots(PhononFamily family, double Q, double ratio, double W_hi)
{
    std::vector<double> W;
    // geometric nodes near 0 catch the quadratic flexural onset
    for (double x = 1e-10; x < 0.5 && x < W_hi; x *= 1.15) W.push_back(x);
    const double step = 0.02;
    for (std::size_t j = 0; 0.5 + step * static_cast<double>(j) < W_hi; ++j) W.push_back(0.5 + step * static_cast<double>(j));
    W.push_back(W_hi);
    return scan_nodes(family, Q, ratio, W);
}

std::vector<PhononBranch> trace_phonon_branches(const ElasticSlab& slab, PhononFamily family, std::size_t branch_count,
                                                const std::vector<double>& q_grid, const PhononTraceOptions& opt)
{
    slab.validate();
    if (branch_count == 0 || branch_count > 12) throw Error(ErrorKind::domain_error, "branch_count must be in 1..12");
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (!(q_grid[i] >= 0.0) || !std::isfinite(q_grid[i])) throw Error(ErrorKind::domain_error, "Q must be >= 0");
        if (i > 0 && !(q_grid[i] > q_grid[i - 1])) throw Error(ErrorKind::domain_error, "Q grid must increase");
    }
    const double k = slab.ratio();
    const auto cut = phonon_cutoffs(family, k, branch_count);

    // upper scan limit: every branch lies below the longitudinal line W = k Q shifted by the top cutoff
    const double top = cut.back() + 2.0 * pi;
    std::vector<std::vector<double>> roots(q_grid.size());
    parallel_for(q_grid.size(), [&](std::size_t i) {
        const double Q = q_grid[i];
        if (Q == 0.0) {
            roots[i] = cut;
            return;
        }
        double hi = top + k * Q;
        for (int tries = 0; tries < 6; ++tries) {
            roots[i] = phonon_roots(family, Q, k, hi);
            if (roots[i].size() >= branch_count) break;
            hi *= 1.5;
        }
    });

    std::vector<PhononBranch> out(branch_count);
    for (std::size_t n = 0; n < branch_count; ++n) {
        out[n].family = family;
        out[n].index = static_cast<int>(n);
        out[n].ratio = k;
        out[n].cutoff = cut[n];
    }
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        const double Q = q_grid[i];
        const auto& r = roots[i];
        if (r.size() < branch_count)
            throw Error(ErrorKind::branch_lost, "only " + std::to_string(r.size()) + " roots at Q = " + std::to_string(Q));
        for (std::size_t n = 0; n + 1 < branch_count; ++n)
            if (Q > 0.0 && r[n + 1] - r[n] < opt.ambiguity * r[n + 1])
                throw Error(ErrorKind::branch_crossing_ambiguity,
                            "branches " + std::to_string(n) + " and " + std::to_string(n + 1) +
                                " meet at Q = " + std::to_string(Q));
        for (std::size_t n = 0; n < branch_count; ++n) {
            auto& s = out[n].samples;
            double pred = cut[n];
            if (s.size() >= 2) {
                const auto& a = s[s.size() - 2];
                const auto& b = s.back();
                pred = b.omega_w + (b.omega_w - a.omega_w) / (b.q_w - a.q_w) * (Q - b.q_w);
            } else if (s.size() == 1) {
                pred = s.back().omega_w;
            }
            if (std::abs(r[n] - pred) > opt.max_jump + k * (s.empty() ? 0.0 : Q - s.back().q_w))
                throw Error(ErrorKind::branch_lost, std::string(to_string(family)) + " branch " + std::to_string(n) +
                                                        " jumps from the predictor at Q = " + std::to_string(Q));
            s.push_back(make_phonon_sample(family, Q, r[n], k));
        }
    }
    return out;
}

double phonon_root_at(const PhononBranch& branch, double Q)
{
    const auto& s = branch.samples;
    if (s.size() < 2) throw Error(ErrorKind::domain_error, "branch needs at least two samples");
    auto it = std::lower_bound(s.begin(), s.end(), Q, [](const PhononSample& a, double q) { return a.q_w < q; });
    std::size_t j = static_cast<std::size_t>(it - s.begin());
    j = std::clamp<std::size_t>(j, 1, s.size() - 1);
    const auto& a = s[j - 1];
    const auto& b = s[j];
    if (Q == a.q_w) return a.omega_w;
    if (Q == b.q_w) return b.omega_w;
    const double guess = a.omega_w + (b.omega_w - a.omega_w) * (Q - a.q_w) / (b.q_w - a.q_w);
    const double half = std::max(0.05, 2.0 * std::abs(b.omega_w - a.omega_w));
    std::vector<double> W;
    const int nodes = 64;
    for (int i = 0; i <= nodes; ++i) W.push_back(std::max(1e-12, guess - half + 2.0 * half * i / nodes));
    const auto r = scan_nodes(branch.family, Q, branch.ratio, W);
    if (r.empty()) throw Error(ErrorKind::branch_lost, "no root near the branch at Q = " + std::to_string(Q));
    return *std::min_element(r.begin(), r.end(),
                             [&](double x, double y) { return std::abs(x - guess) < std::abs(y - guess); });
}

std::vector<BandEdgePoint> find_phonon_band_edges(const PhononBranch& branch, const EdgeFitOptions& opt)
{
    const auto& s = branch.samples;
    if (s.size() < 9) throw Error(ErrorKind::domain_error, "band-edge search needs at least 9 samples");
    std::vector<double> k, w;
    for (const auto& x : s) {
        k.push_back(x.q_w);
        w.push_back(x.omega_w);
    }
    const std::vector<int> run(s.size(), 0);
    return locate_band_edges(branch.index, k, w, run, [&](double Q) { return phonon_root_at(branch, Q); }, opt);
}

double onset_exponent(PhononFamily family, double ratio, double q_lo, double q_hi, std::size_t points)
{
    if (!(q_lo > 0.0 && q_hi > q_lo) || points < 2) throw Error(ErrorKind::domain_error, "bad onset fit range");
    std::vector<double> x(points), y(points);
    parallel_for(points, [&](std::size_t i) {
        const double Q = q_lo * std::pow(q_hi / q_lo, static_cast<double>(i) / static_cast<double>(points - 1));
        const auto r = phonon_roots(family, Q, ratio, 2.0 * ratio * Q + 0.5);
        if (r.empty()) throw Error(ErrorKind::branch_lost, "no onset root at Q = " + std::to_string(Q));
        x[i] = std::log(Q);
        y[i] = std::log(r.front());
    });
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(points);
    my /= static_cast<double>(points);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace pqd
