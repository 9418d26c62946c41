#include "pqd/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "pqd/parallel.hpp"

namespace pqd {

namespace {

constexpr cplx I{0.0, 1.0};

bool lossless(const DispersionSetup& s) { return std::isinf(s.drude.tau); }

OuterSheet resolve_sheet(double k_z, cplx omega, const DispersionSetup& s, OuterSheet sheet)
{
    if (sheet != OuterSheet::automatic) return sheet;
    return (k_z * k_z - s.outer.eps_O * omega * omega).real() > 0.0 ? OuterSheet::bound : OuterSheet::leaky;
}

}  // namespace

const char* to_string(OuterSheet sheet)
{
    switch (sheet) {
    case OuterSheet::automatic: return "automatic";
    case OuterSheet::bound: return "bound";
    case OuterSheet::leaky: return "leaky";
    }
    return "?";
}

void DispersionSetup::validate() const
{
    drude.validate();
    outer.validate();
    geom.validate();
    units.validate();
}

ResidualParts dispersion_parts(int n, double k_z, cplx omega, const DispersionSetup& setup, OuterSheet sheet)
{
    if (omega == cplx(0.0)) throw Error(ErrorKind::domain_error, "dispersion residual needs omega != 0");
    if (!(k_z >= 0.0)) throw Error(ErrorKind::domain_error, "k_z must be non-negative");
    if (n < 0 || n > kMaxCylinderOrder) throw Error(ErrorKind::domain_error, "mode order out of range");

    ResidualParts p;
    p.sheet = resolve_sheet(k_z, omega, setup, sheet);
    const double R = setup.geom.R;
    const double eO = setup.outer.eps_O;
    const cplx eI = drude_epsilon(setup.drude, omega, setup.units);
    const cplx w2 = omega * omega;

    // J'(x)/(x J(x)) is even in x, so the inner root needs no sheet choice.
    p.K_I = std::sqrt(eI * w2 - k_z * k_z);
    p.K_O = p.sheet == OuterSheet::bound ? I * std::sqrt(k_z * k_z - eO * w2) : std::sqrt(eO * w2 - k_z * k_z);
    const cplx xI = p.K_I * R, xO = p.K_O * R;

    const auto j = cylinder_bessel(CylinderKind::BesselJ, n, xI);
    const auto h = cylinder_bessel(CylinderKind::Hankel1, n, xO);
    const cplx rI = j.derivative / (xI * j.value);
    const cplx rO = h.derivative / (xO * h.value);

    p.bracket1 = rI - rO;
    p.bracket2 = w2 * (eI * rI - eO * rO);
    const cplx d = 1.0 / (xO * xO) - 1.0 / (xI * xI);
    p.coupling = static_cast<double>(n * n) * k_z * k_z * d * d;
    p.value = p.bracket1 * p.bracket2 - p.coupling;

    const double aI = std::abs(rI), aO = std::abs(rO);
    const double inv = 1.0 / std::norm(xO) + 1.0 / std::norm(xI);
    p.scale = (aI + aO) * std::abs(w2) * (std::abs(eI) * aI + eO * aO) +
              static_cast<double>(n * n) * k_z * k_z * inv * inv;
    return p;
}

cplx dispersion_residual(int n, double k_z, cplx omega, const DispersionSetup& setup, OuterSheet sheet)
{
    return dispersion_parts(n, k_z, omega, setup, sheet).value;
}

double normalized_residual(int n, double k_z, cplx omega, const DispersionSetup& setup, OuterSheet sheet)
{
    const auto p = dispersion_parts(n, k_z, omega, setup, sheet);
    return std::abs(p.value) / p.scale;
}

bool is_bound(double k_z, cplx omega, const DispersionSetup& setup)
{
    const double line = setup.light_line == LightLine::vacuum ? 1.0 : std::sqrt(setup.outer.eps_O);
    return k_z > line * omega.real();
}

DispersionSample make_sample(int n, double k_z, cplx omega, OuterSheet sheet, const DispersionSetup& setup)
{
    const auto p = dispersion_parts(n, k_z, omega, setup, sheet);
    DispersionSample s;
    s.n = n;
    s.k_z = k_z;
    s.omega = omega;
    s.K_I = p.K_I;
    s.K_O = p.K_O;
    s.sheet = p.sheet;
    s.bound = is_bound(k_z, omega, setup);
    s.residual = std::abs(p.value) / p.scale;
    return s;
}

cplx polish_root(int n, double k_z, cplx guess, OuterSheet sheet, const DispersionSetup& setup, double tol)
{
    const double s0 = dispersion_parts(n, k_z, guess, setup, sheet).scale;
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw NoConvergence("residual scale not finite at guess", guess, s0);
    auto f = [&](cplx w) { return dispersion_residual(n, k_z, w, setup, sheet) / s0; };
    cplx w = find_root_complex(f, guess, std::max(1e-14, 0.1 * tol));
    const bool real_root = lossless(setup) && sheet == OuterSheet::bound && guess.imag() == 0.0;
    if (real_root) w = cplx(w.real(), 0.0);
    const double r = normalized_residual(n, k_z, w, setup, sheet);
    if (!(r < tol)) throw NoConvergence("normalized residual above tolerance after polish", w, r);
    return w;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count)
{
    if (count < 2 || !(hi > lo)) throw Error(ErrorKind::domain_error, "grid needs count >= 2 and hi > lo");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return g;
}

ModeBranch trace_branch(int n, const std::vector<double>& k_z, cplx seed, OuterSheet sheet,
                        const DispersionSetup& setup, const TraceOptions& opt)
{
    setup.validate();
    if (k_z.empty()) throw Error(ErrorKind::domain_error, "empty k_z grid");
    for (std::size_t i = 1; i < k_z.size(); ++i)
        if (!(k_z[i] > k_z[i - 1])) throw Error(ErrorKind::domain_error, "k_z grid must be strictly increasing");
    if (sheet == OuterSheet::automatic) sheet = resolve_sheet(k_z[0], seed, setup, sheet);

    ModeBranch br;
    br.n = n;
    br.setup = setup;
    const double eO = setup.outer.eps_O;
    auto valid_sheet = [&](double k, cplx w) {
        return sheet != OuterSheet::bound || (k * k - eO * w * w).real() > 0.0;
    };

    cplx w0;
    try {
        w0 = polish_root(n, k_z[0], seed, sheet, setup, opt.root_tol);
    } catch (const Error& e) {
        throw BranchLost(std::string("seed does not polish: ") + e.what(), br);
    }
    br.samples.push_back(make_sample(n, k_z[0], w0, sheet, setup));

    double k_prev = std::numeric_limits<double>::quiet_NaN();
    cplx w_prev;
    double k_cur = k_z[0];
    cplx w_cur = w0;
    for (std::size_t i = 1; i < k_z.size(); ++i) {
        const double full = k_z[i] - k_z[i - 1];
        double h = full;
        int level = 0;
        while (k_cur < k_z[i]) {
            // Close to the light line the outer root varies fastest.
            const double gap = std::abs((k_cur * k_cur - eO * w_cur * w_cur).real()) / (k_cur * k_cur);
            if (gap < 0.05 && level < 2) {
                h = std::min(h, 0.25 * full);
                level = std::max(level, 2);
            }
            const double k_next = std::min(k_cur + h, k_z[i]);
            cplx pred = w_cur;
            if (!std::isnan(k_prev)) pred = w_cur + (w_cur - w_prev) * ((k_next - k_cur) / (k_cur - k_prev));
            if (lossless(setup) && sheet == OuterSheet::bound) pred = cplx(pred.real(), 0.0);
            bool ok = false;
            cplx w_new;
            try {
                w_new = polish_root(n, k_next, pred, sheet, setup, opt.root_tol);
                ok = std::abs(w_new - pred) <= opt.max_jump && valid_sheet(k_next, w_new) && w_new.real() > 0.0;
            } catch (const Error&) {
                ok = false;
            }
            if (!ok) {
                if (++level > opt.max_halvings)
                    throw BranchLost("continuation failed at k_z = " + std::to_string(k_cur) + " after refining to step/" +
                                         std::to_string(1 << opt.max_halvings),
                                     br);
                h *= 0.5;
                continue;
            }
            k_prev = k_cur;
            w_prev = w_cur;
            k_cur = k_next;
            w_cur = w_new;
            if (level > 0 && gap >= 0.05) {
                --level;
                h = std::min(2.0 * h, full);
            }
        }
        k_cur = k_z[i];
        br.samples.push_back(make_sample(n, k_z[i], w_cur, sheet, setup));
    }
    return br;
}

namespace {

// Largest real-axis bound root at k below min(1, k/sqrt(eps_O)), if any. Roots hugging the light
// line closer than onset_gap are skipped: for n >= 1 they approach it exponentially as k_z drops.
std::optional<cplx> bound_root_at(int n, double k, const DispersionSetup& setup, const TraceOptions& opt)
{
    const double top =
        std::min(1.0 - 1e-12, k * std::sqrt((1.0 - opt.onset_gap) / setup.outer.eps_O));
    auto f = [&](double w) { return dispersion_residual(n, k, w, setup, OuterSheet::bound).real(); };
    const int m = std::max(16, opt.scan_points);
    double wb = top, fb = f(top);
    for (int j = m - 1; j >= 1; --j) {
        const double wa = top * j / m;
        const double fa = f(wa);
        if (std::isfinite(fa) && std::isfinite(fb) && ((fa < 0.0) != (fb < 0.0))) {
            boost::uintmax_t iters = 200;
            const auto br = boost::math::tools::toms748_solve(
                f, wa, wb, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
            const double guess = 0.5 * (br.first + br.second);
            try {
                return polish_root(n, k, guess, OuterSheet::bound, setup, opt.root_tol);
            } catch (const Error&) {
            }
        }
        wb = wa;
        fb = fa;
    }
    return std::nullopt;
}

cplx leaky_seed(int n, double k, const DispersionSetup& setup, const TraceOptions& opt)
{
    const Rect& b = opt.seed_box;
    const cplx centre(0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi));
    const double s0 = dispersion_parts(n, k, centre, setup, OuterSheet::leaky).scale;
    auto f = [&](cplx w) { return dispersion_residual(n, k, w, setup, OuterSheet::leaky) / s0; };
    const auto roots = roots_in_rectangle(f, b, 1e-13);
    // The surface-plasmon-like root is the least damped one.
    std::optional<cplx> best;
    for (const auto& r : roots) {
        if (normalized_residual(n, k, r, setup, OuterSheet::leaky) >= opt.root_tol) continue;
        if (!best || std::abs(r.imag()) < std::abs(best->imag())) best = r;
    }
    if (!best) throw BranchLost("no leaky root in the seed rectangle at k_z = " + std::to_string(k), ModeBranch{n, {}, setup, {}});
    return *best;
}

}  // namespace

ModeBranch trace_mode(int n, const std::vector<double>& k_z, const DispersionSetup& setup, const TraceOptions& opt)
{
    setup.validate();
    std::size_t ib = k_z.size();
    std::optional<cplx> wb;
    for (std::size_t i = 0; i < k_z.size(); ++i) {
        wb = bound_root_at(n, k_z[i], setup, opt);
        if (wb) {
            ib = i;
            break;
        }
    }

    ModeBranch br;
    br.n = n;
    br.setup = setup;
    if (ib > 0) {
        const std::vector<double> head(k_z.begin(), k_z.begin() + static_cast<std::ptrdiff_t>(ib));
        const cplx seed = leaky_seed(n, head.front(), setup, opt);
        try {
            br = trace_branch(n, head, seed, OuterSheet::leaky, setup, opt);
        } catch (const BranchLost& e) {
            throw BranchLost(std::string("leaky segment: ") + e.what(), e.partial());
        }
    }
    if (ib < k_z.size()) {
        const std::vector<double> tail(k_z.begin() + static_cast<std::ptrdiff_t>(ib), k_z.end());
        try {
            const auto seg = trace_branch(n, tail, *wb, OuterSheet::bound, setup, opt);
            br.samples.insert(br.samples.end(), seg.samples.begin(), seg.samples.end());
        } catch (const BranchLost& e) {
            ModeBranch partial = br;
            partial.samples.insert(partial.samples.end(), e.partial().samples.begin(), e.partial().samples.end());
            throw BranchLost(std::string("bound segment: ") + e.what(), partial);
        }
    }
    return br;
}

std::vector<ModeBranch> trace_modes(const std::vector<int>& modes, const std::vector<double>& k_z,
                                    const DispersionSetup& setup, const TraceOptions& opt)
{
    std::vector<ModeBranch> out(modes.size());
    parallel_for(modes.size(), [&](std::size_t i) { out[i] = trace_mode(modes[i], k_z, setup, opt); });
    return out;
}

cplx branch_root_at(const ModeBranch& br, double k)
{
    if (br.model) return cplx(br.model(k), 0.0);
    if (!br.setup) throw Error(ErrorKind::domain_error, "branch carries no media setup to polish against");
    const auto& s = br.samples;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        if (s[j].k_z <= k && k <= s[j + 1].k_z && s[j].sheet == s[j + 1].sheet) {
            const double t = (k - s[j].k_z) / (s[j + 1].k_z - s[j].k_z);
            if (t == 0.0) return s[j].omega;
            if (t == 1.0) return s[j + 1].omega;
            cplx guess = s[j].omega + t * (s[j + 1].omega - s[j].omega);
            if (lossless(*br.setup) && s[j].sheet == OuterSheet::bound) guess = cplx(guess.real(), 0.0);
            return polish_root(br.n, k, guess, s[j].sheet, *br.setup);
        }
    }
    throw Error(ErrorKind::grid_outside_span, "k_z = " + std::to_string(k) + " outside a single-sheet segment");
}

std::vector<BandEdgePoint> find_band_edges(const ModeBranch& branch, const EdgeFitOptions& opt)
{
    const auto& s = branch.samples;
    std::vector<double> k(s.size()), w(s.size());
    std::vector<int> run(s.size());
    int seg = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && s[i].sheet != s[i - 1].sheet) ++seg;
        k[i] = s[i].k_z;
        w[i] = s[i].omega.real();
        run[i] = (s[i].bound && s[i].sheet == OuterSheet::bound) ? seg : -1;
    }
    RealCurve polished;
    if (branch.polishable()) polished = [&](double kk) { return branch_root_at(branch, kk).real(); };
    return locate_band_edges(branch.n, k, w, run, polished, opt);
}

}  // namespace pqd
