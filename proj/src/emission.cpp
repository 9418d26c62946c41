#include "pqd/emission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

// pchip.hpp in Boost 1.74 uses isnan without including its declaration
#include <boost/math/special_functions/fpclassify.hpp>
using boost::math::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "pqd/parallel.hpp"

namespace pqd {

void CouplingModel::validate() const
{
    if (mode == Mode::uniform) {
        if (!(scale >= 0.0)) throw Error(ErrorKind::domain_error, "coupling weight must be non-negative");
        return;
    }
    for (const auto& [n, t] : tables) {
        if (t.k.size() != t.weight.size() || t.k.size() < 2)
            throw Error(ErrorKind::domain_error, "coupling table for n = " + std::to_string(n) + " needs >= 2 rows");
        for (std::size_t i = 0; i < t.k.size(); ++i) {
            if (!(t.weight[i] >= 0.0)) throw Error(ErrorKind::domain_error, "coupling weights must be non-negative");
            if (i > 0 && !(t.k[i] > t.k[i - 1])) throw Error(ErrorKind::domain_error, "coupling table k must increase");
        }
    }
}

double CouplingModel::weight(int n, double k_z) const
{
    if (mode == Mode::uniform) return scale;
    const auto it = tables.find(n);
    if (it == tables.end()) return 0.0;
    const auto& t = it->second;
    if (k_z <= t.k.front()) return t.weight.front();
    if (k_z >= t.k.back()) return t.weight.back();
    if (t.k.size() < 4) {
        const auto j = static_cast<std::size_t>(std::upper_bound(t.k.begin(), t.k.end(), k_z) - t.k.begin()) - 1;
        const double s = (k_z - t.k[j]) / (t.k[j + 1] - t.k[j]);
        return t.weight[j] + s * (t.weight[j + 1] - t.weight[j]);
    }
    auto x = t.k;
    auto y = t.weight;
    const boost::math::interpolators::pchip<std::vector<double>> p(std::move(x), std::move(y));
    return std::max(0.0, p(k_z));
}

namespace {

struct Run {
    const ModeBranch* br;
    std::vector<double> k, w;  // samples of the run, with refined band edges spliced in
    std::vector<double> edges;
    bool polished;
};

std::vector<Run> collect_runs(const ModeBranch& br, const std::vector<BandEdgePoint>& edges)
{
    std::vector<Run> runs;
    const auto& s = br.samples;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!(s[i].bound && s[i].sheet == OuterSheet::bound)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1].bound && s[j + 1].sheet == OuterSheet::bound) ++j;
        if (j > i) {
            Run r{&br, {}, {}, {}, br.polishable()};
            for (std::size_t m = i; m <= j; ++m) {
                for (const auto& e : edges)
                    if (m > i && e.k_c > s[m - 1].k_z && e.k_c < s[m].k_z) {
                        r.k.push_back(e.k_c);
                        r.w.push_back(e.omega_c);
                        r.edges.push_back(e.k_c);
                    }
                r.k.push_back(s[m].k_z);
                r.w.push_back(s[m].omega.real());
            }
            runs.push_back(std::move(r));
        }
        i = j + 1;
    }
    return runs;
}

double curve(const Run& r, std::size_t j, double k)
{
    if (k == r.k[j]) return r.w[j];
    if (k == r.k[j + 1]) return r.w[j + 1];
    if (r.polished) return branch_root_at(*r.br, k).real();
    const double s = (k - r.k[j]) / (r.k[j + 1] - r.k[j]);
    return r.w[j] + s * (r.w[j + 1] - r.w[j]);
}

double polished_at(const Run& r, double k) { return branch_root_at(*r.br, k).real(); }

double slope(const Run& r, std::size_t j, double k, const SEOptions& opt)
{
    if (!r.polished) return (r.w[j + 1] - r.w[j]) / (r.k[j + 1] - r.k[j]);
    double h = opt.diff_fraction * (r.k[j + 1] - r.k[j]);
    for (double kc : r.edges) h = std::min(h, opt.diff_fraction * std::abs(k - kc));
    const double lo = r.k.front(), hi = r.k.back();
    auto f = [&](double x) { return polished_at(r, x); };
    if (k - 2.0 * h >= lo && k + 2.0 * h <= hi)
        return (f(k - 2.0 * h) - 8.0 * f(k - h) + 8.0 * f(k + h) - f(k + 2.0 * h)) / (12.0 * h);
    const double s = (k - 2.0 * h < lo) ? 1.0 : -1.0;
    const double hh = s * h;
    return (-25.0 * f(k) + 48.0 * f(k + hh) - 36.0 * f(k + 2.0 * hh) + 16.0 * f(k + 3.0 * hh) - 3.0 * f(k + 4.0 * hh)) /
           (12.0 * hh);
}

std::vector<std::pair<std::size_t, double>> run_crossings(const Run& r, double w0)
{
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t j = 0; j + 1 < r.k.size(); ++j) {
        const double a = r.w[j] - w0, b = r.w[j + 1] - w0;
        if (!((a <= 0.0 && b > 0.0) || (a > 0.0 && b <= 0.0))) continue;
        double ks;
        if (a == 0.0) {
            ks = r.k[j];
        } else if (b == 0.0) {
            ks = r.k[j + 1];
        } else {
            auto g = [&](double k) { return curve(r, j, k) - w0; };
            boost::uintmax_t iters = 100;
            const auto br = boost::math::tools::toms748_solve(g, r.k[j], r.k[j + 1], a, b,
                                                              boost::math::tools::eps_tolerance<double>(50), iters);
            ks = 0.5 * (br.first + br.second);
        }
        out.emplace_back(j, ks);
    }
    return out;
}

double run_rate(const Run& r, const CouplingModel* cm, double w0, const SEOptions& opt)
{
    double total = 0.0;
    for (const auto& [j, ks] : run_crossings(r, w0)) {
        const double d = slope(r, j, ks, opt);
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        total += (cm ? cm->weight(r.br->n, ks) : 1.0) / std::abs(d);
    }
    return total;
}

}  // namespace

struct CrossingDensity::Impl {
    ModeBranch branch;
    SEOptions opt;
    std::vector<BandEdgePoint> edges;
    std::vector<Run> runs;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
};

CrossingDensity::CrossingDensity(const ModeBranch& branch, SEOptions opt)
{
    auto im = std::make_shared<Impl>();
    im->branch = branch;
    im->opt = opt;
    im->edges = find_band_edges(im->branch);
    im->runs = collect_runs(im->branch, im->edges);
    for (const auto& r : im->runs)
        for (double w : r.w) {
            im->lo = std::min(im->lo, w);
            im->hi = std::max(im->hi, w);
        }
    impl_ = std::move(im);
}

double CrossingDensity::operator()(double omega0, const CouplingModel* w) const
{
    double total = 0.0;
    for (const auto& r : impl_->runs) total += run_rate(r, w, omega0, impl_->opt);
    return total;
}

std::vector<double> CrossingDensity::crossings(double omega0) const
{
    std::vector<double> out;
    for (const auto& r : impl_->runs)
        for (const auto& c : run_crossings(r, omega0)) out.push_back(c.second);
    return out;
}

std::vector<std::pair<double, double>> CrossingDensity::runs() const
{
    std::vector<std::pair<double, double>> out;
    for (const auto& r : impl_->runs) out.emplace_back(r.k.front(), r.k.back());
    return out;
}

double CrossingDensity::lo() const { return impl_->lo; }
double CrossingDensity::hi() const { return impl_->hi; }
const std::vector<BandEdgePoint>& CrossingDensity::edges() const { return impl_->edges; }

SEProfile se_rate_profile(const std::vector<ModeBranch>& branches, const CouplingModel& coupling,
                          const std::vector<double>& omega0_grid, const SEOptions& opt)
{
    coupling.validate();
    std::vector<CrossingDensity> dens;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& b : branches) {
        dens.emplace_back(b, opt);
        lo = std::min(lo, dens.back().lo());
        hi = std::max(hi, dens.back().hi());
    }
    for (double w0 : omega0_grid)
        if (!(w0 >= lo && w0 <= hi))
            throw Error(ErrorKind::grid_outside_span,
                        "omega0 = " + std::to_string(w0) + " outside the traced bound span [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");

    SEProfile p;
    p.omega0 = omega0_grid;
    p.rate.assign(omega0_grid.size(), 0.0);
    p.singular.assign(omega0_grid.size(), 0);
    parallel_for(omega0_grid.size(), [&](std::size_t i) {
        double total = 0.0;
        for (const auto& d : dens) total += d(omega0_grid[i], &coupling);
        p.rate[i] = total;
    });

    // Divergences sit at interior extrema of the sampled curves; the vertex of the local parabola
    // estimates each frequency independently of the polished band-edge search.
    for (const auto& b : branches) {
        const auto& s = b.samples;
        for (std::size_t m = 1; m + 1 < s.size(); ++m) {
            auto ok = [&](std::size_t q) { return s[q].bound && s[q].sheet == OuterSheet::bound; };
            if (!ok(m - 1) || !ok(m) || !ok(m + 1)) continue;
            const double w0 = s[m - 1].omega.real(), w1 = s[m].omega.real(), w2 = s[m + 1].omega.real();
            const bool ext = (w1 < w0 && w1 <= w2) || (w1 > w0 && w1 >= w2);
            if (!ext) continue;
            const double k0 = s[m - 1].k_z, k1 = s[m].k_z, k2 = s[m + 1].k_z;
            const double d01 = (w1 - w0) / (k1 - k0), d12 = (w2 - w1) / (k2 - k1);
            const double a = (d12 - d01) / (k2 - k0);
            const double bb = d01 - a * (k0 + k1);
            const double xv = -bb / (2.0 * a);
            const double wv = w0 + (xv - k0) * (a * (xv + k0) + bb);
            p.singular_points.push_back(wv);
            if (omega0_grid.empty() || wv < omega0_grid.front() || wv > omega0_grid.back()) continue;
            std::size_t best = 0;
            for (std::size_t i = 1; i < omega0_grid.size(); ++i)
                if (std::abs(omega0_grid[i] - wv) < std::abs(omega0_grid[best] - wv)) best = i;
            p.singular[best] = 1;
        }
    }
    std::sort(p.singular_points.begin(), p.singular_points.end());
    return p;
}

}  // namespace pqd
