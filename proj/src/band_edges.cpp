#include "pqd/band_edges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace pqd {

const char* to_string(ExtremumKind kind) { return kind == ExtremumKind::minimum ? "minimum" : "maximum"; }

double fit_curvature(const std::vector<double>& k, const std::vector<double>& w, double k_c, double w_c,
                     ExtremumKind kind)
{
    const double sign = kind == ExtremumKind::minimum ? 1.0 : -1.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double x2 = (k[i] - k_c) * (k[i] - k_c);
        num += x2 * sign * (w[i] - w_c);
        den += x2 * x2;
    }
    return den > 0.0 ? num / den : 0.0;
}

namespace {

struct Fit {
    double A = 0.0;
    double dev = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
};

Fit fit_window(const std::vector<double>& kk, const std::vector<double>& ww, double k_c, double w_c,
               ExtremumKind kind)
{
    Fit f;
    f.points = kk.size();
    if (kk.size() < 3) return f;
    f.A = fit_curvature(kk, ww, k_c, w_c, kind);
    const double sign = kind == ExtremumKind::minimum ? 1.0 : -1.0;
    f.dev = 0.0;
    for (std::size_t i = 0; i < kk.size(); ++i) {
        const double x = kk[i] - k_c;
        f.dev = std::max(f.dev, std::abs(ww[i] - w_c - sign * f.A * x * x));
    }
    return f;
}

// Vertex of the parabola through three points.
void vertex(double x0, double y0, double x1, double y1, double x2, double y2, double& xv, double& yv)
{
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    const double b = d01 - a * (x0 + x1);
    const double c = y0 - x0 * (a * x0 + b);
    xv = -b / (2.0 * a);
    yv = c + xv * (a * xv + b);
}

}  // namespace

std::vector<BandEdgePoint> locate_band_edges(int n, const std::vector<double>& k, const std::vector<double>& w,
                                             const std::vector<int>& run, const RealCurve& polished,
                                             const EdgeFitOptions& opt)
{
    std::vector<BandEdgePoint> out;
    const std::size_t N = k.size();
    if (N < 3 || w.size() != N || run.size() != N) return out;

    struct Candidate {
        std::size_t i, lo, hi;
        ExtremumKind kind;
    };
    std::vector<Candidate> cands;
    std::size_t start = 0;
    while (start < N) {
        std::size_t end = start;
        while (end + 1 < N && run[end + 1] == run[start]) ++end;
        if (run[start] >= 0)
            for (std::size_t i = start + 1; i < end; ++i) {
                if (w[i] < w[i - 1] && w[i] <= w[i + 1]) cands.push_back({i, start, end, ExtremumKind::minimum});
                if (w[i] > w[i - 1] && w[i] >= w[i + 1]) cands.push_back({i, start, end, ExtremumKind::maximum});
            }
        start = end + 1;
    }

    for (std::size_t c = 0; c < cands.size(); ++c) {
        const auto& cd = cands[c];
        const std::size_t i = cd.i;
        const double sign = cd.kind == ExtremumKind::minimum ? 1.0 : -1.0;
        BandEdgePoint e;
        e.n = n;
        e.kind = cd.kind;
        if (polished) {
            auto f = [&](double kk) { return sign * polished(kk); };
            const auto r = boost::math::tools::brent_find_minima(f, k[i - 1], k[i + 1],
                                                                 std::numeric_limits<double>::digits / 2);
            e.k_c = r.first;
            e.omega_c = sign * r.second;
        } else {
            vertex(k[i - 1], w[i - 1], k[i], w[i], k[i + 1], w[i + 1], e.k_c, e.omega_c);
        }

        // Largest window that stays inside the run and clear of neighbouring extrema.
        double h = std::min(e.k_c - k[cd.lo], k[cd.hi] - e.k_c);
        if (c > 0 && cands[c - 1].lo == cd.lo) h = std::min(h, 0.5 * (e.k_c - k[cands[c - 1].i]));
        if (c + 1 < cands.size() && cands[c + 1].lo == cd.lo) h = std::min(h, 0.5 * (k[cands[c + 1].i] - e.k_c));

        auto fit_at = [&](double hw) {
            std::vector<double> kk, ww;
            if (polished) {
                const int m = std::max(5, opt.fit_points);
                for (int j = 0; j < m; ++j) {
                    const double x = e.k_c - hw + 2.0 * hw * j / (m - 1);
                    kk.push_back(x);
                    ww.push_back(polished(x));
                }
            } else {
                for (std::size_t j = cd.lo; j <= cd.hi; ++j)
                    if (std::abs(k[j] - e.k_c) <= hw * (1.0 + 1e-12)) {
                        kk.push_back(k[j]);
                        ww.push_back(w[j]);
                    }
            }
            return fit_window(kk, ww, e.k_c, e.omega_c, cd.kind);
        };

        const double tol = opt.fit_tol * std::abs(e.omega_c);
        Fit cur = fit_at(h);
        bool accepted = false;
        for (int it = 0; it < 48 && cur.points >= 3; ++it) {
            const Fit half = fit_at(0.5 * h);
            if (cur.dev <= tol && cur.A > 0.0) {
                const bool stable = half.points < 3 || std::abs(half.A - cur.A) <= opt.stability * cur.A;
                if (stable) {
                    accepted = true;
                    break;
                }
            }
            h *= 0.5;
            cur = half;
        }
        if (!accepted || !(cur.A > 0.0)) continue;
        e.A = cur.A;
        e.fit_window = h;
        out.push_back(e);
    }
    return out;
}

}  // namespace pqd
