#include <algorithm>
#include <cmath>
#include <numbers>

#include "pqd/numerics.hpp"

namespace pqd {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// Parabola xi(u) = V - m u^2 + 2 i m u in the scaled variable xi = (s - shift) t.
// Half-strip width d keeps the inner image parabola clear of the singular set.
struct Contour {
    double V = 8.0;
    double d = 0.25;
    double m = 0.0;
    double U = 0.0;
    int required = 0;
};

Contour design_contour(double singular_half_height)
{
    Contour c;
    const double y = 1.2 * singular_half_height;
    if (c.V * (1.0 - c.d) / std::sqrt(c.d * (2.0 - c.d)) < y) c.d = 1.0 - y / std::sqrt(c.V * c.V + y * y);
    c.m = c.V / (2.0 * c.d * (2.0 - c.d));
    c.U = std::sqrt((c.V + 37.0) / c.m);
    const double v_outer = c.V + c.m * c.d * (2.0 + c.d);
    const double h = 2.0 * kPi * c.d / (v_outer + 34.5);
    c.required = static_cast<int>(std::ceil(2.0 * c.U / h));
    return c;
}

cplx initial_value(const ComplexFn& F, const InversionSettings& st)
{
    const cplx s(st.contour_shift + 1e10, st.center);
    return s * F(s);
}

// Trapezoid sums over nodes u = -U + k h (k even) and the interleaved midpoints (k odd).
void contour_sums(const ComplexFn& F, double t, const InversionSettings& st, const Contour& c, int n, cplx& coarse,
                  cplx& fine)
{
    const double h = 2.0 * c.U / (2 * n);
    const cplx shift(st.contour_shift, st.center);
    cplx even = 0.0, odd = 0.0;
    for (int k = 0; k <= 2 * n; ++k) {
        const double u = -c.U + k * h;
        const cplx xi(c.V - c.m * u * u, 2.0 * c.m * u);
        const cplx term = c.m * cplx(1.0, u) * std::exp(xi) * F(shift + xi / t);
        const double w = (k == 0 || k == 2 * n) ? 0.5 : 1.0;
        if (k % 2 == 0)
            even += w * term;
        else
            odd += term;
    }
    const cplx pre = std::exp(shift * t) / (kPi * t);
    coarse = pre * (2.0 * h) * even;
    fine = pre * h * (even + odd);
}

void check_doubling(cplx coarse, cplx fine, double tol, double floor)
{
    if (std::abs(fine - coarse) > tol * std::max(std::abs(fine), floor))
        throw Error(ErrorKind::oscillation_detected, "node-doubling disagreement exceeds tolerance");
}

cplx deformed_contour(const ComplexFn& F, double t, const InversionSettings& st, double floor)
{
    const Contour c = design_contour(st.extent * t);
    int n = st.node_count;
    if (st.auto_nodes) n = std::max(n, c.required);
    cplx coarse, fine;
    contour_sums(F, t, st, c, n, coarse, fine);
    check_doubling(coarse, fine, st.doubling_tol, floor);
    return fine;
}

// Accelerated partial sum of sum_k a_k z^k via the quotient-difference continued fraction.
cplx qd_sum(const std::vector<cplx>& a, cplx z)
{
    const int M2 = static_cast<int>(a.size()) - 1;
    const int M = M2 / 2;
    std::vector<cplx> d(M2 + 1);
    std::vector<cplx> e(M2 + 1, 0.0), q(M2, 0.0);
    for (int i = 0; i < M2; ++i) q[i] = a[i + 1] / a[i];
    d[0] = a[0];
    for (int r = 1; r <= M; ++r) {
        std::vector<cplx> en(M2 + 1, 0.0);
        for (int i = 0; i <= M2 - 2 * r; ++i) en[i] = q[i + 1] - q[i] + e[i + 1];
        d[2 * r - 1] = -q[0];
        d[2 * r] = -en[0];
        if (r < M) {
            std::vector<cplx> qn(M2, 0.0);
            for (int i = 0; i <= M2 - 2 * r - 1; ++i) qn[i] = q[i + 1] * en[i + 1] / en[i];
            q.swap(qn);
        }
        e.swap(en);
    }
    cplx A2 = 0.0, A1 = d[0], B2 = 1.0, B1 = 1.0;
    for (int n = 1; n < M2; ++n) {
        const cplx An = A1 + d[n] * z * A2, Bn = B1 + d[n] * z * B2;
        A2 = A1;
        A1 = An;
        B2 = B1;
        B1 = Bn;
    }
    const cplx h = 0.5 * (1.0 + (d[M2 - 1] - d[M2]) * z);
    const cplx R = -h * (1.0 - std::sqrt(1.0 + d[M2] * z / (h * h)));
    const cplx A = A1 + R * A2, B = B1 + R * B2;
    return A / B;
}

cplx dehoog_once(const ComplexFn& F, double t, const InversionSettings& st, int M)
{
    const double T = 2.0 * t;
    const double gamma = st.contour_shift - std::log(1e-14) / (2.0 * T);
    std::vector<cplx> ap(2 * M + 1), am(2 * M + 1);
    const cplx f0 = F(cplx(gamma, 0.0));
    ap[0] = am[0] = 0.5 * f0;
    for (int k = 1; k <= 2 * M; ++k) {
        ap[k] = F(cplx(gamma, k * kPi / T));
        am[k] = F(cplx(gamma, -k * kPi / T));
    }
    const cplx z = std::exp(I * (kPi * t / T));
    const cplx total = qd_sum(ap, z) + qd_sum(am, std::conj(z));
    return std::exp(gamma * t) / (2.0 * T) * total;
}

cplx series_acceleration(const ComplexFn& F, double t, const InversionSettings& st, double floor)
{
    int M = std::max(8, st.node_count / 2);
    const int attempts = st.auto_nodes ? 4 : 1;
    for (int k = 0; k < attempts; ++k, M *= 2) {
        const cplx coarse = dehoog_once(F, t, st, M);
        const cplx fine = dehoog_once(F, t, st, 2 * M);
        if (std::abs(fine - coarse) <= st.doubling_tol * std::max(std::abs(fine), floor)) return fine;
    }
    throw Error(ErrorKind::oscillation_detected, "series acceleration did not settle under node doubling");
}

}  // namespace

void InversionSettings::validate() const
{
    if (!(contour_shift > 0.0)) throw Error(ErrorKind::domain_error, "contour shift must be positive");
    if (node_count < 16) throw Error(ErrorKind::domain_error, "node count must be at least 16");
    if (!(extent >= 0.0)) throw Error(ErrorKind::domain_error, "singular extent must be non-negative");
}

void TimeGrid::validate() const
{
    if (!(dt > 0.0)) throw Error(ErrorKind::domain_error, "time step must be positive");
    if (count < 2) throw Error(ErrorKind::domain_error, "time grid needs at least two points");
}

cplx invert_laplace_at(const ComplexFn& transform, double t, const InversionSettings& settings)
{
    settings.validate();
    if (t <= 0.0) return initial_value(transform, settings);
    if (settings.method == InversionMethod::SeriesAcceleration)
        return series_acceleration(transform, t, settings, 1e-14);
    return deformed_contour(transform, t, settings, 1e-14);
}

std::vector<cplx> invert_laplace(const ComplexFn& transform, const std::vector<double>& times,
                                 const InversionSettings& settings)
{
    settings.validate();
    std::vector<cplx> out(times.size()), coarse(times.size());
    // Disagreement is judged against the largest value so zeros and tails of f do not trip it.
    double scale = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!std::isfinite(t)) throw Error(ErrorKind::domain_error, "inversion times must be finite");
        if (t <= 0.0) {
            out[i] = coarse[i] = initial_value(transform, settings);
        } else if (settings.method == InversionMethod::SeriesAcceleration) {
            out[i] = coarse[i] = series_acceleration(transform, t, settings, 1e-12);
        } else {
            const Contour c = design_contour(settings.extent * t);
            int n = settings.node_count;
            if (settings.auto_nodes) n = std::max(n, c.required);
            contour_sums(transform, t, settings, c, n, coarse[i], out[i]);
        }
        if (t > 0.0) scale = std::max(scale, std::abs(out[i]));
    }
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] > 0.0) check_doubling(coarse[i], out[i], settings.doubling_tol, scale);
    return out;
}

std::vector<cplx> invert_laplace(const ComplexFn& transform, const TimeGrid& grid, const InversionSettings& settings)
{
    grid.validate();
    std::vector<double> times(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) times[i] = grid.t(i);
    return invert_laplace(transform, times, settings);
}

}  // namespace pqd
