#include <algorithm>
#include <cmath>

#include "pqd/numerics.hpp"

namespace pqd {

std::vector<cplx> volterra_pass(cplx linear_rate, const VolterraKernel& kernel, double h, std::size_t n)
{
    // Lag-interval weights: the smooth factor is linear on [a, b], the tau^{-1/2} factor integrated exactly.
    std::vector<double> wl(n + 1), wr(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        if (kernel.inverse_sqrt) {
            const double a = h * static_cast<double>(j), b = a + h;
            const double sa = std::sqrt(a), sb = std::sqrt(b);
            const double m0 = 2.0 * h / (sa + sb);
            const double m1 = (2.0 / 3.0) * h * (b + sa * sb + a) / (sa + sb);
            wl[j] = (b * m0 - m1) / h;
            wr[j] = (m1 - a * m0) / h;
        } else {
            wl[j] = wr[j] = 0.5 * h;
        }
    }
    std::vector<cplx> g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) g[j] = kernel.smooth(h * static_cast<double>(j));

    std::vector<cplx> b(n + 1);
    b[0] = 1.0;
    cplx f_prev = -linear_rate * b[0];
    const cplx diag = 1.0 + 0.5 * h * (linear_rate + wl[0] * g[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        // memory integral at t_k without the b_k contribution
        cplx rest = 0.0;
        for (std::size_t j = 1; j < k; ++j) rest += (wl[j] + wr[j - 1]) * g[j] * b[k - j];
        rest += wr[k - 1] * g[k] * b[0];
        b[k] = (b[k - 1] + 0.5 * h * (f_prev - rest)) / diag;
        f_prev = -linear_rate * b[k] - (wl[0] * g[0] * b[k] + rest);
    }
    return b;
}

std::vector<cplx> solve_volterra(cplx linear_rate, const VolterraKernel& kernel, const TimeGrid& grid,
                                 const VolterraOptions& opt)
{
    grid.validate();
    if (!kernel.smooth) throw Error(ErrorKind::domain_error, "kernel evaluator missing");
    const int sub = std::max(1, opt.substeps);
    const std::size_t n = (grid.count - 1) * static_cast<std::size_t>(sub);
    const double h = grid.dt / sub;
    const auto coarse = volterra_pass(linear_rate, kernel, h, n);
    const auto fine = volterra_pass(linear_rate, kernel, 0.5 * h, 2 * n);
    // b ~ 1 - c t^{3/2} near the origin for the singular kernel, which adds an h^{3/2} error term
    std::vector<cplx> finest;
    if (kernel.inverse_sqrt && opt.extrapolate) finest = volterra_pass(linear_rate, kernel, 0.25 * h, 4 * n);

    std::vector<cplx> out(grid.count);
    double diff = 0.0;
    const double r15 = std::pow(2.0, 1.5);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const cplx bc = coarse[i * sub], bf = fine[2 * i * sub];
        diff = std::max(diff, std::abs(bf - bc));
        if (!opt.extrapolate) {
            out[i] = bf;
        } else if (finest.empty()) {
            out[i] = (4.0 * bf - bc) / 3.0;
        } else {
            const cplx bff = finest[4 * i * sub];
            const cplx e1 = (r15 * bf - bc) / (r15 - 1.0), e2 = (r15 * bff - bf) / (r15 - 1.0);
            out[i] = (4.0 * e2 - e1) / 3.0;
        }
    }
    if (diff > opt.richardson_tol)
        throw Error(ErrorKind::step_too_coarse, "Richardson comparison at dt and dt/2 exceeds tolerance");
    return out;
}

}  // namespace pqd
