#include <algorithm>
#include <cmath>
#include <numbers>

#include "pqd/numerics.hpp"

namespace pqd {
namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Residual evaluation that maps solver-side failures to +inf so damping can back off.
double safe_abs(const ComplexFn& f, cplx z, cplx& value)
{
    try {
        value = f(z);
    } catch (const Error&) {
        value = cplx(std::numeric_limits<double>::infinity(), 0.0);
    }
    return finite(value) ? std::abs(value) : std::numeric_limits<double>::infinity();
}

struct Best {
    cplx z;
    double r = std::numeric_limits<double>::infinity();
    void offer(cplx zz, double rr)
    {
        if (rr < r) {
            z = zz;
            r = rr;
        }
    }
};

bool muller(const ComplexFn& f, cplx z, double scale, double tol, int iters, Best& best)
{
    cplx x0 = z - scale, x1 = z + scale, x2 = z;
    cplx f0, f1, f2;
    safe_abs(f, x0, f0);
    safe_abs(f, x1, f1);
    safe_abs(f, x2, f2);
    for (int it = 0; it < iters; ++it) {
        if (!finite(f0) || !finite(f1) || !finite(f2)) return false;
        const cplx h1 = x1 - x0, h2 = x2 - x1;
        const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
        const cplx a = (d2 - d1) / (h2 + h1);
        const cplx b = a * h2 + d2;
        const cplx disc = std::sqrt(b * b - 4.0 * f2 * a);
        cplx den = (std::abs(b + disc) > std::abs(b - disc)) ? b + disc : b - disc;
        if (den == cplx(0.0)) den = 1e-300;
        const cplx x3 = x2 - 2.0 * f2 / den;
        cplx f3;
        const double r3 = safe_abs(f, x3, f3);
        best.offer(x3, r3);
        if (r3 < tol) return true;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
        if (std::abs(x2 - x1) < 1e-16 * std::max(1.0, std::abs(x2))) break;
    }
    return best.r < tol;
}

}  // namespace

cplx find_root_complex(const ComplexFn& residual, cplx seed, double tol, const RootOptions& opt)
{
    if (!(tol >= 1e-14)) throw Error(ErrorKind::domain_error, "root tolerance below 1e-14");
    Best best;
    cplx z = seed, fz;
    double rz = safe_abs(residual, z, fz);
    best.offer(z, rz);
    if (!std::isfinite(rz)) throw NoConvergence("residual not finite at seed", seed, rz);

    int it = 0;
    bool stalled = false;
    for (; it < opt.max_iter; ++it) {
        if (rz < tol) return z;
        const double h = std::max(1e-7 * std::abs(z), 1e-9);
        cplx fp, fm;
        safe_abs(residual, z + h, fp);
        safe_abs(residual, z - h, fm);
        const cplx d = (fp - fm) / (2.0 * h);
        if (!finite(d) || d == cplx(0.0)) {
            stalled = true;
            break;
        }
        const cplx step = -fz / d;
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            const cplx zn = z + lambda * step;
            cplx fn;
            const double rn = safe_abs(residual, zn, fn);
            if (rn < rz) {
                z = zn;
                fz = fn;
                rz = rn;
                best.offer(z, rz);
                accepted = true;
                break;
            }
            lambda *= opt.damping;
        }
        if (!accepted || std::abs(step) * lambda < 1e-16 * std::max(1.0, std::abs(z))) {
            if (rz < tol) return z;
            stalled = true;
            break;
        }
    }
    if (rz < tol) return z;
    if (stalled || it >= opt.max_iter) {
        const double scale = std::max(1e-6 * std::abs(best.z), 1e-8);
        if (muller(residual, best.z, scale, tol, std::max(opt.max_iter - it, 20), best)) return best.z;
    }
    throw NoConvergence("root not found within iteration cap", best.z, best.r);
}

namespace {

double phase_increment(const ComplexFn& f, cplx za, cplx fa, cplx zb, cplx fb, int depth)
{
    const double d = std::arg(fb / fa);
    if (std::abs(d) < 0.5 || depth > 30) return d;
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = f(zm);
    return phase_increment(f, za, fa, zm, fm, depth + 1) + phase_increment(f, zm, fm, zb, fb, depth + 1);
}

}  // namespace

int winding_number(const ComplexFn& f, const Rect& box, int min_samples)
{
    const cplx corners[4] = {{box.re_lo, box.im_lo}, {box.re_hi, box.im_lo}, {box.re_hi, box.im_hi},
                             {box.re_lo, box.im_hi}};
    const int n = std::max(4, min_samples / 4);
    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
        const cplx a = corners[side], b = corners[(side + 1) % 4];
        cplx za = a, fa = f(a);
        for (int i = 1; i <= n; ++i) {
            const cplx zb = a + (b - a) * (static_cast<double>(i) / n);
            const cplx fb = f(zb);
            total += phase_increment(f, za, fa, zb, fb, 0);
            za = zb;
            fa = fb;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

std::vector<cplx> roots_in_rectangle(const ComplexFn& f, const Rect& box, double tol, int max_depth)
{
    std::vector<cplx> found;
    struct Item {
        Rect r;
        int depth;
    };
    std::vector<Item> stack{{box, 0}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        int w = 0;
        try {
            w = winding_number(f, it.r);
        } catch (const Error&) {
            w = 1;  // unreliable boundary: keep subdividing
        }
        if (w <= 0) continue;
        const double wr = it.r.re_hi - it.r.re_lo, wi = it.r.im_hi - it.r.im_lo;
        if (w == 1 || it.depth >= max_depth) {
            const cplx centre(0.5 * (it.r.re_lo + it.r.re_hi), 0.5 * (it.r.im_lo + it.r.im_hi));
            try {
                const cplx z = find_root_complex(f, centre, tol);
                const bool inside = z.real() >= it.r.re_lo && z.real() <= it.r.re_hi && z.imag() >= it.r.im_lo &&
                                    z.imag() <= it.r.im_hi;
                if (inside) {
                    bool dup = false;
                    for (const auto& r : found)
                        if (std::abs(r - z) < 1e-9 * std::max(1.0, std::abs(z))) dup = true;
                    if (!dup) found.push_back(z);
                    continue;
                }
            } catch (const Error&) {
            }
            if (it.depth >= max_depth) continue;
        }
        if (wr >= wi) {
            const double m = 0.5 * (it.r.re_lo + it.r.re_hi);
            stack.push_back({{m, it.r.re_hi, it.r.im_lo, it.r.im_hi}, it.depth + 1});
            stack.push_back({{it.r.re_lo, m, it.r.im_lo, it.r.im_hi}, it.depth + 1});
        } else {
            const double m = 0.5 * (it.r.im_lo + it.r.im_hi);
            stack.push_back({{it.r.re_lo, it.r.re_hi, m, it.r.im_hi}, it.depth + 1});
            stack.push_back({{it.r.re_lo, it.r.re_hi, it.r.im_lo, m}, it.depth + 1});
        }
    }
    std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return found;
}

}  // namespace pqd
