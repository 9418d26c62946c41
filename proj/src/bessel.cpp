#include <cmath>
#include <limits>
#include <numbers>

#include "pqd/numerics.hpp"

namespace pqd {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr double kSeriesRadius = 5.0;
constexpr double kLogSeriesRadius = 2.0;
// e^{|Im z|} must stay representable.
constexpr double kMaxImag = 690.0;
constexpr cplx I{0.0, 1.0};

void bessel_j_series(cplx z, std::vector<cplx>& out)
{
    const cplx q = -0.25 * z * z;
    const cplx half = 0.5 * z;
    cplx lead = 1.0;  // (z/2)^k / k!
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k > 0) lead *= half / static_cast<double>(k);
        cplx term = 1.0, sum = 1.0;
        for (int j = 1; j < 200; ++j) {
            term *= q / (static_cast<double>(j) * static_cast<double>(j + static_cast<int>(k)));
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        out[k] = lead * sum;
    }
}

// Miller backward recurrence normalised with e^{-iz} = J0 + 2 sum (-i)^k J_k
// (or the conjugate identity below the real axis) so no cancellation grows with |Im z|.
void bessel_j_miller(cplx z, std::vector<cplx>& out)
{
    const double az = std::abs(z);
    const int nmax = static_cast<int>(out.size()) - 1;
    int start = static_cast<int>(std::ceil(az + 12.0 * std::cbrt(az) + 30.0)) + nmax;
    const bool upper = z.imag() >= 0.0;
    const cplx unit = upper ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    std::vector<cplx> phase(4);
    phase[0] = 1.0;
    for (int p = 1; p < 4; ++p) phase[p] = phase[p - 1] * unit;

    cplx fnext = 0.0, f = 1e-30, sum = 0.0;
    for (auto& v : out) v = 0.0;
    const cplx inv = 1.0 / z;
    for (int k = start; k >= 0; --k) {
        if (k <= nmax) out[k] = f;
        sum += (k == 0 ? 1.0 : 2.0) * phase[k % 4] * f;
        const cplx fprev = 2.0 * static_cast<double>(k) * inv * f - fnext;
        fnext = f;
        f = fprev;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            fnext *= 1e-250;
            sum *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    const cplx norm = std::exp(upper ? -I * z : I * z) / sum;
    for (auto& v : out) v *= norm;
}

void bessel_j(cplx z, std::vector<cplx>& out)
{
    if (std::abs(z.imag()) > kMaxImag)
        throw Error(ErrorKind::accuracy_loss, "|Im z| beyond double range for cylinder functions");
    if (z == cplx(0.0, 0.0)) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = (k == 0) ? 1.0 : 0.0;
        return;
    }
    if (std::abs(z) < kSeriesRadius)
        bessel_j_series(z, out);
    else
        bessel_j_miller(z, out);
}

// H0'/H0 by Steed's continued fraction, first quadrant, |w| >= 2.
cplx hankel_log_derivative(cplx w)
{
    const double tiny = 1e-300;
    cplx fv = tiny, c = fv, d = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double a = (k - 0.5) * (k - 0.5);
        const cplx b = 2.0 * (w + I * static_cast<double>(k));
        d = b + a * d;
        if (d == cplx(0.0)) d = tiny;
        c = b + a / c;
        if (c == cplx(0.0)) c = tiny;
        d = 1.0 / d;
        const cplx delta = c * d;
        fv *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return -0.5 / w + I + (I / w) * fv;
    }
    throw Error(ErrorKind::accuracy_loss, "Hankel continued fraction did not converge");
}

// H_k^(1)(w) for w in the closed first quadrant.
void hankel_first_quadrant(cplx w, std::vector<cplx>& out)
{
    const std::size_t n = out.size();
    std::vector<cplx> j(std::max<std::size_t>(n, 2));
    bessel_j(w, j);
    cplx h0, h1;
    if (std::abs(w) < kLogSeriesRadius) {
        const cplx q = -0.25 * w * w;
        const cplx lg = std::log(0.5 * w);
        // psi(k+1) and psi(k+2)
        double psi1 = -kEuler, psi2 = 1.0 - kEuler;
        cplx t0 = 1.0, t1 = 1.0, s0 = 0.0, s1 = 0.0;
        for (int k = 0; k < 200; ++k) {
            if (k > 0) {
                t0 *= q / (static_cast<double>(k) * k);
                t1 *= q / (static_cast<double>(k) * (k + 1));
                psi1 += 1.0 / k;
                psi2 += 1.0 / (k + 1);
            }
            s0 += psi1 * t0;
            s1 += (psi1 + psi2) * t1;
            if (std::abs(t0) < 1e-18 && std::abs(t1) < 1e-18) break;
        }
        const cplx y0 = (2.0 / kPi) * (lg * j[0] - s0);
        const cplx y1 = -2.0 / (kPi * w) + (2.0 / kPi) * lg * j[1] - (1.0 / kPi) * (0.5 * w) * s1;
        h0 = j[0] + I * y0;
        h1 = j[1] + I * y1;
    } else {
        const cplx f = hankel_log_derivative(w);
        h0 = 2.0 * I / (kPi * w * (j[0] * f + j[1]));
        h1 = -f * h0;
    }
    out[0] = h0;
    if (n > 1) out[1] = h1;
    for (std::size_t k = 1; k + 1 < n; ++k) out[k + 1] = 2.0 * static_cast<double>(k) / w * out[k] - out[k - 1];
}

void hankel_upper(cplx z, std::vector<cplx>& out)
{
    if (z.real() >= 0.0) {
        hankel_first_quadrant(z, out);
        return;
    }
    hankel_first_quadrant(-std::conj(z), out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = ((k % 2 == 0) ? -1.0 : 1.0) * std::conj(out[k]);
}

void hankel(cplx z, std::vector<cplx>& out)
{
    if (z == cplx(0.0, 0.0)) throw Error(ErrorKind::domain_error, "Hankel function at zero argument");
    if (std::abs(z.imag()) > kMaxImag)
        throw Error(ErrorKind::accuracy_loss, "|Im z| beyond double range for cylinder functions");
    if (z.imag() >= 0.0) {
        hankel_upper(z, out);
        return;
    }
    std::vector<cplx> j(out.size());
    bessel_j(z, j);
    hankel_upper(std::conj(z), out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = 2.0 * j[k] - std::conj(out[k]);
}

}  // namespace

void cylinder_sequence(CylinderKind kind, cplx z, std::vector<cplx>& out)
{
    if (out.empty()) return;
    if (out.size() > static_cast<std::size_t>(kMaxCylinderOrder + 2))
        throw Error(ErrorKind::domain_error, "cylinder function order above 16");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorKind::domain_error, "non-finite cylinder function argument");
    if (kind == CylinderKind::BesselJ)
        bessel_j(z, out);
    else
        hankel(z, out);
    for (const auto& v : out)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::accuracy_loss, "cylinder function overflow");
}

CylinderValue cylinder_bessel(CylinderKind kind, int order, cplx z)
{
    if (order < 0 || order > kMaxCylinderOrder)
        throw Error(ErrorKind::domain_error, "cylinder function order outside 0..16");
    std::vector<cplx> seq(static_cast<std::size_t>(order) + 2);
    cylinder_sequence(kind, z, seq);
    const cplx value = seq[order];
    const cplx deriv = (order == 0) ? -seq[1] : 0.5 * (seq[order - 1] - seq[order + 1]);
    return {value, deriv};
}

}  // namespace pqd
