#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "pqd/errors.hpp"

namespace pqd {

using cplx = std::complex<double>;
using ComplexFn = std::function<cplx(cplx)>;

enum class CylinderKind { BesselJ, Hankel1 };

struct CylinderValue {
    cplx value;
    cplx derivative;
};

constexpr int kMaxCylinderOrder = 16;

// J_n or H_n^(1) and first derivative, principal branch (cut on the negative real axis).
CylinderValue cylinder_bessel(CylinderKind kind, int order, cplx z);

// Fills out[k] = C_k(z) for k = 0..out.size()-1 (at most kMaxCylinderOrder + 2 entries).
void cylinder_sequence(CylinderKind kind, cplx z, std::vector<cplx>& out);

struct RootOptions {
    int max_iter = 100;
    double damping = 0.5;
};

// Damped Newton with a centred-difference derivative, Muller fallback on stagnation.
cplx find_root_complex(const ComplexFn& residual, cplx seed, double tol, const RootOptions& opt = {});

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
};

// Winding number of f around the rectangle boundary (zeros minus poles inside).
int winding_number(const ComplexFn& f, const Rect& box, int min_samples = 64);

// Isolates zeros inside the box by argument-principle bisection and polishes each with Newton.
std::vector<cplx> roots_in_rectangle(const ComplexFn& f, const Rect& box, double tol, int max_depth = 12);

struct TimeGrid {
    double dt = 0.01;
    std::size_t count = 2;

    double t(std::size_t i) const { return dt * static_cast<double>(i); }
    double t_max() const { return dt * static_cast<double>(count - 1); }
    void validate() const;
};

enum class InversionMethod { DeformedContour, SeriesAcceleration };

struct InversionSettings {
    // Singularities satisfy Re s < contour_shift.
    double contour_shift = 1e-2;
    int node_count = 64;
    InversionMethod method = InversionMethod::DeformedContour;
    // Imaginary span of the singular set: |Im s - center| <= extent.
    double center = 0.0;
    double extent = 0.0;
    // Grow node_count to the estimated requirement of each time point.
    bool auto_nodes = true;
    double doubling_tol = 1e-4;
    void validate() const;
};

cplx invert_laplace_at(const ComplexFn& transform, double t, const InversionSettings& settings);
std::vector<cplx> invert_laplace(const ComplexFn& transform, const TimeGrid& grid,
                                 const InversionSettings& settings);
// Arbitrary times; t <= 0 gives the initial value.
std::vector<cplx> invert_laplace(const ComplexFn& transform, const std::vector<double>& times,
                                 const InversionSettings& settings);

// K(tau) = smooth(tau) * tau^{-1/2} when inverse_sqrt, else smooth(tau).
struct VolterraKernel {
    std::function<cplx(double)> smooth;
    bool inverse_sqrt = false;
};

struct VolterraOptions {
    int substeps = 1;
    bool extrapolate = true;
    double richardson_tol = 1e-4;
};

// b' = -linear_rate * b - int_0^t K(t - t') b(t') dt', b(0) = 1.
std::vector<cplx> solve_volterra(cplx linear_rate, const VolterraKernel& kernel, const TimeGrid& grid,
                                 const VolterraOptions& opt = {});

// Single product-trapezoid pass with step h over n steps, no self-check.
std::vector<cplx> volterra_pass(cplx linear_rate, const VolterraKernel& kernel, double h, std::size_t n);

}  // namespace pqd
