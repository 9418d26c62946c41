#pragma once

#include <functional>
#include <vector>

namespace pqd {

enum class ExtremumKind { minimum, maximum };

const char* to_string(ExtremumKind kind);

// omega(k) ~ omega_c + A (k - k_c)^2 (minimum) or omega_c - A (k - k_c)^2 (maximum), A > 0.
struct BandEdgePoint {
    int n = 0;
    double k_c = 0.0;
    double omega_c = 0.0;
    double A = 0.0;
    ExtremumKind kind = ExtremumKind::minimum;
    double fit_window = 0.0;  // half-width in k
};

struct EdgeFitOptions {
    double fit_tol = 1e-4;    // max deviation from the quadratic, relative to omega_c
    double stability = 0.01;  // relative change of A allowed when the window is halved
    int fit_points = 41;      // samples of the polished curve per fit
};

using RealCurve = std::function<double(double)>;

// Interior extrema of w(k). Samples with run[i] < 0 are ineligible; extrema must sit strictly inside
// a run of equal run ids. When `polished` is set it evaluates the curve between samples and is used
// for golden-section refinement and the quadratic fit; otherwise the samples alone are used.
std::vector<BandEdgePoint> locate_band_edges(int n, const std::vector<double>& k, const std::vector<double>& w,
                                             const std::vector<int>& run, const RealCurve& polished,
                                             const EdgeFitOptions& opt = {});

// One-parameter least-squares curvature of w - w_c = sign * A (k - k_c)^2.
double fit_curvature(const std::vector<double>& k, const std::vector<double>& w, double k_c, double w_c,
                     ExtremumKind kind);

}  // namespace pqd
