#pragma once

#include <string>
#include <vector>

#include "pqd/band_edges.hpp"
#include "pqd/numerics.hpp"

namespace pqd {

struct ElasticSlab {
    double w = 130.0;   // width
    double c_l = 2.0;   // longitudinal velocity
    double c_t = 1.0;   // transverse velocity
    void validate() const;
    double ratio() const { return c_l / c_t; }
};

enum class PhononFamily { dilatational, flexural };
const char* to_string(PhononFamily f);
PhononFamily parse_phonon_family(const std::string& s);

// Everything below works in Q = q_par w and W = omega w / c_t; q_l w and q_t w are the complex
// principal roots of W^2/k^2 - Q^2 and W^2 - Q^2 with k = c_l/c_t.
struct PhononSample {
    double q_w = 0.0;
    double omega_w = 0.0;
    cplx ql_w, qt_w;
    double residual = 0.0;  // normalized
};

struct PhononBranch {
    PhononFamily family = PhononFamily::dilatational;
    int index = 0;
    double ratio = 2.0;
    double cutoff = 0.0;  // W at Q = 0
    std::vector<PhononSample> samples;
};

struct PhononResidual {
    cplx value;
    double scale;      // bound on the two terms built from factor magnitudes
    double magnitude;  // |term 1| + |term 2|, sets the rounding floor
    cplx ql, qt;
};

// Cross-multiplied tan-ratio equation, pole free and even in q_l and q_t:
//   dilatational  [sin(q_t/2)/q_t] cos(q_l/2)(Q^2 - q_t^2)^2 + 4 Q^2 q_l sin(q_l/2) cos(q_t/2)
//   flexural      [sin(q_l/2)/q_l] cos(q_t/2)(Q^2 - q_t^2)^2 + 4 Q^2 q_t sin(q_t/2) cos(q_l/2)
PhononResidual rayleigh_lamb_parts(PhononFamily family, double Q, double W, double ratio);

// Physical inputs: q_parallel in 1/length, omega in velocity/length.
cplx rayleigh_lamb_residual(PhononFamily family, double q_parallel, double omega, const ElasticSlab& slab);

// W at Q = 0 for the first `count` branches in ascending order; branch 0 starts at W = 0 and double
// roots are listed twice.
std::vector<double> phonon_cutoffs(PhononFamily family, double ratio, std::size_t count);

// Every root W in (0, W_hi] at fixed Q, ascending.
std::vector<double> phonon_roots(PhononFamily family, double Q, double ratio, double W_hi);

struct PhononTraceOptions {
    double scan_step = 0.02;   // real-axis scan in W
    double max_jump = 0.5;     // corrector may move at most this far from the secant predictor
    double ambiguity = 1e-9;   // two roots closer than this (relative) are flagged
};

// Branches over the dimensionless grid Q (ascending, >= 0). At each Q the full root set is located;
// the secant predictor of each branch is matched to it in ascending order.
std::vector<PhononBranch> trace_phonon_branches(const ElasticSlab& slab, PhononFamily family, std::size_t branch_count,
                                                const std::vector<double>& q_grid,
                                                const PhononTraceOptions& opt = {});

// Root of the branch at arbitrary Q, seeded from the neighbouring samples.
double phonon_root_at(const PhononBranch& branch, double Q);

std::vector<BandEdgePoint> find_phonon_band_edges(const PhononBranch& branch, const EdgeFitOptions& opt = {});

// Least-squares slope of log W against log Q for branch 0 on [q_lo, q_hi].
double onset_exponent(PhononFamily family, double ratio, double q_lo = 0.01, double q_hi = 0.1,
                      std::size_t points = 21);

}  // namespace pqd
