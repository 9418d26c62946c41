#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pqd/band_edges.hpp"
#include "pqd/media.hpp"
#include "pqd/numerics.hpp"

namespace pqd {

// Light line used for the bound flag: k_z > Re(omega)/c or k_z > sqrt(eps_O) Re(omega)/c.
enum class LightLine { vacuum, outer_medium };

// Sheet of the outer transverse wavevector.
//   bound: K_O = i sqrt(k_z^2 - eps_O omega^2), field decays away from the wire
//   leaky: K_O = sqrt(eps_O omega^2 - k_z^2), outgoing radiation
//   automatic: bound when Re(k_z^2 - eps_O omega^2) > 0
enum class OuterSheet { automatic, bound, leaky };

const char* to_string(OuterSheet sheet);

struct DispersionSetup {
    DrudeParams drude;
    OuterMedium outer;
    WireGeometry geom;
    UnitSystem units;
    LightLine light_line = LightLine::vacuum;
    void validate() const;
};

// All quantities dimensionless: omega in omega_p, k_z and K_I, K_O in omega_p/c, x = K a.
struct ResidualParts {
    cplx value;     // bracket1 * bracket2 - coupling
    cplx bracket1;  // J'/(x_I J) - H'/(x_O H)
    cplx bracket2;  // Omega^2 (eps_I J'/(x_I J) - eps_O H'/(x_O H))
    cplx coupling;  // n^2 k_z^2 (1/x_O^2 - 1/x_I^2)^2 in units with a = R
    cplx K_I, K_O;
    OuterSheet sheet;
    double scale;  // sum of the magnitudes of the pieces, for a scale-free residual
};

ResidualParts dispersion_parts(int n, double k_z, cplx omega, const DispersionSetup& setup,
                               OuterSheet sheet = OuterSheet::automatic);
cplx dispersion_residual(int n, double k_z, cplx omega, const DispersionSetup& setup,
                         OuterSheet sheet = OuterSheet::automatic);
double normalized_residual(int n, double k_z, cplx omega, const DispersionSetup& setup,
                           OuterSheet sheet = OuterSheet::automatic);

bool is_bound(double k_z, cplx omega, const DispersionSetup& setup);

struct DispersionSample {
    int n = 0;
    double k_z = 0.0;
    cplx omega;
    cplx K_I, K_O;
    bool bound = false;
    OuterSheet sheet = OuterSheet::bound;
    double residual = 0.0;  // normalized
};

struct ModeBranch {
    int n = 0;
    std::vector<DispersionSample> samples;
    // Present for traced branches; lets band-edge and emission code polish between samples.
    std::optional<DispersionSetup> setup;
    // Analytic Re omega(k_z) for model branches; takes precedence over the setup when set.
    std::function<double(double)> model;
    bool polishable() const { return setup.has_value() || static_cast<bool>(model); }
};

struct TraceOptions {
    double root_tol = 1e-12;  // normalized residual required of every root
    int max_halvings = 6;     // step refinement down to step/64
    double max_jump = 0.02;   // corrector may move at most this far from the predictor (omega_p units)
    // Argument-principle box for the leaky seed at the first k_z.
    Rect seed_box{0.05, 0.98, -0.3, 0.02};
    int scan_points = 400;  // real-axis scan for the first bound root
    // The bound segment starts once (k_z^2 - eps_O omega^2)/k_z^2 of its root reaches this value.
    double onset_gap = 1e-3;
};

class BranchLost : public Error {
public:
    BranchLost(const std::string& what, ModeBranch partial)
        : Error(ErrorKind::branch_lost, what), partial_(std::move(partial)) {}
    const ModeBranch& partial() const noexcept { return partial_; }

private:
    ModeBranch partial_;
};

// Newton polish of a root at fixed k_z on the given sheet; returns omega with normalized residual < tol.
cplx polish_root(int n, double k_z, cplx guess, OuterSheet sheet, const DispersionSetup& setup,
                 double tol = 1e-12);

DispersionSample make_sample(int n, double k_z, cplx omega, OuterSheet sheet, const DispersionSetup& setup);

// Continuation of a verified root along the output grid k_z[0..]; seed is the root at k_z[0].
ModeBranch trace_branch(int n, const std::vector<double>& k_z, cplx seed, OuterSheet sheet,
                        const DispersionSetup& setup, const TraceOptions& opt = {});

// Seeds found automatically: a leaky segment from the first grid point up to the onset of the
// bound root (if any), then the bound segment to the end of the grid.
ModeBranch trace_mode(int n, const std::vector<double>& k_z, const DispersionSetup& setup,
                      const TraceOptions& opt = {});

std::vector<ModeBranch> trace_modes(const std::vector<int>& modes, const std::vector<double>& k_z,
                                    const DispersionSetup& setup, const TraceOptions& opt = {});

std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

// Root on the branch at arbitrary k_z, seeded by interpolating the neighbouring samples of one sheet.
cplx branch_root_at(const ModeBranch& branch, double k_z);

// Band edges among bound samples of bound-sheet segments.
std::vector<BandEdgePoint> find_band_edges(const ModeBranch& branch, const EdgeFitOptions& opt = {});

}  // namespace pqd
