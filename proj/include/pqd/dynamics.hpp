#pragma once

#include <vector>

#include "pqd/band_edges.hpp"
#include "pqd/numerics.hpp"

namespace pqd {

// Band-edge reservoir in beta units: delta = omega0 - omega_c, C in beta^{3/2}.
struct ReservoirSpec {
    double delta = 0.0;
    double A = 1.0;
    double C = 1.0;
    double gamma = 0.0;
    ExtremumKind kind = ExtremumKind::minimum;
    void validate() const;
    // e^{-i pi/4} for a minimum, e^{+i pi/4} for a maximum.
    cplx phase() const;
};

// 1/(z + gamma/2 + phase C / sqrt(z - i delta)); needs Re z > 0.
cplx amplitude_transform(const ReservoirSpec& spec, cplx z);

// Time-domain memory kernel C phase e^{i delta tau}/sqrt(pi tau), with linear rate gamma/2.
VolterraKernel memory_kernel(const ReservoirSpec& spec);

// Contour settings that keep clear of the branch point at i delta and the nearby poles.
InversionSettings default_inversion(const ReservoirSpec& spec);

struct AmplitudeTrace {
    TimeGrid grid;
    std::vector<cplx> b_e;
    std::vector<double> population;
    double cross_check = 0.0;  // sup-norm distance to the Volterra solution (0 when skipped)
};

struct DecayOptions {
    bool auto_inversion = true;  // derive contour settings from the spec
    InversionSettings inversion;
    VolterraOptions volterra{2, true, 1e-4};
    bool cross_check = true;
    double cross_tol = 1e-5;
};

AmplitudeTrace decay_trace(const ReservoirSpec& spec, const TimeGrid& grid, const DecayOptions& opt = {});

}  // namespace pqd
