#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "pqd/dispersion.hpp"

namespace pqd {

// Golden-rule spectral weight w(n, k_z) in beta-rate units.
struct CouplingModel {
    enum class Mode { uniform, user_table };
    Mode mode = Mode::uniform;
    double scale = 1.0;  // uniform weight
    struct Table {
        std::vector<double> k;
        std::vector<double> weight;
    };
    std::map<int, Table> tables;  // per mode order; monotone cubic (PCHIP) interpolation, clamped at the ends
    double weight(int n, double k_z) const;
    void validate() const;
};

struct SEProfile {
    std::vector<double> omega0;
    std::vector<double> rate;
    std::vector<int> singular;            // 1 where the grid point is the one nearest a band edge
    std::vector<double> singular_points;  // band-edge frequencies seen in the sampled branches
};

struct SEOptions {
    // Finite-difference step for omega'(k), as a fraction of the sample spacing; it also shrinks
    // near a band edge so the stencil never straddles the extremum.
    double diff_fraction = 0.25;
};

// Crossing bookkeeping for one branch: bound-sheet bound runs with refined band edges spliced in.
class CrossingDensity {
public:
    explicit CrossingDensity(const ModeBranch& branch, SEOptions opt = {});
    // Sum of w(n, k*)/|omega'(k*)| over crossings Re omega(k*) = omega0; unit weight when w is null.
    double operator()(double omega0, const CouplingModel* w = nullptr) const;
    std::vector<double> crossings(double omega0) const;   // k* of every crossing
    std::vector<std::pair<double, double>> runs() const;  // k extent of each run
    double lo() const;                                    // omega span of the runs
    double hi() const;
    const std::vector<BandEdgePoint>& edges() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Sum of w/|omega_n'(k*)| over every crossing Re omega_n(k*) = omega0 on bound-sheet bound samples.
SEProfile se_rate_profile(const std::vector<ModeBranch>& branches, const CouplingModel& coupling,
                          const std::vector<double>& omega0_grid, const SEOptions& opt = {});

}  // namespace pqd
