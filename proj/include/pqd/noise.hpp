#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pqd/dispersion.hpp"
#include "pqd/dynamics.hpp"
#include "pqd/emission.hpp"

namespace pqd {

// Reservoir self-energy c(z) of the excitonic amplitude, z the Laplace variable, rates in beta units.
class SelfEnergy {
public:
    virtual ~SelfEnergy() = default;
    // Needs Re z > 0.
    virtual cplx at(cplx z) const = 0;
    // lim Re c(i omega + eps), eps -> 0+.
    virtual double re_on_axis(double omega) const = 0;
    // Full boundary value c(i omega + 0); only backends with a closed form provide it.
    virtual cplx on_axis(double omega) const;
    virtual double detuning() const = 0;
};

// gamma/2 + phase C / sqrt(z - i delta).
class QuadraticSelfEnergy final : public SelfEnergy {
public:
    explicit QuadraticSelfEnergy(ReservoirSpec spec);
    cplx at(cplx z) const override;
    double re_on_axis(double omega) const override;
    cplx on_axis(double omega) const override;
    double detuning() const override { return spec_.delta; }
    const ReservoirSpec& spec() const { return spec_; }

private:
    ReservoirSpec spec_;
};

// gamma/2 + g^2 Int dk 1/(z + i(omega_n(k) - omega0)) over the bound runs of a traced branch.
// omega_n is rescaled to beta units by omega_p_over_beta, and g^2 = C sqrt(A_n omega_p_over_beta)/pi,
// so near the chosen edge the backend reduces to the quadratic one with the same C.
struct NumericReservoirParams {
    double delta = 0.0;  // omega0 - omega_c, beta units
    double C = 1.0;
    double gamma = 0.0;
    double omega_p_over_beta = 1e6;
    std::size_t edge_index = 0;  // which band edge of the branch sets omega_c and A_n
    void validate() const;
};

class NumericSelfEnergy final : public SelfEnergy {
public:
    NumericSelfEnergy(const ModeBranch& branch, NumericReservoirParams params);
    // Reuses the crossing bookkeeping of another instance; only the parameters change.
    NumericSelfEnergy(const NumericSelfEnergy& base, NumericReservoirParams params);
    cplx at(cplx z) const override;
    double re_on_axis(double omega) const override;
    double detuning() const override { return p_.delta; }
    const BandEdgePoint& edge() const { return edge_; }
    double coupling_sq() const;

private:
    std::shared_ptr<const CrossingDensity> dens_;
    std::shared_ptr<const ModeBranch> branch_;
    NumericReservoirParams p_;
    BandEdgePoint edge_;
};

cplx reservoir_selfenergy(const SelfEnergy& se, cplx z);

// A(i omega) entering the noise formula.
//   hermitian: Re c(i omega + 0) + Re c(-i omega + 0), real and even in omega
//   literal:   c(i omega + 0) + conj c(-i omega + 0)
enum class KernelForm { hermitian, literal };
const char* to_string(KernelForm form);
KernelForm parse_kernel_form(const std::string& s);

cplx population_kernel(const SelfEnergy& se, double omega, KernelForm form = KernelForm::hermitian);

struct JunctionRates {
    double gamma_L = 0.01;
    double gamma_R = 0.1;
    void validate() const;
};

// Fano factor S(omega) = 1 + Gamma_R [B(omega) + B(-omega)] for a kernel value A = A(i omega) with
// A(-i omega) = conj A(i omega). im_slope0 supplies lim Im A/omega at omega = 0; an infinite A gives
// the limit 1 - 2 Gamma_L Gamma_R/(Sigma^2 + omega^2).
double fano_from_kernel(const JunctionRates& rates, double omega, cplx A, double im_slope0 = 0.0);

struct NoiseOptions {
    KernelForm form = KernelForm::hermitian;
};

struct NoiseSpectrum {
    std::vector<double> omega;
    std::vector<double> fano;
};

NoiseSpectrum noise_spectrum(const JunctionRates& rates, const SelfEnergy& se, const std::vector<double>& omega,
                             const NoiseOptions& opt = {});

// Markov three-state cycle with constant kernel A = gamma.
double markov_fano(const JunctionRates& rates, double gamma, double omega);

struct JumpPoint {
    double delta;
    double omega;  // midpoint of the grid cell carrying the jump
};

struct NoiseMap {
    std::vector<double> delta;  // rows
    std::vector<double> omega;  // columns
    std::vector<double> fano;   // row-major, delta.size() x omega.size()
    std::vector<JumpPoint> jumps;
    double at(std::size_t i_delta, std::size_t j_omega) const { return fano[i_delta * omega.size() + j_omega]; }
};

struct JumpOptions {
    double min_jump = 1e-4;   // smallest |Delta S| counted as a jump
    double prominence = 4.0;  // and at least this many times |Delta S| of both neighbouring cells
};

// Cell midpoints where S(omega) along one row jumps. A square-root cusp next to a node changes
// |Delta S| between neighbouring cells by well under the prominence factor; a discontinuity does not.
std::vector<double> detect_jumps(const std::vector<double>& omega, const std::vector<double>& fano,
                                 const JumpOptions& opt = {});

using SelfEnergyFactory = std::function<std::unique_ptr<SelfEnergy>(double delta)>;

NoiseMap noise_map(const JunctionRates& rates, const SelfEnergyFactory& factory, const std::vector<double>& delta,
                   const std::vector<double>& omega, const NoiseOptions& opt = {}, const JumpOptions& jopt = {});

// Symmetric omega grid through 0, and a delta grid shifted by half a cell so delta = +-omega never
// falls on a node.
std::vector<double> symmetric_grid(double half_width, std::size_t count);
std::vector<double> offset_grid(double half_width, std::size_t count);

}  // namespace pqd
