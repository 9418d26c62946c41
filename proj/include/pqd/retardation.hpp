#pragma once

#include <optional>
#include <vector>

#include "pqd/noise.hpp"
#include "pqd/numerics.hpp"

namespace pqd {

// How gamma_0 is read: as the amplitude decay constant of the delay series (population decays at
// 2 gamma_0 for an isolated dot), or as the population rate, in which case the amplitude rate is gamma_0/2.
enum class RateConvention { amplitude, population };
const char* to_string(RateConvention c);
RateConvention parse_rate_convention(const std::string& s);

struct TwoDotConfig {
    double gamma_0 = 1.0;  // beta units
    double r = 1.0;        // separation
    double v = 1.0;        // plasmon group velocity; tau_d = r/v in 1/beta
    std::optional<double> theta;               // propagation phase k0 r
    std::optional<double> omega0_over_gamma0;  // theta = gamma_0 tau_d (omega0/gamma_0) when theta is absent
    RateConvention convention = RateConvention::amplitude;
    bool coupled = true;  // false removes the second dot

    void validate() const;
    double tau_d() const { return r / v; }
    double amplitude_rate() const;
    double phase() const;
    bool far_field() const { return phase() >= 3.0; }
};

struct RetardedAmplitudes {
    TimeGrid grid;
    std::vector<cplx> b1, b2;
    std::vector<double> survival;
};

// Smallest order that makes the series exact on [0, t_max].
std::size_t minimal_series_order(const TwoDotConfig& cfg, double t_max);

// Delay series: term m carries (i e^{i theta})^m [g (t - m tau)]^m e^{-g (t - m tau)}/m! for t > m tau,
// even m building b1 and odd m building b2.
RetardedAmplitudes retarded_amplitudes_series(const TwoDotConfig& cfg, const TimeGrid& grid, std::size_t m_max);

struct RetardedTransforms {
    cplx C_plus, C_minus, b1, b2;
};

// C_pm(s) = 1/(s + g -+ i g e^{i theta} e^{-s tau}); needs Re s > 0.
RetardedTransforms retarded_amplitudes_laplace(const TwoDotConfig& cfg, cplx s);

// Amplitudes from the transforms: each delay term e^{-m s tau}/(s + g)^{m+1} is inverted numerically and
// shifted by m tau, so the result is independent of the closed-form series.
RetardedAmplitudes retarded_amplitudes_inverted(const TwoDotConfig& cfg, const TimeGrid& grid,
                                                const InversionSettings& settings = {});

// |b1|^2 + |b2|^2 at one time, exact series.
double survival_at(const TwoDotConfig& cfg, double t);

struct RetardedNoiseOptions {
    double survival_floor = 1e-12;  // fine grid stops once survival falls below this
    double fail_level = 1e-8;       // transform-nonconvergence when the cap is reached above this
    double horizon_cap = 2e4;       // in units of 1/g
    double panel_width = 0.25;      // Gauss-Legendre panel width in units of 1/g (also limited by omega)
};

struct RetardedNoise {
    NoiseSpectrum spectrum;
    double gamma0_tau = 0.0;
    double theta = 0.0;
    double horizon = 0.0;  // end of the fine survival grid
};

// S/2eI with the effective kernel A_2(i omega) = 1/n~(i omega) - i omega, n~ the Laplace transform of
// the survival.
RetardedNoise retarded_noise_spectrum(const TwoDotConfig& cfg, const JunctionRates& rates,
                                      const std::vector<double>& omega, const RetardedNoiseOptions& opt = {});

}  // namespace pqd
