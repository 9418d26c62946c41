#pragma once

#include <limits>
#include <string>

#include "pqd/numerics.hpp"

namespace pqd {

struct UnitSystem {
    double hbar_omega_p_ev = 3.76;
    // Length unit c/omega_p; fixed at 53.8 nm rather than derived from hbar c / 3.76 eV.
    double unit_length_nm = 53.8;
    // Free-space exciton decay rate in eV; zero means unset (beta conversions then fail).
    double beta_ev = 0.0;
    void validate() const;
};

struct DrudeParams {
    double eps_inf = 9.6;
    double omega_p_ev = 3.76;
    // Relaxation time in 1/omega_p; infinity is the lossless metal.
    double tau = std::numeric_limits<double>::infinity();
    void validate() const;
};

struct OuterMedium {
    double eps_O = 5.3;
    void validate() const;
};

struct WireGeometry {
    double R = 0.1;  // omega_p a / c
    double a_nm(const UnitSystem& units) const { return R * units.unit_length_nm; }
    void validate() const;
};

// omega in units of the UnitSystem plasma frequency.
cplx drude_epsilon(const DrudeParams& params, cplx omega, const UnitSystem& units = {});

enum class UnitTag { eV, omega_p, nm, c_over_omega_p, beta };

UnitTag parse_unit_tag(const std::string& tag);
const char* to_string(UnitTag tag);

double convert_units(double value, UnitTag from, UnitTag to, const UnitSystem& units = {});
double convert_units(double value, const std::string& from, const std::string& to, const UnitSystem& units = {});

}  // namespace pqd
