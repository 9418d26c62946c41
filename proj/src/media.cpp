#include "pqd/media.hpp"

#include <cmath>

namespace pqd {

void UnitSystem::validate() const
{
    if (!(hbar_omega_p_ev > 0.0)) throw Error(ErrorKind::domain_error, "hbar omega_p must be positive");
    if (!(unit_length_nm > 0.0)) throw Error(ErrorKind::domain_error, "unit length must be positive");
    if (!(beta_ev >= 0.0)) throw Error(ErrorKind::domain_error, "beta must be non-negative");
}

void DrudeParams::validate() const
{
    if (!(eps_inf > 0.0)) throw Error(ErrorKind::domain_error, "eps_inf must be positive");
    if (!(omega_p_ev > 0.0)) throw Error(ErrorKind::domain_error, "omega_p must be positive");
    if (!(tau > 0.0)) throw Error(ErrorKind::domain_error, "tau must be positive or infinite");
}

void OuterMedium::validate() const
{
    if (!(eps_O > 0.0)) throw Error(ErrorKind::domain_error, "eps_O must be positive");
}

void WireGeometry::validate() const
{
    if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorKind::domain_error, "R must be positive");
}

cplx drude_epsilon(const DrudeParams& params, cplx omega, const UnitSystem& units)
{
    if (omega == cplx(0.0)) throw Error(ErrorKind::domain_error, "Drude permittivity is singular at omega = 0");
    const double wp = params.omega_p_ev / units.hbar_omega_p_ev;
    const cplx damp = std::isinf(params.tau) ? cplx(0.0) : cplx(0.0, 1.0 / params.tau);
    return params.eps_inf * (1.0 - wp * wp / (omega * (omega + damp)));
}

UnitTag parse_unit_tag(const std::string& tag)
{
    if (tag == "eV") return UnitTag::eV;
    if (tag == "omega_p" || tag == "ω_p" || tag == "wp") return UnitTag::omega_p;
    if (tag == "nm") return UnitTag::nm;
    if (tag == "c/omega_p" || tag == "c/ω_p" || tag == "c/wp") return UnitTag::c_over_omega_p;
    if (tag == "beta" || tag == "β") return UnitTag::beta;
    throw Error(ErrorKind::unknown_tag, "unit tag '" + tag + "'");
}

const char* to_string(UnitTag tag)
{
    switch (tag) {
    case UnitTag::eV: return "eV";
    case UnitTag::omega_p: return "omega_p";
    case UnitTag::nm: return "nm";
    case UnitTag::c_over_omega_p: return "c/omega_p";
    case UnitTag::beta: return "beta";
    }
    return "?";
}

namespace {

bool is_energy(UnitTag t) { return t == UnitTag::eV || t == UnitTag::omega_p || t == UnitTag::beta; }

// Size of one unit of `t` in the base unit of its dimension (eV or nm).
double base_size(UnitTag t, const UnitSystem& u)
{
    switch (t) {
    case UnitTag::eV: return 1.0;
    case UnitTag::omega_p: return u.hbar_omega_p_ev;
    case UnitTag::beta:
        if (!(u.beta_ev > 0.0)) throw Error(ErrorKind::domain_error, "beta conversion needs beta_ev in the unit system");
        return u.beta_ev;
    case UnitTag::nm: return 1.0;
    case UnitTag::c_over_omega_p: return u.unit_length_nm;
    }
    return 1.0;
}

}  // namespace

double convert_units(double value, UnitTag from, UnitTag to, const UnitSystem& units)
{
    units.validate();
    if (is_energy(from) != is_energy(to))
        throw Error(ErrorKind::domain_error,
                    std::string("cannot convert ") + to_string(from) + " to " + to_string(to));
    if (from == to) return value;
    return value * base_size(from, units) / base_size(to, units);
}

double convert_units(double value, const std::string& from, const std::string& to, const UnitSystem& units)
{
    return convert_units(value, parse_unit_tag(from), parse_unit_tag(to), units);
}

}  // namespace pqd
