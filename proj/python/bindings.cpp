#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pqd/dispersion.hpp"
#include "pqd/dynamics.hpp"
#include "pqd/emission.hpp"
#include "pqd/media.hpp"
#include "pqd/noise.hpp"
#include "pqd/phonon.hpp"
#include "pqd/retardation.hpp"

namespace py = pybind11;
using namespace pqd;

namespace {

DispersionSetup make_setup(double eps_inf, double omega_p_ev, std::optional<double> tau, double eps_O, double R,
                           const std::string& light_line)
{
    DispersionSetup s;
    s.drude.eps_inf = eps_inf;
    s.drude.omega_p_ev = omega_p_ev;
    s.drude.tau = tau.value_or(std::numeric_limits<double>::infinity());
    s.outer.eps_O = eps_O;
    s.geom.R = R;
    if (light_line == "outer_medium")
        s.light_line = LightLine::outer_medium;
    else if (light_line != "vacuum")
        throw Error(ErrorKind::unknown_tag, "light_line must be vacuum or outer_medium");
    s.validate();
    return s;
}

ExtremumKind parse_kind(const std::string& k)
{
    if (k == "minimum") return ExtremumKind::minimum;
    if (k == "maximum") return ExtremumKind::maximum;
    throw Error(ErrorKind::unknown_tag, "kind must be minimum or maximum");
}

ReservoirSpec make_spec(double delta, double A, double C, double gamma, const std::string& kind)
{
    ReservoirSpec s;
    s.delta = delta;
    s.A = A;
    s.C = C;
    s.gamma = gamma;
    s.kind = parse_kind(kind);
    s.validate();
    return s;
}

py::dict edge_dict(const BandEdgePoint& e)
{
    py::dict d;
    d["n"] = e.n;
    d["kind"] = to_string(e.kind);
    d["k_c"] = e.k_c;
    d["omega_c"] = e.omega_c;
    d["A"] = e.A;
    d["fit_window"] = e.fit_window;
    return d;
}

py::dict branch_dict(const ModeBranch& b)
{
    std::vector<double> k;
    std::vector<cplx> w;
    std::vector<bool> bound;
    for (const auto& s : b.samples) {
        k.push_back(s.k_z);
        w.push_back(s.omega);
        bound.push_back(s.bound);
    }
    py::list edges;
    for (const auto& e : find_band_edges(b)) edges.append(edge_dict(e));
    py::dict d;
    d["n"] = b.n;
    d["k_z"] = k;
    d["omega"] = w;
    d["bound"] = bound;
    d["band_edges"] = edges;
    return d;
}

}  // namespace

PYBIND11_MODULE(_pqd, m)
{
    m.doc() = "Plasmon-coupled quantum-dot toolkit";
    m.attr("__version__") = PQD_VERSION;

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def(
        "drude_epsilon",
        [](cplx omega, double eps_inf, std::optional<double> tau) {
            DrudeParams d;
            d.eps_inf = eps_inf;
            d.tau = tau.value_or(std::numeric_limits<double>::infinity());
            d.validate();
            return drude_epsilon(d, omega);
        },
        py::arg("omega"), py::arg("eps_inf") = 9.6, py::arg("tau") = py::none(),
        "Drude permittivity at omega in units of omega_p.");

    m.def(
        "convert_units", [](double v, const std::string& from, const std::string& to) { return convert_units(v, from, to); },
        py::arg("value"), py::arg("from_unit"), py::arg("to_unit"));

    m.def(
        "trace_modes",
        [](const std::vector<int>& modes, double k_min, double k_max, std::size_t k_points, double eps_inf,
           double omega_p_ev, std::optional<double> tau, double eps_O, double R, const std::string& light_line) {
            const auto setup = make_setup(eps_inf, omega_p_ev, tau, eps_O, R, light_line);
            py::list out;
            for (const auto& b : trace_modes(modes, uniform_grid(k_min, k_max, k_points), setup)) out.append(branch_dict(b));
            return out;
        },
        py::arg("modes") = std::vector<int>{0, 1, 2, 3}, py::arg("k_min") = 0.05, py::arg("k_max") = 30.0,
        py::arg("k_points") = 400, py::arg("eps_inf") = 9.6, py::arg("omega_p_ev") = 3.76, py::arg("tau") = py::none(),
        py::arg("eps_O") = 5.3, py::arg("R") = 0.1, py::arg("light_line") = "vacuum",
        "Plasmon branches as dicts with k_z, complex omega, bound flags and band edges.");

    m.def(
        "se_rate_profile",
        [](const std::vector<int>& modes, const std::vector<double>& omega0, double k_max, std::size_t k_points,
           double R, double coupling_scale) {
            const auto setup = make_setup(9.6, 3.76, std::nullopt, 5.3, R, "vacuum");
            const auto br = trace_modes(modes, uniform_grid(0.05, k_max, k_points), setup);
            CouplingModel cm;
            cm.scale = coupling_scale;
            const auto p = se_rate_profile(br, cm, omega0);
            py::dict d;
            d["omega0"] = p.omega0;
            d["rate"] = p.rate;
            d["is_singular"] = p.singular;
            return d;
        },
        py::arg("modes"), py::arg("omega0"), py::arg("k_max") = 30.0, py::arg("k_points") = 400, py::arg("R") = 0.1,
        py::arg("coupling_scale") = 1.0);

    m.def(
        "decay_trace",
        [](double delta, double A, double C, double gamma, const std::string& kind, double dt, double t_max) {
            const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
            const auto tr = decay_trace(make_spec(delta, A, C, gamma, kind), TimeGrid{dt, steps + 1});
            std::vector<double> t(tr.grid.count);
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = tr.grid.t(i);
            py::dict d;
            d["t"] = t;
            d["b_e"] = tr.b_e;
            d["population"] = tr.population;
            d["cross_check"] = tr.cross_check;
            return d;
        },
        py::arg("delta") = 0.2, py::arg("A") = 1.0, py::arg("C") = 1.0, py::arg("gamma") = 0.1,
        py::arg("kind") = "minimum", py::arg("dt") = 0.01, py::arg("t_max") = 10.0);

    m.def(
        "noise_spectrum",
        [](const std::vector<double>& omega, double delta, double gammaL, double gammaR, double A, double C,
           double gamma, const std::string& kind, const std::string& kernel_form) {
            JunctionRates jr{gammaL, gammaR};
            jr.validate();
            QuadraticSelfEnergy se(make_spec(delta, A, C, gamma, kind));
            return noise_spectrum(jr, se, omega, {parse_kernel_form(kernel_form)}).fano;
        },
        py::arg("omega"), py::arg("delta") = -0.01, py::arg("gammaL") = 0.01, py::arg("gammaR") = 0.1,
        py::arg("A") = 1.0, py::arg("C") = 1.0, py::arg("gamma") = 0.0, py::arg("kind") = "minimum",
        py::arg("kernel_form") = "hermitian", "Fano factor S/2eI with the quadratic band-edge reservoir.");

    m.def(
        "markov_fano",
        [](double gammaL, double gammaR, double gamma, double omega) {
            return markov_fano(JunctionRates{gammaL, gammaR}, gamma, omega);
        },
        py::arg("gammaL"), py::arg("gammaR"), py::arg("gamma"), py::arg("omega"));

    m.def("detect_jumps", [](const std::vector<double>& omega, const std::vector<double>& fano) {
        return detect_jumps(omega, fano);
    });
    m.def("symmetric_grid", &symmetric_grid, py::arg("half_width"), py::arg("count"));
    m.def("offset_grid", &offset_grid, py::arg("half_width"), py::arg("count"));

    m.def(
        "retarded_noise",
        [](const std::vector<double>& omega, double gamma_0, double r, double v, std::optional<double> theta,
           std::optional<double> omega0_over_gamma0, double gammaL, double gammaR, bool coupled) {
            TwoDotConfig c;
            c.gamma_0 = gamma_0;
            c.r = r;
            c.v = v;
            c.theta = theta;
            c.omega0_over_gamma0 = omega0_over_gamma0;
            c.coupled = coupled;
            c.validate();
            JunctionRates jr{gammaL, gammaR};
            jr.validate();
            const auto n = retarded_noise_spectrum(c, jr, omega);
            py::dict d;
            d["fano"] = n.spectrum.fano;
            d["gamma0_tau_d"] = n.gamma0_tau;
            d["theta"] = n.theta;
            d["far_field"] = c.far_field();
            return d;
        },
        py::arg("omega"), py::arg("gamma_0") = 1.0, py::arg("r") = 1.0, py::arg("v") = 1.0, py::arg("theta") = py::none(),
        py::arg("omega0_over_gamma0") = py::none(), py::arg("gammaL") = 1.0, py::arg("gammaR") = 1.0,
        py::arg("coupled") = true);

    m.def(
        "phonon_cutoffs",
        [](const std::string& family, double ratio, std::size_t count) {
            return phonon_cutoffs(parse_phonon_family(family), ratio, count);
        },
        py::arg("family"), py::arg("ratio") = 2.0, py::arg("count") = 6);

    m.def(
        "phonon_branches",
        [](const std::string& family, double c_l, double c_t, std::size_t branches, const std::vector<double>& q_w) {
            ElasticSlab slab;
            slab.c_l = c_l;
            slab.c_t = c_t;
            slab.validate();
            py::list out;
            for (const auto& b : trace_phonon_branches(slab, parse_phonon_family(family), branches, q_w)) {
                std::vector<double> w;
                for (const auto& s : b.samples) w.push_back(s.omega_w);
                py::list edges;
                for (const auto& e : find_phonon_band_edges(b)) edges.append(edge_dict(e));
                py::dict d;
                d["index"] = b.index;
                d["cutoff"] = b.cutoff;
                d["omega_w"] = w;
                d["band_edges"] = edges;
                out.append(d);
            }
            return out;
        },
        py::arg("family"), py::arg("c_l"), py::arg("c_t"), py::arg("branches"), py::arg("q_w"));

    m.def(
        "onset_exponent",
        [](const std::string& family, double ratio) { return onset_exponent(parse_phonon_family(family), ratio); },
        py::arg("family"), py::arg("ratio") = 2.0);
}
