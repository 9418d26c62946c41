#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include "output.hpp"
#include "pqd/dispersion.hpp"
#include "pqd/dynamics.hpp"
#include "pqd/emission.hpp"
#include "pqd/noise.hpp"
#include "pqd/phonon.hpp"
#include "pqd/retardation.hpp"

namespace pqd::cli {

namespace {

double num(const Json& c, const char* k) { return c.at(k).get<double>(); }
long long integer(const Json& c, const char* k) { return c.at(k).get<long long>(); }
std::string str(const Json& c, const char* k) { return c.at(k).get<std::string>(); }
bool flag(const Json& c, const char* k) { return c.at(k).get<bool>(); }

std::optional<double> opt_num(const Json& c, const char* k)
{
    if (c.at(k).is_null()) return std::nullopt;
    return c.at(k).get<double>();
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw ConfigError(what);
}

// Library validation failures are configuration errors.
template <typename Fn>
void validated(Fn&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

std::size_t count(const Json& c, const char* k, long long min)
{
    const long long v = integer(c, k);
    require(v >= min && v <= 10'000'000, std::string(k) + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

double positive(const Json& c, const char* k)
{
    const double v = num(c, k);
    require(v > 0.0 && std::isfinite(v), std::string(k) + " must be positive");
    return v;
}

ExtremumKind kind_of(const Json& c)
{
    const auto k = str(c, "kind");
    if (k == "minimum") return ExtremumKind::minimum;
    if (k == "maximum") return ExtremumKind::maximum;
    throw ConfigError("kind must be minimum or maximum");
}

KernelForm form_of(const Json& c)
{
    KernelForm f{};
    validated([&] { f = parse_kernel_form(str(c, "kernel_form")); });
    return f;
}

DispersionSetup setup_of(const Json& c)
{
    DispersionSetup s;
    s.drude.eps_inf = num(c, "eps_inf");
    s.drude.omega_p_ev = num(c, "omega_p_ev");
    s.drude.tau = opt_num(c, "tau").value_or(std::numeric_limits<double>::infinity());
    s.outer.eps_O = num(c, "eps_O");
    s.geom.R = num(c, "R");
    s.units.hbar_omega_p_ev = num(c, "hbar_omega_p_ev");
    s.units.unit_length_nm = num(c, "unit_length_nm");
    const auto ll = str(c, "light_line");
    if (ll == "vacuum")
        s.light_line = LightLine::vacuum;
    else if (ll == "outer_medium")
        s.light_line = LightLine::outer_medium;
    else
        throw ConfigError("light_line must be vacuum or outer_medium");
    validated([&] { s.validate(); });
    return s;
}

std::vector<double> k_grid(const Json& c)
{
    const double lo = num(c, "k_min"), hi = num(c, "k_max");
    require(lo >= 0.0 && hi > lo && std::isfinite(hi), "need 0 <= k_min < k_max");
    return uniform_grid(lo, hi, count(c, "k_points", 9));
}

std::vector<int> modes_of(const Json& c)
{
    std::vector<int> m;
    for (const auto& v : c.at("modes")) {
        const long long n = v.get<long long>();
        require(n >= 0 && n <= kMaxCylinderOrder, "mode orders must lie in 0..16");
        m.push_back(static_cast<int>(n));
    }
    require(!m.empty(), "modes must not be empty");
    return m;
}

ReservoirSpec spec_of(const Json& c, double delta)
{
    ReservoirSpec s;
    s.delta = delta;
    s.A = num(c, "A");
    s.C = num(c, "C");
    s.gamma = num(c, "gamma");
    s.kind = kind_of(c);
    validated([&] { s.validate(); });
    return s;
}

JunctionRates rates_of(const Json& c)
{
    JunctionRates r{num(c, "gammaL"), num(c, "gammaR")};
    validated([&] { r.validate(); });
    return r;
}

std::vector<double> omega_grid(const Json& c)
{
    return symmetric_grid(positive(c, "omega_max"), count(c, "omega_points", 2));
}

bool svg(const Json& c) { return flag(c, "svg"); }

std::vector<std::string> dispersion(const Json& c)
{
    const auto setup = setup_of(c);
    const auto grid = k_grid(c);
    const auto modes = modes_of(c);
    const auto branches = trace_modes(modes, grid, setup);

    Table t;
    t.header = {"n", "k_z", "re_omega", "im_omega", "bound"};
    Table e;
    e.header = {"n", "kind", "k_c", "omega_c", "A", "fit_window"};
    std::vector<Series> series;
    for (const auto& b : branches) {
        Series s{"n = " + std::to_string(b.n), {}, {}};
        for (const auto& x : b.samples) {
            t.rows.push_back({fmt(static_cast<long long>(b.n)), fmt(x.k_z), fmt(x.omega.real()), fmt(x.omega.imag()),
                              x.bound ? "1" : "0"});
            s.x.push_back(x.k_z);
            s.y.push_back(x.omega.real());
        }
        series.push_back(std::move(s));
        for (const auto& p : find_band_edges(b))
            e.rows.push_back({fmt(static_cast<long long>(p.n)), to_string(p.kind), fmt(p.k_c), fmt(p.omega_c), fmt(p.A),
                              fmt(p.fit_window)});
    }
    std::vector<std::string> out{output_path(c, "dispersion", "csv"), output_path(c, "dispersion_edges", "csv")};
    write_csv(out[0], t);
    write_csv(out[1], e);
    if (svg(c)) {
        out.push_back(output_path(c, "dispersion", "svg"));
        write_line_svg(out.back(), "K = k_z c/omega_p", "Re Omega", series);
    }
    return out;
}

CouplingModel coupling_of(const Json& c)
{
    CouplingModel m;
    m.scale = num(c, "coupling_scale");
    const auto& tab = c.at("coupling_table");
    if (!tab.is_null()) {
        m.mode = CouplingModel::Mode::user_table;
        for (const auto& [key, val] : tab.items()) {
            int n = 0;
            try {
                n = std::stoi(key);
            } catch (const std::exception&) {
                throw ConfigError("coupling_table keys must be mode orders");
            }
            require(val.is_object() && val.contains("k") && val.contains("weight"),
                    "coupling_table entries need k and weight arrays");
            CouplingModel::Table t;
            try {
                t.k = val["k"].get<std::vector<double>>();
                t.weight = val["weight"].get<std::vector<double>>();
            } catch (const Json::exception&) {
                throw ConfigError("coupling_table k and weight must be numeric arrays");
            }
            for (const auto& k : val.items())
                require(k.key() == "k" || k.key() == "weight", "unknown key '" + k.key() + "' in coupling_table");
            m.tables[n] = std::move(t);
        }
    }
    validated([&] { m.validate(); });
    return m;
}

std::vector<std::string> se_rate(const Json& c)
{
    const auto setup = setup_of(c);
    const auto grid = k_grid(c);
    const auto modes = modes_of(c);
    const auto coupling = coupling_of(c);
    const std::size_t points = count(c, "omega0_points", 2);
    const auto branches = trace_modes(modes, grid, setup);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& b : branches) {
        CrossingDensity d(b);
        lo = std::min(lo, d.lo());
        hi = std::max(hi, d.hi());
    }
    require(std::isfinite(lo) && hi > lo, "traced branches have no bound segment");
    const double w_lo = opt_num(c, "omega0_min").value_or(lo);
    const double w_hi = opt_num(c, "omega0_max").value_or(hi);
    require(w_hi > w_lo, "need omega0_min < omega0_max");
    require(w_lo >= lo && w_hi <= hi, "omega0 range [" + fmt(w_lo) + ", " + fmt(w_hi) + "] leaves the bound span [" +
                                          fmt(lo) + ", " + fmt(hi) + "]");
    const auto p = se_rate_profile(branches, coupling, uniform_grid(w_lo, w_hi, points));

    Table t;
    t.header = {"omega0", "rate", "is_singular"};
    for (std::size_t i = 0; i < p.omega0.size(); ++i)
        t.rows.push_back({fmt(p.omega0[i]), fmt(p.rate[i]), p.singular[i] ? "1" : "0"});
    std::vector<std::string> out{output_path(c, "se-rate", "csv")};
    write_csv(out[0], t);
    if (svg(c)) {
        Series s{"log10 rate", p.omega0, {}};
        for (double r : p.rate) s.y.push_back(r > 0.0 ? std::log10(r) : std::numeric_limits<double>::quiet_NaN());
        out.push_back(output_path(c, "se-rate", "svg"));
        write_line_svg(out.back(), "omega0 / omega_p", "log10 rate (beta)", {s});
    }
    return out;
}

std::vector<std::string> decay(const Json& c)
{
    const auto spec = spec_of(c, num(c, "delta"));
    const double dt = positive(c, "dt"), t_max = positive(c, "t_max");
    require(t_max >= 5.0, "t_max must span at least 5/beta");
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    require(steps >= 1 && steps <= 10'000'000, "t_max/dt out of range");
    const TimeGrid grid{dt, steps + 1};
    DecayOptions opt;
    opt.cross_check = flag(c, "cross_check");
    opt.cross_tol = positive(c, "cross_tol");
    const auto tr = decay_trace(spec, grid, opt);

    Table t;
    t.header = {"t", "re_b", "im_b", "population"};
    Series s{"|b_e|^2", {}, {}};
    for (std::size_t i = 0; i < grid.count; ++i) {
        t.rows.push_back({fmt(grid.t(i)), fmt(tr.b_e[i].real()), fmt(tr.b_e[i].imag()), fmt(tr.population[i])});
        s.x.push_back(grid.t(i));
        s.y.push_back(tr.population[i]);
    }
    std::vector<std::string> out{output_path(c, "decay", "csv")};
    write_csv(out[0], t);
    if (svg(c)) {
        out.push_back(output_path(c, "decay", "svg"));
        write_line_svg(out.back(), "t (1/beta)", "population", {s});
    }
    return out;
}

std::vector<std::string> noise(const Json& c)
{
    const double delta = num(c, "delta");
    const auto spec = spec_of(c, delta);
    const auto rates = rates_of(c);
    const auto om = omega_grid(c);
    if (delta == 0.0)
        for (double w : om) require(w != 0.0, "delta = 0 needs an omega grid without omega = 0 (use an even omega_points)");
    QuadraticSelfEnergy se(spec);
    const auto sp = noise_spectrum(rates, se, om, {form_of(c)});

    Table t;
    t.header = {"omega", "fano"};
    for (std::size_t i = 0; i < om.size(); ++i) t.rows.push_back({fmt(om[i]), fmt(sp.fano[i])});
    Table j;
    j.header = {"omega"};
    for (double w : detect_jumps(om, sp.fano)) j.rows.push_back({fmt(w)});
    std::vector<std::string> out{output_path(c, "noise", "csv"), output_path(c, "noise_jumps", "csv")};
    write_csv(out[0], t);
    write_csv(out[1], j);
    if (svg(c)) {
        out.push_back(output_path(c, "noise", "svg"));
        write_line_svg(out.back(), "omega (beta)", "S / 2eI", {{"delta = " + fmt(delta), om, sp.fano}});
    }
    return out;
}

std::vector<std::string> noise_map_cmd(const Json& c)
{
    const auto rates = rates_of(c);
    const auto om = omega_grid(c);
    const auto de = offset_grid(positive(c, "delta_max"), count(c, "delta_points", 2));
    const auto form = form_of(c);
    const auto base_spec = spec_of(c, 0.0);
    const auto backend = str(c, "backend");

    SelfEnergyFactory factory;
    std::shared_ptr<NumericSelfEnergy> base;
    if (backend == "quadratic") {
        factory = [base_spec](double d) {
            auto s = base_spec;
            s.delta = d;
            return std::make_unique<QuadraticSelfEnergy>(s);
        };
    } else if (backend == "numeric") {
        const auto setup = setup_of(c);
        const auto grid = k_grid(c);
        const long long mode = integer(c, "mode");
        require(mode >= 0 && mode <= kMaxCylinderOrder, "mode must lie in 0..16");
        const auto branch = trace_mode(static_cast<int>(mode), grid, setup);
        const auto edges = CrossingDensity(branch).edges();
        const long long want = integer(c, "edge_index");
        long long seen = -1;
        std::size_t pick = edges.size();
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (edges[i].kind == base_spec.kind && ++seen == want) pick = i;
        require(pick < edges.size(), "mode " + std::to_string(mode) + " has no band edge of kind " +
                                         str(c, "kind") + " with index " + std::to_string(want));
        NumericReservoirParams np;
        np.C = base_spec.C;
        np.gamma = base_spec.gamma;
        np.omega_p_over_beta = positive(c, "omega_p_over_beta");
        np.edge_index = pick;
        validated([&] { np.validate(); });
        base = std::make_shared<NumericSelfEnergy>(branch, np);
        factory = [base, np](double d) {
            auto p = np;
            p.delta = d;
            return std::make_unique<NumericSelfEnergy>(*base, p);
        };
    } else {
        throw ConfigError("backend must be quadratic or numeric");
    }
    const auto m = noise_map(rates, factory, de, om, {form});

    Table t;
    t.header = {"omega", "delta", "fano"};
    for (std::size_t i = 0; i < de.size(); ++i)
        for (std::size_t j = 0; j < om.size(); ++j) t.rows.push_back({fmt(om[j]), fmt(de[i]), fmt(m.at(i, j))});
    Table jt;
    jt.header = {"delta", "omega"};
    for (const auto& p : m.jumps) jt.rows.push_back({fmt(p.delta), fmt(p.omega)});
    std::vector<std::string> out{output_path(c, "noise-map", "csv"), output_path(c, "noise-map_jumps", "csv")};
    write_csv(out[0], t);
    write_csv(out[1], jt);
    if (svg(c)) {
        out.push_back(output_path(c, "noise-map", "svg"));
        write_heatmap_svg(out.back(), "omega (beta)", "delta (beta)", {om, de, m.fano, true});
    }
    return out;
}

std::vector<std::string> retard(const Json& c)
{
    TwoDotConfig cfg;
    cfg.gamma_0 = num(c, "gamma_0");
    cfg.r = num(c, "r");
    cfg.v = num(c, "v");
    cfg.theta = opt_num(c, "theta");
    cfg.omega0_over_gamma0 = opt_num(c, "omega0_over_gamma0");
    cfg.coupled = flag(c, "coupled");
    validated([&] {
        cfg.convention = parse_rate_convention(str(c, "convention"));
        cfg.validate();
    });
    const auto rates = rates_of(c);
    const auto om = omega_grid(c);
    const double adt = positive(c, "amplitudes_dt"), at_max = positive(c, "amplitudes_t_max");
    const auto steps = static_cast<std::size_t>(std::llround(at_max / adt));
    require(steps >= 1 && steps <= 10'000'000, "amplitudes_t_max/amplitudes_dt out of range");
    const TimeGrid grid{adt, steps + 1};

    const auto noise = retarded_noise_spectrum(cfg, rates, om);
    const auto amp = retarded_amplitudes_series(cfg, grid, cfg.coupled ? minimal_series_order(cfg, grid.t_max()) : 0);

    Table t;
    t.comments = {"gamma0_tau_d=" + fmt(noise.gamma0_tau) + ",theta=" + fmt(noise.theta) +
                  ",far_field=" + (cfg.far_field() ? "1" : "0")};
    t.header = {"omega", "fano"};
    Series s{"retarded", om, noise.spectrum.fano}, mk{"Markov 2 gamma_0", om, {}};
    for (std::size_t i = 0; i < om.size(); ++i) {
        t.rows.push_back({fmt(om[i]), fmt(noise.spectrum.fano[i])});
        mk.y.push_back(markov_fano(rates, 2.0 * cfg.amplitude_rate(), om[i]));
    }
    Table a;
    a.header = {"t", "re_b1", "im_b1", "re_b2", "im_b2", "survival"};
    for (std::size_t i = 0; i < grid.count; ++i)
        a.rows.push_back({fmt(grid.t(i)), fmt(amp.b1[i].real()), fmt(amp.b1[i].imag()), fmt(amp.b2[i].real()),
                          fmt(amp.b2[i].imag()), fmt(amp.survival[i])});
    std::vector<std::string> out{output_path(c, "retard", "csv"), output_path(c, "retard_amplitudes", "csv")};
    write_csv(out[0], t);
    write_csv(out[1], a);
    if (svg(c)) {
        out.push_back(output_path(c, "retard", "svg"));
        write_line_svg(out.back(), "omega (beta)", "S / 2eI", {s, mk});
    }
    return out;
}

std::vector<std::string> phonon(const Json& c)
{
    ElasticSlab slab;
    slab.w = num(c, "w");
    slab.c_l = num(c, "c_l");
    slab.c_t = num(c, "c_t");
    validated([&] { slab.validate(); });
    std::vector<PhononFamily> fams;
    validated([&] {
        for (const auto& f : c.at("families")) fams.push_back(parse_phonon_family(f.get<std::string>()));
    });
    require(!fams.empty(), "families must not be empty");
    const auto nb = count(c, "branches", 1);
    require(nb <= 12, "branches must be at most 12");
    const double qmax = positive(c, "q_max_w");
    const auto nq = count(c, "q_points", 9);
    std::vector<double> q(nq);
    for (std::size_t i = 0; i < nq; ++i) q[i] = qmax * static_cast<double>(i) / static_cast<double>(nq - 1);

    Table t;
    t.header = {"family", "branch_index", "q_parallel_w", "omega_w_over_ct"};
    Table e;
    e.header = {"family", "branch_index", "kind", "q_c_w", "omega_c_w_over_ct", "A", "fit_window"};
    std::vector<Series> series;
    for (auto f : fams) {
        const auto br = trace_phonon_branches(slab, f, nb, q);
        for (const auto& b : br) {
            Series s{std::string(to_string(f)).substr(0, 4) + " " + std::to_string(b.index), {}, {}};
            for (const auto& x : b.samples) {
                t.rows.push_back({to_string(f), fmt(static_cast<long long>(b.index)), fmt(x.q_w), fmt(x.omega_w)});
                s.x.push_back(x.q_w);
                s.y.push_back(x.omega_w);
            }
            series.push_back(std::move(s));
            for (const auto& p : find_phonon_band_edges(b))
                e.rows.push_back({to_string(f), fmt(static_cast<long long>(b.index)), to_string(p.kind), fmt(p.k_c),
                                  fmt(p.omega_c), fmt(p.A), fmt(p.fit_window)});
        }
    }
    std::vector<std::string> out{output_path(c, "phonon", "csv"), output_path(c, "phonon_edges", "csv")};
    write_csv(out[0], t);
    write_csv(out[1], e);
    if (svg(c)) {
        out.push_back(output_path(c, "phonon", "svg"));
        write_line_svg(out.back(), "q_parallel w", "omega w / c_t", series);
    }
    return out;
}

}  // namespace

std::string output_path(const Json& cfg, const std::string& stem, const std::string& ext)
{
    return (std::filesystem::path(cfg.at("output_dir").get<std::string>()) / (stem + "." + ext)).string();
}

std::vector<std::string> run_command(const std::string& command, const Json& cfg)
{
    static const std::map<std::string, std::function<std::vector<std::string>(const Json&)>> table{
        {"dispersion", dispersion}, {"se-rate", se_rate},  {"decay", decay},   {"noise", noise},
        {"noise-map", noise_map_cmd}, {"retard", retard}, {"phonon", phonon},
    };
    const auto it = table.find(command);
    if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
    ensure_directory(cfg.at("output_dir").get<std::string>());
    return it->second(cfg);
}

}  // namespace pqd::cli
