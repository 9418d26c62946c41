// Acceptance run: one PASS/FAIL line per criterion.
// usage: pqd_acceptance [path-to-cli work-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pqd/dispersion.hpp"
#include "pqd/dynamics.hpp"
#include "pqd/emission.hpp"
#include "pqd/noise.hpp"
#include "pqd/phonon.hpp"
#include "pqd/retardation.hpp"

using namespace pqd;
namespace fs = std::filesystem;

namespace {

struct MarkovRef {
    double gL, gR, gamma, omega, fano;
};

const MarkovRef kMarkov[] = {
#include "markov_reference.inc"
};

constexpr double kPi = std::numbers::pi;

// Sub-parts expected to fail; see the project notes for the analysis of each.
const std::set<std::string> kKnownFailures{"1a", "3c", "7c"};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct Part {
    std::string id;
    bool pass;
    std::string detail;
};

struct Criterion {
    int number;
    std::string title;
    std::vector<Part> parts;
    double seconds = 0.0;
};

std::vector<std::string> g_unexpected;

void report(const Criterion& c)
{
    bool all = true;
    for (const auto& p : c.parts) all = all && p.pass;
    std::ostringstream line;
    line << "criterion " << c.number << " (" << c.title << "): " << (all ? "PASS" : "FAIL") << " [" << num(c.seconds, 3)
         << " s]";
    for (const auto& p : c.parts) {
        line << " | " << p.id << " " << (p.pass ? "pass" : "FAIL") << ": " << p.detail;
        if (!p.pass && !kKnownFailures.count(p.id)) g_unexpected.push_back(p.id);
    }
    std::printf("%s\n", line.str().c_str());
    std::fflush(stdout);
}

template <typename Fn>
Criterion run(int number, const std::string& title, Fn&& fn)
{
    Criterion c{number, title, {}, 0.0};
    const auto t0 = Clock::now();
    try {
        fn(c.parts);
    } catch (const std::exception& e) {
        c.parts.push_back({std::to_string(number) + "!", false, std::string("exception: ") + e.what()});
    }
    c.seconds = since(t0);
    return c;
}

Part runtime(const std::string& id, double seconds, double limit)
{
    return {id, seconds < limit, num(seconds, 3) + " s (limit " + num(limit, 3) + " s)"};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ReservoirSpec reservoir(double delta, double gamma, double C = 1.0)
{
    ReservoirSpec s;
    s.delta = delta;
    s.gamma = gamma;
    s.C = C;
    return s;
}

const std::vector<ModeBranch>& plasmons()
{
    static const auto b = trace_modes({0, 1, 2, 3}, uniform_grid(0.05, 30.0, 400), DispersionSetup{});
    return b;
}

// 1. dispersion structure
void dispersion(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const auto& br = plasmons();
    const double traced = since(t0);

    const auto& b0 = br[0];
    bool monotone = true;
    for (std::size_t i = 1; i < b0.samples.size(); ++i)
        monotone = monotone && b0.samples[i].omega.real() > b0.samples[i - 1].omega.real();
    const double flat = std::sqrt(9.6 / 14.9);
    const double w20 = branch_root_at(b0, 20.0).real();
    const double rel = std::abs(w20 - flat) / flat;
    out.push_back({"1a", monotone && rel < 0.01,
                   std::string("monotone=") + (monotone ? "yes" : "no") + ", Omega(K=20)=" + num(w20, 8) + " vs " +
                       num(flat, 6) + " (" + num(100 * rel, 3) + "% off, limit 1%)"});

    int minima = 0;
    double kmin = 0.0;
    for (const auto& e : find_band_edges(br[1]))
        if (e.kind == ExtremumKind::minimum) {
            ++minima;
            kmin = e.k_c;
        }
    out.push_back({"1b", minima >= 1, std::to_string(minima) + " bound minimum of n=1 (k_c=" + num(kmin, 6) + ")"});

    double worst = 0.0;
    std::size_t roots = 0;
    for (const auto& b : br)
        for (const auto& s : b.samples) {
            worst = std::max(worst, s.residual);
            ++roots;
        }
    out.push_back({"1c", worst < 1e-12, "max normalized residual " + num(worst, 3) + " over " + std::to_string(roots) + " roots"});
    out.push_back(runtime("1t", traced, 60.0));
}

// 2. spontaneous-emission profile
void se_rate(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const auto& br = plasmons();
    double lo = 1e300, hi = -1e300;
    for (const auto& b : br) {
        CrossingDensity d(b);
        lo = std::min(lo, d.lo());
        hi = std::max(hi, d.hi());
    }
    const auto grid = uniform_grid(lo, hi, 2001);
    const double cell = grid[1] - grid[0];
    const auto p = se_rate_profile(br, CouplingModel{}, grid);

    std::vector<double> edges;
    for (const auto& b : br)
        for (const auto& e : find_band_edges(b)) edges.push_back(e.omega_c);
    std::size_t flagged = 0, matched = 0, covered = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (p.singular[i]) {
            ++flagged;
            bool near = false;
            for (double w : edges) near = near || std::abs(grid[i] - w) <= cell;
            matched += near;
        }
    for (double w : edges) {
        bool near = false;
        for (std::size_t i = 0; i < grid.size(); ++i) near = near || (p.singular[i] && std::abs(grid[i] - w) <= cell);
        covered += near;
    }
    out.push_back({"2a", flagged > 0 && matched == flagged && covered == edges.size(),
                   std::to_string(matched) + "/" + std::to_string(flagged) + " flagged cells within one cell of an edge, " +
                       std::to_string(covered) + "/" + std::to_string(edges.size()) + " edges flagged"});

    double worst = 0.0;
    std::string slopes;
    for (const auto& b : br) {
        CrossingDensity d(b);
        for (const auto& e : d.edges()) {
            const double sign = e.kind == ExtremumKind::minimum ? 1.0 : -1.0;
            std::vector<double> x, y;
            for (int i = 0; i <= 20; ++i) {
                x.push_back(e.omega_c * std::pow(10.0, -9.0 + 0.1 * i));
                y.push_back(d(e.omega_c + sign * x.back()));
            }
            const double s = loglog_slope(x, y);
            worst = std::max(worst, std::abs(s + 0.5));
            slopes += (slopes.empty() ? "" : ", ") + std::string("n=") + std::to_string(e.n) + " " +
                      to_string(e.kind) + " " + num(s, 5);
        }
    }
    out.push_back({"2b", !slopes.empty() && worst <= 0.02, "slopes " + slopes + " (target -0.5 +- 0.02)"});
    out.push_back(runtime("2t", since(t0), 30.0));
}

// 3. non-Markovian decay
void decay(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const TimeGrid grid{0.01, 1001};
    double cross = 0.0, peak = 0.0;
    std::vector<double> at10;
    bool oscillates = true;
    std::string rises_at;
    for (double d : {0.2, 0.4, 0.8}) {
        const auto tr = decay_trace(reservoir(d, 0.1), grid);
        cross = std::max(cross, tr.cross_check);
        double first_rise = -1.0;
        for (std::size_t i = 1; i < grid.count; ++i) {
            peak = std::max(peak, std::abs(tr.b_e[i]));
            if (first_rise < 0.0 && tr.population[i] > tr.population[i - 1] + 1e-12) first_rise = grid.t(i);
        }
        oscillates = oscillates && first_rise > 0.0;
        rises_at += (rises_at.empty() ? "" : ", ") + num(first_rise, 3);
        at10.push_back(tr.population.back());
    }
    out.push_back({"3a", oscillates, "first rise of |b_e|^2 at t = " + rises_at});
    out.push_back({"3b", at10[0] > at10[1] && at10[1] > at10[2],
                   "|b_e(10)|^2 = " + num(at10[0], 6) + ", " + num(at10[1], 6) + ", " + num(at10[2], 6)});

    const auto flat = decay_trace(reservoir(0.0, 0.0), grid);
    cross = std::max(cross, flat.cross_check);
    double mn = 1e300, mx = -1e300;
    for (std::size_t i = 0; i < grid.count; ++i)
        if (grid.t(i) >= 8.0 - 1e-12) {
            mn = std::min(mn, flat.population[i]);
            mx = std::max(mx, flat.population[i]);
        }
    out.push_back({"3c", mx - mn < 1e-3,
                   "population on [8,10] spans " + num(mn, 7) + ".." + num(mx, 7) + " (variation " + num(mx - mn, 3) +
                       ", limit 1e-3)"});
    out.push_back({"3d", cross < 1e-5 && peak <= 1.0 + 1e-9,
                   "Laplace vs Volterra " + num(cross, 3) + " (limit 1e-5), max |b_e| " + num(peak, 12)});
    out.push_back(runtime("3t", since(t0), 60.0));
}

// 4. noise spectrum
void noise(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const JunctionRates jr{0.01, 0.1};
    const auto om = symmetric_grid(0.05, 201);
    const double cell = om[1] - om[0];

    QuadraticSelfEnergy below(reservoir(-0.01, 0.0));
    const auto sb = noise_spectrum(jr, below, om);
    double plateau = 0.0;
    for (std::size_t i = 0; i < om.size(); ++i)
        if (std::abs(om[i]) < 0.01 - 1e-12) plateau = std::max(plateau, std::abs(sb.fano[i] - 1.0));
    out.push_back({"4a", plateau < 1e-3, "max |S/2eI - 1| inside the window " + num(plateau, 3) + " (limit 1e-3)"});

    const auto jumps = detect_jumps(om, sb.fano);
    bool at_edges = jumps.size() == 2;
    std::string where;
    for (double j : jumps) {
        at_edges = at_edges && std::abs(std::abs(j) - 0.01) <= cell;
        where += (where.empty() ? "" : ", ") + num(j, 6);
    }
    out.push_back({"4b", at_edges, "jumps at " + where + " (cell " + num(cell, 3) + ")"});

    QuadraticSelfEnergy above(reservoir(0.01, 0.0));
    const auto sa = noise_spectrum(jr, above, om);
    double highest = 0.0;
    for (std::size_t i = 0; i < om.size(); ++i)
        if (std::abs(om[i]) < 0.01 - 1e-12) highest = std::max(highest, sa.fano[i]);
    out.push_back({"4c", highest < 1.0, "delta=+0.01: max S/2eI inside the window " + num(highest, 6)});

    double worst = 0.0;
    for (const auto& r : kMarkov) {
        const JunctionRates j{r.gL, r.gR};
        QuadraticSelfEnergy q(reservoir(0.01, r.gamma, 0.0));
        worst = std::max({worst, std::abs(markov_fano(j, r.gamma, r.omega) - r.fano),
                          std::abs(noise_spectrum(j, q, {r.omega}).fano[0] - r.fano)});
    }
    out.push_back({"4d", worst < 1e-10, "Markov limit vs reference " + num(worst, 3) + " over " +
                                            std::to_string(std::size(kMarkov)) + " cases (limit 1e-10)"});
    out.push_back(runtime("4t", since(t0), 30.0));
}

// 5. noise map
void noise_map_check(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const JunctionRates jr{0.01, 0.1};
    const auto om = symmetric_grid(0.05, 201);
    const auto de = offset_grid(0.05, 201);
    const double cell = om[1] - om[0];
    const auto m = noise_map(jr, [](double d) { return std::make_unique<QuadraticSelfEnergy>(reservoir(d, 0.0)); }, de, om);
    std::size_t on = 0;
    for (const auto& j : m.jumps) on += std::min(std::abs(j.omega - j.delta), std::abs(j.omega + j.delta)) <= cell;
    // rows with cell <= |delta| < omega_max must show their pair of jumps; closer to zero the two
    // jumps sit in adjacent cells and cannot be told apart
    std::size_t rows = 0;
    for (double d : de) {
        std::size_t n = 0;
        for (const auto& j : m.jumps) n += j.delta == d;
        rows += n >= 2 || std::abs(d) < cell || std::abs(d) >= 0.05 - cell;
    }
    out.push_back({"5a", !m.jumps.empty() && on == m.jumps.size() && rows == de.size(),
                   std::to_string(on) + "/" + std::to_string(m.jumps.size()) + " jumps within one cell of delta=+-omega, " +
                       std::to_string(rows) + "/" + std::to_string(de.size()) + " rows resolved"});

    const auto branch = trace_mode(1, uniform_grid(0.05, 40.0, 400), DispersionSetup{});
    const CrossingDensity dens(branch);
    std::size_t idx = dens.edges().size();
    for (std::size_t i = 0; i < dens.edges().size(); ++i)
        if (dens.edges()[i].kind == ExtremumKind::minimum) idx = i;
    NumericReservoirParams np;
    np.edge_index = idx;
    const NumericSelfEnergy base(branch, np);
    double worst = 0.0;
    for (double d : {-0.02, -0.01, 0.01, 0.02}) {
        auto p = np;
        p.delta = d;
        const NumericSelfEnergy ns(base, p);
        QuadraticSelfEnergy qs(reservoir(d, 0.0));
        const auto a = noise_spectrum(jr, ns, om), b = noise_spectrum(jr, qs, om);
        for (std::size_t i = 0; i < om.size(); ++i) worst = std::max(worst, std::abs(a.fano[i] - b.fano[i]) / std::abs(b.fano[i]));
    }
    out.push_back({"5b", worst < 0.05, "numeric (n=1 minimum, k_c=" + num(base.edge().k_c, 6) +
                                           ") vs quadratic, max relative difference " + num(worst, 3) + " (limit 5%)"});
    out.push_back(runtime("5t", since(t0), 600.0));
}

// 6. retardation
void retardation(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const JunctionRates jr{1.0, 1.0};
    double cross = 0.0, before = 0.0;
    std::string ripples;
    double dev_min = 1e300, spacing_err = 0.0;
    for (double gt : {2.0 * kPi, 4.0 * kPi}) {
        TwoDotConfig c;
        c.gamma_0 = 1.0;
        c.r = gt;
        c.v = 1.0;
        c.omega0_over_gamma0 = 1000.0;
        const TimeGrid grid{0.05, 601};
        const auto s = retarded_amplitudes_series(c, grid, minimal_series_order(c, grid.t_max()));
        const auto inv = retarded_amplitudes_inverted(c, grid);
        for (std::size_t i = 0; i < grid.count; ++i) {
            cross = std::max({cross, std::abs(s.b1[i] - inv.b1[i]), std::abs(s.b2[i] - inv.b2[i])});
            if (grid.t(i) < c.tau_d()) before = std::max(before, std::abs(s.b2[i]));
        }

        std::vector<double> om;
        for (int i = -400; i <= 400; ++i) om.push_back(0.01 * i);
        const auto n = retarded_noise_spectrum(c, jr, om);
        double dev = 0.0;
        std::vector<double> peaks;
        for (std::size_t i = 0; i < om.size(); ++i) {
            dev = std::max(dev, std::abs(n.spectrum.fano[i] - markov_fano(jr, 2.0 * c.amplitude_rate(), om[i])));
            if (i > 0 && i + 1 < om.size() && om[i] > 0.0 && n.spectrum.fano[i] > n.spectrum.fano[i - 1] &&
                n.spectrum.fano[i] > n.spectrum.fano[i + 1])
                peaks.push_back(om[i]);
        }
        dev_min = std::min(dev_min, dev);
        const double expected = 2.0 * kPi * c.v / c.r;
        double err = 1.0;
        double spacing = 0.0;
        if (peaks.size() >= 2) {
            spacing = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
            err = std::abs(spacing - expected) / expected;
        }
        spacing_err = std::max(spacing_err, err);
        ripples += (ripples.empty() ? "" : "; ") + std::string("gamma0 tau=") + num(gt, 4) + ": sup dev " + num(dev, 4) +
                   ", " + std::to_string(peaks.size()) + " peaks, spacing " + num(spacing, 4) + " vs " + num(expected, 4);
    }
    out.push_back({"6a", cross < 1e-8, "series vs Laplace " + num(cross, 3) + " (limit 1e-8)"});
    out.push_back({"6b", before == 0.0, "max |b2| before r/v = " + num(before, 3)});
    out.push_back({"6c", dev_min > 0.01 && spacing_err <= 0.10, ripples + " (spacing limit 10%)"});

    TwoDotConfig dec;
    dec.gamma_0 = 1.0;
    dec.coupled = false;
    std::vector<double> om;
    for (int i = -100; i <= 100; ++i) om.push_back(0.05 * i);
    const auto nd = retarded_noise_spectrum(dec, jr, om);
    double worst = 0.0;
    for (std::size_t i = 0; i < om.size(); ++i)
        worst = std::max(worst, std::abs(nd.spectrum.fano[i] - markov_fano(jr, 2.0, om[i])));
    out.push_back({"6d", worst < 1e-8, "decoupled vs Markov " + num(worst, 3) + " (limit 1e-8)"});
    out.push_back(runtime("6t", since(t0), 60.0));
}

// 7. phonon slab
void phonon(std::vector<Part>& out)
{
    const auto t0 = Clock::now();
    const double ratio = 2.0;
    const std::vector<double> dil{0.0, 2 * kPi, 2 * kPi, 4 * kPi, 6 * kPi, 6 * kPi, 8 * kPi, 10 * kPi};
    const std::vector<double> flx{0.0, kPi, 3 * kPi, 4 * kPi, 5 * kPi, 7 * kPi, 8 * kPi, 9 * kPi};
    double cut = 0.0;
    const auto d = phonon_cutoffs(PhononFamily::dilatational, ratio, dil.size());
    const auto f = phonon_cutoffs(PhononFamily::flexural, ratio, flx.size());
    for (std::size_t i = 0; i < dil.size(); ++i)
        cut = std::max({cut, std::abs(d[i] - dil[i]) / std::max(1.0, dil[i]), std::abs(f[i] - flx[i]) / std::max(1.0, flx[i])});
    out.push_back({"7a", cut <= 1e-12, "cutoff error " + num(cut, 3) + " over 8 branches per family (limit 1e-12)"});

    const double ed = onset_exponent(PhononFamily::dilatational, ratio);
    const double ef = onset_exponent(PhononFamily::flexural, ratio);
    out.push_back({"7b", std::abs(ef - 2.0) <= 0.05 && std::abs(ed - 1.0) <= 0.02,
                   "flexural " + num(ef, 6) + " (2 +- 0.05), dilatational " + num(ed, 6) + " (1 +- 0.02)"});

    ElasticSlab slab;
    slab.c_l = 2.0;
    slab.c_t = 1.0;
    std::vector<double> q(401);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = 8.0 * static_cast<double>(i) / 400.0;
    std::string minima;
    bool each = true;
    double compat = 0.0, resid = 0.0;
    for (auto fam : {PhononFamily::dilatational, PhononFamily::flexural}) {
        const auto br = trace_phonon_branches(slab, fam, 6, q);
        std::size_t count = 0;
        for (const auto& b : br) {
            for (const auto& e : find_phonon_band_edges(b)) count += e.kind == ExtremumKind::minimum;
            for (const auto& s : b.samples) {
                resid = std::max(resid, s.residual);
                const cplx Wt = std::sqrt(s.q_w * s.q_w + s.qt_w * s.qt_w);
                const cplx Wl = ratio * std::sqrt(s.q_w * s.q_w + s.ql_w * s.ql_w);
                const double scale = std::max(1.0, s.omega_w);
                compat = std::max({compat, std::abs(Wt - s.omega_w) / scale, std::abs(Wl - s.omega_w) / scale});
            }
        }
        each = each && count >= 1;
        minima += (minima.empty() ? "" : ", ") + std::string(to_string(fam)) + " " + std::to_string(count);
    }
    out.push_back({"7c", each, "interior minima in the first six branches: " + minima});
    out.push_back({"7d", compat <= 1e-10 && resid <= 1e-10,
                   "compatibility " + num(compat, 3) + ", residual " + num(resid, 3) + " (limit 1e-10)"});
    out.push_back(runtime("7t", since(t0), 60.0));
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 8. determinism of every CLI command
void determinism(std::vector<Part>& out, const std::string& cli, const fs::path& work, Clock::time_point suite_start)
{
    if (cli.empty()) {
        out.push_back({"8a", false, "no CLI path given"});
        return;
    }
    const std::vector<std::pair<std::string, std::string>> runs{
        {"dispersion", "--R 0.1 --modes 0,1,2,3"},
        {"se-rate", ""},
        {"decay", "--delta 0.2"},
        {"noise", "--delta -0.01 --gammaL 0.01 --gammaR 0.1 --svg true"},
        {"noise-map", "--svg true"},
        {"retard", "--omega0_over_gamma0 1000"},
        {"phonon", "--c_l 2 --c_t 1"},
    };
    std::size_t ok = 0;
    std::string bad;
    for (const auto& [cmd, args] : runs) {
        const auto a = work / (cmd + "_run"), b = work / (cmd + "_replay");
        fs::remove_all(a);
        fs::remove_all(b);
        const std::string first = quote(cli) + " " + cmd + " " + args + " --output_dir " + quote(a.string()) + " >/dev/null";
        const std::string again = quote(cli) + " " + cmd + " --config " + quote((a / (cmd + ".json")).string()) +
                                  " --output_dir " + quote(b.string()) + " >/dev/null";
        bool same = std::system(first.c_str()) == 0 && std::system(again.c_str()) == 0;
        std::size_t files = 0;
        if (same)
            for (const auto& e : fs::directory_iterator(a)) {
                const auto ext = e.path().extension();
                if (ext != ".csv" && ext != ".svg") continue;
                ++files;
                same = same && fs::exists(b / e.path().filename()) && slurp(e.path()) == slurp(b / e.path().filename());
            }
        same = same && files > 0;
        ok += same;
        if (!same) bad += " " + cmd;
    }
    out.push_back({"8a", ok == runs.size(),
                   std::to_string(ok) + "/" + std::to_string(runs.size()) + " commands byte-identical on sidecar replay" +
                       (bad.empty() ? "" : "; differing:" + bad)});
    out.push_back(runtime("8t", since(suite_start), 900.0));
}

}  // namespace

int main(int argc, char** argv)
{
    const auto start = Clock::now();
    const std::string cli = argc > 1 ? fs::absolute(argv[1]).string() : "";
    const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "pqd_acceptance";
    fs::create_directories(work);

    report(run(1, "dispersion structure", dispersion));
    report(run(2, "emission profile", se_rate));
    report(run(3, "non-Markovian decay", decay));
    report(run(4, "noise spectrum", noise));
    report(run(5, "noise map", noise_map_check));
    report(run(6, "retardation", retardation));
    report(run(7, "phonon slab", phonon));
    report(run(8, "determinism", [&](std::vector<Part>& p) { determinism(p, cli, work, start); }));

    std::printf("known failures: 1a 3c 7c; unexpected failures: %s\n",
                g_unexpected.empty() ? "none" : [&] {
                    static std::string s;
                    for (const auto& id : g_unexpected) s += id + " ";
                    return s.c_str();
                }());
    return g_unexpected.empty() ? 0 : 1;
}
