#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pqd/phonon.hpp"

using namespace pqd;

namespace {

struct PhononRef {
    int family;
    double Q;
    int count;
    double W[3];
};

const PhononRef kRefs[] = {
#include "phonon_reference.inc"
};

constexpr double kPi = std::numbers::pi;

PhononFamily fam(int f) { return f == 0 ? PhononFamily::dilatational : PhononFamily::flexural; }

std::vector<double> q_grid(double hi, std::size_t n)
{
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
    return q;
}

}  // namespace

TEST_CASE("cutoffs at normal incidence")
{
    // dilatational: 2 pi m and (2m+1) pi k; flexural: (2m+1) pi and 2 pi m k
    const auto d = phonon_cutoffs(PhononFamily::dilatational, 2.0, 8);
    const std::vector<double> dw{0.0, 2 * kPi, 2 * kPi, 4 * kPi, 6 * kPi, 6 * kPi, 8 * kPi, 10 * kPi};
    const auto f = phonon_cutoffs(PhononFamily::flexural, 2.0, 8);
    const std::vector<double> fw{0.0, kPi, 3 * kPi, 4 * kPi, 5 * kPi, 7 * kPi, 8 * kPi, 9 * kPi};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(d[i] - dw[i]) <= 1e-12 * std::max(1.0, dw[i]));
        CHECK(std::abs(f[i] - fw[i]) <= 1e-12 * std::max(1.0, fw[i]));
    }
    for (int fi = 0; fi < 2; ++fi) {
        const auto cut = phonon_cutoffs(fam(fi), 2.0, 12);
        for (double W : phonon_roots(fam(fi), 0.0, 2.0, 40.0)) {
            bool hit = false;
            for (double c : cut) hit = hit || std::abs(W - c) <= 1e-12 * c;
            CHECK_MESSAGE(hit, "scan root " << W);
        }
        for (double c : cut)
            if (c > 0.0) {
                const auto p = rayleigh_lamb_parts(fam(fi), 0.0, c, 2.0);
                CHECK(std::abs(p.value) <= 1e-14 * p.scale);
            }
    }
}

TEST_CASE("roots agree with the tan-ratio reference")
{
    for (const auto& r : kRefs) {
        const auto got = phonon_roots(fam(r.family), r.Q, 2.0, 12.0);
        REQUIRE(got.size() == static_cast<std::size_t>(r.count));
        for (int i = 0; i < r.count; ++i) CHECK(std::abs(got[static_cast<std::size_t>(i)] - r.W[i]) < 1e-10 * r.W[i]);
    }
}

TEST_CASE("residual is real for real inputs")
{
    for (int fi = 0; fi < 2; ++fi)
        for (double Q : {0.3, 1.0, 4.0})
            for (double W : {0.2, 1.5, 3.9, 7.7, 13.0}) {
                const auto p = rayleigh_lamb_parts(fam(fi), Q, W, 2.0);
                CHECK(std::abs(p.value.imag()) <= 1e-12 * p.scale);
            }
}

TEST_CASE("traced branches are roots and satisfy the compatibility relation")
{
    ElasticSlab slab;
    const auto q = q_grid(6.0, 301);
    for (int fi = 0; fi < 2; ++fi) {
        const auto br = trace_phonon_branches(slab, fam(fi), 6, q);
        REQUIRE(br.size() == 6);
        for (const auto& b : br) {
            REQUIRE(b.samples.size() == q.size());
            for (std::size_t i = 0; i < b.samples.size(); ++i) {
                const auto& s = b.samples[i];
                CHECK(s.residual < 1e-10);
                const cplx Wt = std::sqrt(s.q_w * s.q_w + s.qt_w * s.qt_w);
                const cplx Wl = 2.0 * std::sqrt(s.q_w * s.q_w + s.ql_w * s.ql_w);
                CHECK(std::abs(Wt - s.omega_w) <= 1e-10 * std::max(1.0, s.omega_w));
                CHECK(std::abs(Wl - s.omega_w) <= 1e-10 * std::max(1.0, s.omega_w));
                if (i > 0) CHECK(s.omega_w >= 0.0);
            }
            CHECK(b.samples[0].omega_w == b.cutoff);
        }
        // ascending order at every Q
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t n = 1; n < br.size(); ++n) CHECK(br[n].samples[i].omega_w >= br[n - 1].samples[i].omega_w);
    }
}

TEST_CASE("onset exponents")
{
    CHECK(std::abs(onset_exponent(PhononFamily::dilatational, 2.0) - 1.0) < 0.02);
    CHECK(std::abs(onset_exponent(PhononFamily::flexural, 2.0) - 2.0) < 0.05);
}

TEST_CASE("dilatational branches have interior minima with stable curvature")
{
    ElasticSlab slab;
    const auto br = trace_phonon_branches(slab, PhononFamily::dilatational, 6, q_grid(6.0, 301));
    std::size_t minima = 0;
    for (const auto& b : br)
        for (const auto& e : find_phonon_band_edges(b)) {
            if (e.kind != ExtremumKind::minimum) continue;
            ++minima;
            std::vector<double> k, w;
            for (int i = -20; i <= 20; ++i) {
                k.push_back(e.k_c + 0.5 * e.fit_window * i / 20.0);
                w.push_back(phonon_root_at(b, k.back()));
            }
            CHECK(std::abs(fit_curvature(k, w, e.k_c, e.omega_c, e.kind) - e.A) < 0.01 * e.A);
        }
    CHECK(minima >= 1);
}

TEST_CASE("physical residual is scale invariant")
{
    ElasticSlab a;
    a.c_l = 5.2;
    a.c_t = 2.6;
    ElasticSlab b = a;
    b.w = 3.0 * a.w;
    for (int fi = 0; fi < 2; ++fi)
        for (double q : {0.002, 0.01, 0.04})
            for (double w : {0.01, 0.1, 0.3}) {
                const cplx ra = rayleigh_lamb_residual(fam(fi), q, w, a);
                const cplx rb = rayleigh_lamb_residual(fam(fi), q / 3.0, w / 3.0, b);
                CHECK(std::abs(ra - rb) <= 1e-12 * std::max(1.0, std::abs(ra)));
            }
}

TEST_CASE("phonon parameter errors")
{
    ElasticSlab s;
    s.c_l = 0.5;
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK_THROWS_AS(trace_phonon_branches(ElasticSlab{}, PhononFamily::flexural, 13, {0.0, 1.0}), Error);
    CHECK_THROWS_AS(parse_phonon_family("shear"), Error);
    CHECK(parse_phonon_family("flexural") == PhononFamily::flexural);
}
