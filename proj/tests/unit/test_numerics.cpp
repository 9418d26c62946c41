#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pqd/numerics.hpp"

using namespace pqd;

namespace {

struct BesselRef {
    int n;
    cplx z, j, dj, h, dh;
};

const BesselRef kBesselRef[] = {
#include "bessel_reference.inc"
};

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("cylinder functions match frozen high-precision values")
{
    int checked = 0;
    double worst_j = 0.0, worst_h = 0.0;
    for (const auto& r : kBesselRef) {
        const auto j = cylinder_bessel(CylinderKind::BesselJ, r.n, r.z);
        const auto h = cylinder_bessel(CylinderKind::Hankel1, r.n, r.z);
        // relative error is only meaningful away from underflow of the reference itself
        if (std::abs(r.j) > 1e-290) {
            const double e = std::max(rel(j.value, r.j), std::abs(r.dj) > 1e-290 ? rel(j.derivative, r.dj) : 0.0);
            worst_j = std::max(worst_j, e);
            CHECK_MESSAGE(e < 1e-10, "J n=" << r.n << " z=" << r.z << " err=" << e);
        }
        const double eh = std::max(rel(h.value, r.h), rel(h.derivative, r.dh));
        worst_h = std::max(worst_h, eh);
        CHECK_MESSAGE(eh < 1e-10, "H n=" << r.n << " z=" << r.z << " err=" << eh);
        ++checked;
    }
    CHECK(checked > 800);
    MESSAGE("worst J " << worst_j << " worst H " << worst_h);
}

TEST_CASE("J_0(0) = 1 with zero derivative")
{
    const auto v = cylinder_bessel(CylinderKind::BesselJ, 0, 0.0);
    CHECK(v.value == cplx(1.0));
    CHECK(v.derivative == cplx(0.0));
}

TEST_CASE("Wronskian identity on the real axis")
{
    for (int n = 0; n <= 5; ++n)
        for (double x : {0.1, 1.0, 10.0, 100.0}) {
            const auto j = cylinder_bessel(CylinderKind::BesselJ, n, x);
            const auto h = cylinder_bessel(CylinderKind::Hankel1, n, x);
            const cplx w = j.value * h.derivative - j.derivative * h.value;
            const cplx want(0.0, 2.0 / (kPi * x));
            CHECK(std::abs(w - want) <= 1e-10 * std::abs(want));
        }
}

TEST_CASE("H_0 at |z| = 50 is close to its leading asymptotic form")
{
    for (double ph : {0.0, 0.5, 1.2, 2.5, -0.7}) {
        const cplx z = std::polar(50.0, ph);
        if (std::abs(z.imag()) > 40.0) continue;
        const auto h = cylinder_bessel(CylinderKind::Hankel1, 0, z);
        const cplx asym = std::sqrt(2.0 / (kPi * z)) * std::exp(cplx(0.0, 1.0) * (z - kPi / 4.0));
        CHECK(rel(h.value, asym) < 0.01);
    }
}

TEST_CASE("cylinder function domain errors")
{
    CHECK_THROWS_AS(cylinder_bessel(CylinderKind::Hankel1, 0, 0.0), Error);
    CHECK_THROWS_AS(cylinder_bessel(CylinderKind::BesselJ, 17, 1.0), Error);
    CHECK_THROWS_AS(cylinder_bessel(CylinderKind::BesselJ, 0, cplx(0.0, 800.0)), Error);
}

TEST_CASE("complex roots of simple analytic functions")
{
    const cplx r1 = find_root_complex([](cplx z) { return z * z + 1.0; }, {0.1, 0.9}, 1e-14);
    CHECK(std::abs(r1 - cplx(0.0, 1.0)) < 1e-12);
    const cplx r2 = find_root_complex([](cplx z) { return std::sin(z); }, 3.0, 1e-14);
    CHECK(std::abs(r2 - kPi) < 1e-12);
}

TEST_CASE("root finder is deterministic and reports failure")
{
    auto f = [](cplx z) { return std::exp(z) - 2.0 + z * z * z; };
    const cplx a = find_root_complex(f, {0.3, 0.2}, 1e-14);
    const cplx b = find_root_complex(f, {0.3, 0.2}, 1e-14);
    CHECK(a == b);
    try {
        find_root_complex([](cplx z) { return std::exp(z); }, 0.0, 1e-14, {10, 0.5});
        CHECK(false);
    } catch (const NoConvergence& e) {
        CHECK(e.kind() == ErrorKind::no_convergence);
        CHECK(std::isfinite(e.residual()));
    }
}

TEST_CASE("argument principle isolates roots in a rectangle")
{
    auto f = [](cplx z) { return (z - cplx(0.3, 0.1)) * (z - cplx(-0.4, -0.2)) * (z - cplx(2.0, 0.0)); };
    CHECK(winding_number(f, {-1.0, 1.0, -1.0, 1.0}) == 2);
    const auto roots = roots_in_rectangle(f, {-1.0, 1.0, -1.0, 1.0}, 1e-14);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - cplx(-0.4, -0.2)) < 1e-12);
    CHECK(std::abs(roots[1] - cplx(0.3, 0.1)) < 1e-12);
}

TEST_CASE("inverse Laplace standard pairs")
{
    const TimeGrid grid{0.05, 201};
    for (auto method : {InversionMethod::DeformedContour, InversionMethod::SeriesAcceleration}) {
        InversionSettings st;
        st.method = method;
        const auto f = invert_laplace([](cplx s) { return 1.0 / (s + 1.0); }, grid, st);
        const auto g = invert_laplace([](cplx s) { return 1.0 / std::sqrt(s); }, grid, st);
        for (std::size_t i = 4; i < grid.count; ++i) {
            const double t = grid.t(i);
            CHECK(std::abs(f[i] - std::exp(-t)) <= 1e-6 * std::exp(-t));
            const double want = 1.0 / std::sqrt(kPi * t);
            CHECK(std::abs(g[i] - want) <= 1e-6 * want);
        }
    }
}

TEST_CASE("inverse Laplace of an oscillatory pole pair with declared extent")
{
    // f = cos(3t) e^{-0.2t}
    InversionSettings st;
    st.extent = 3.0;
    const TimeGrid grid{0.1, 201};
    const auto f = invert_laplace([](cplx s) { return (s + 0.2) / ((s + 0.2) * (s + 0.2) + 9.0); }, grid, st);
    for (std::size_t i = 1; i < grid.count; ++i) {
        const double t = grid.t(i);
        CHECK(std::abs(f[i] - std::cos(3.0 * t) * std::exp(-0.2 * t)) < 1e-9);
    }
}

TEST_CASE("too few contour nodes are detected")
{
    InversionSettings st;
    st.auto_nodes = false;
    st.node_count = 16;
    st.extent = 5.0;
    CHECK_THROWS_AS(invert_laplace([](cplx s) { return 1.0 / (s * s + 25.0); }, TimeGrid{0.5, 41}, st), Error);
}

TEST_CASE("Volterra solver: decoupled and constant-kernel limits")
{
    const TimeGrid grid{0.01, 1001};
    const double gamma = 0.3;
    VolterraKernel zero{[](double) { return cplx(0.0); }, false};
    const auto b0 = solve_volterra(0.5 * gamma, zero, grid);
    for (std::size_t i = 0; i < grid.count; ++i) CHECK(std::abs(b0[i] - std::exp(-0.5 * gamma * grid.t(i))) < 1e-12);

    // b' = -l b - K0 int b  <=>  c'' + l c' + K0 c = 0 with b = c'
    const cplx l(0.2, 0.1), K0(1.5, -0.3);
    const cplx disc = std::sqrt(l * l - 4.0 * K0);
    const cplx r1 = 0.5 * (-l + disc), r2 = 0.5 * (-l - disc);
    auto exact = [&](double t) { return (r1 * std::exp(r1 * t) - r2 * std::exp(r2 * t)) / (r1 - r2); };
    VolterraKernel konst{[&](double) { return K0; }, false};
    const auto b = solve_volterra(l, konst, grid);
    for (std::size_t i = 0; i < grid.count; ++i) CHECK(std::abs(b[i] - exact(grid.t(i))) < 1e-8);

    // raw scheme is second order: halving h cuts the error by about four
    auto err = [&](double h) {
        const std::size_t n = static_cast<std::size_t>(std::lround(10.0 / h));
        const auto v = volterra_pass(l, konst, h, n);
        double e = 0.0;
        for (std::size_t i = 0; i <= n; ++i) e = std::max(e, std::abs(v[i] - exact(h * i)));
        return e;
    };
    CHECK(err(0.02) / err(0.01) >= 3.5);
}

TEST_CASE("Volterra product integration of the inverse-square-root kernel")
{
    // kernel C e^{-i pi/4} e^{i d tau}/sqrt(pi tau); transform 1/(s + g/2 + C e^{-i pi/4}/sqrt(s - i d))
    const double C = 1.0, g = 0.1, d = 0.4;
    const cplx phase = std::polar(1.0, -kPi / 4.0);
    VolterraKernel k{[&](double tau) { return phase * C * std::polar(1.0, d * tau) / std::sqrt(kPi); }, true};
    const TimeGrid grid{0.01, 1001};
    VolterraOptions vo;
    vo.substeps = 2;
    const auto b = solve_volterra(0.5 * g, k, grid, vo);
    InversionSettings st;
    st.center = d;
    st.extent = std::abs(d) + 0.5 * g + std::pow(C, 2.0 / 3.0) + 1.0;
    const auto f = invert_laplace([&](cplx s) { return 1.0 / (s + 0.5 * g + phase * C / std::sqrt(s - cplx(0.0, d))); },
                                  grid, st);
    double worst = 0.0;
    for (std::size_t i = 1; i < grid.count; ++i) worst = std::max(worst, std::abs(b[i] - f[i]));
    MESSAGE("Volterra vs contour sup-norm " << worst);
    CHECK(worst < 1e-6);
}
