#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/fourier.hpp"
#include "billiards/geometry.hpp"

using namespace billiards;
using std::numbers::pi;

TEST_CASE("unit circle: closed forms") {
    const BoundaryCurve c = make_ellipse(1.0, 1.0);
    CHECK(c.length() == doctest::Approx(2 * pi).epsilon(1e-12));
    for (double s : {0.0, 0.9, 3.1, 5.5}) {
        CHECK(c.curvature_radius(s) == doctest::Approx(1.0).epsilon(1e-11));
        const Vec2 p = c.position(s);
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-11));
        const Vec2 n = c.outward_normal(s);
        CHECK(n.x == doctest::Approx(p.x).epsilon(1e-10));
        CHECK(n.y == doctest::Approx(p.y).epsilon(1e-10));
    }
}

TEST_CASE("ellipse(2,1): vertex curvature radius and length vs elliptic-integral oracle") {
    const BoundaryCurve c = make_ellipse(2.0, 1.0);
    CHECK(c.curvature_radius(0.0) == doctest::Approx(0.5).epsilon(1e-10));
    const double ecc = std::sqrt(1.0 - 0.25);
    const double exact = 4.0 * 2.0 * boost::math::ellint_2(ecc);
    CHECK(c.length() == doctest::Approx(exact).epsilon(1e-11));
    CHECK(c.length() == doctest::Approx(9.68844822).epsilon(1e-8));
    // s = 0 sits at (2, 0)
    CHECK(c.position(0.0).x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(c.position(0.0).y) < 1e-10);
}

TEST_CASE("tangent/normal orthonormality and total turning") {
    const BoundaryCurve c = make_ellipse(1.7, 1.0);
    const std::size_t n = 257;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = c.length() * static_cast<double>(i) / n;
        const Vec2 t = c.tangent(s), m = c.outward_normal(s);
        CHECK(std::abs(dot(t, m)) < 1e-12);
        CHECK(t.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    // closure: integral of 1/rho ds = 2 pi
    const std::size_t g = 4096;
    std::vector<double> integrand(g);
    for (std::size_t i = 0; i < g; ++i) {
        const double s = c.length() * static_cast<double>(i) / g;
        integrand[i] = 1.0 / c.curvature_radius(s);
    }
    CHECK(periodic_mean(integrand) * c.length() == doctest::Approx(2 * pi).epsilon(1e-11));
}

TEST_CASE("rho recomputed from second derivatives of position") {
    for (double a : {1.0, 2.0}) {
        const BoundaryCurve c = make_ellipse(a, 1.0);
        const std::size_t n = 2048;
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = c.length() * static_cast<double>(i) / n;
            const Vec2 p = c.position(s);
            xs[i] = p.x;
            ys[i] = p.y;
        }
        const auto dx = spectral_derivative(xs, c.length());
        const auto dy = spectral_derivative(ys, c.length());
        const auto ddx = spectral_derivative(dx, c.length());
        const auto ddy = spectral_derivative(dy, c.length());
        for (std::size_t i = 0; i < n; i += 97) {
            const double s = c.length() * static_cast<double>(i) / n;
            const double kappa = dx[i] * ddy[i] - dy[i] * ddx[i];
            CHECK(1.0 / kappa == doctest::Approx(c.curvature_radius(s)).epsilon(1e-8));
        }
    }
}

TEST_CASE("ellipse quarter-period symmetry of rho") {
    const BoundaryCurve c = make_ellipse(2.0, 1.0);
    const double L = c.length();
    for (double s : {0.13, 0.77, 1.9, 2.4}) {
        CHECK(c.curvature_radius(L - s) == doctest::Approx(c.curvature_radius(s)).epsilon(1e-10));
        CHECK(c.curvature_radius(L / 2 + s) == doctest::Approx(c.curvature_radius(L / 2 - s)).epsilon(1e-10));
    }
}

TEST_CASE("rho' and rho'' agree with finite differences") {
    const BoundaryCurve c = make_ellipse(2.0, 1.0);
    const double h = 1e-5;
    for (double s : {0.4, 2.2, 6.6}) {
        const auto [d1, d2] = c.curvature_radius_derivs(s);
        const double fd1 = (c.curvature_radius(s + h) - c.curvature_radius(s - h)) / (2 * h);
        const double fd2 =
            (c.curvature_radius(s + h) - 2 * c.curvature_radius(s) + c.curvature_radius(s - h)) / (h * h);
        CHECK(d1 == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(d2 == doctest::Approx(fd2).epsilon(1e-4));
    }
}

TEST_CASE("invalid axes are rejected") {
    CHECK_THROWS_AS(make_ellipse(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("curvature-Fourier factory") {
    SUBCASE("constant rho gives a circle") {
        const BoundaryCurve c = make_from_curvature_fourier(FourierSeries(1.0));
        CHECK(c.length() == doctest::Approx(2 * pi).epsilon(1e-12));
        for (double s : {0.3, 4.0}) CHECK(c.curvature_radius(s) == doctest::Approx(1.0).epsilon(1e-11));
    }
    SUBCASE("1 + 0.3 cos(2 theta) closes with length 2 pi") {
        FourierSeries rho;
        rho.a0 = 1.0;
        rho.a = {0.0, 0.3};
        rho.b = {0.0, 0.0};
        const BoundaryCurve c = make_from_curvature_fourier(rho);
        CHECK(c.length() == doctest::Approx(2 * pi).epsilon(1e-11));
        // endpoints join: position is periodic by construction; check
        // convexity data is positive everywhere
        for (double s : {0.0, 1.0, 3.0, 5.0}) CHECK(c.curvature_radius(s) > 0.0);
    }
    SUBCASE("first harmonic violates closure") {
        FourierSeries rho;
        rho.a0 = 1.0;
        rho.a = {0.5};
        rho.b = {0.0};
        CHECK_THROWS_AS(make_from_curvature_fourier(rho), ClosureViolationError);
    }
    SUBCASE("rho dipping below zero violates convexity") {
        FourierSeries rho;
        rho.a0 = 1.0;
        rho.a = {0.0, 1.4};
        rho.b = {0.0, 0.0};
        CHECK_THROWS_AS(make_from_curvature_fourier(rho), ConvexityError);
    }
}

TEST_CASE("csv export shape") {
    const BoundaryCurve c = make_ellipse(1.0, 1.0);
    std::ostringstream os;
    c.write_csv(os);
    const std::string out = os.str();
    CHECK(out.substr(0, 12) == "s,x,y,rho\n0,");
    CHECK(std::count(out.begin(), out.end(), '\n') == static_cast<long>(c.sample_count()) + 1);
}
