#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "gen.hpp"
#include "riesz/errors.hpp"
#include "riesz/sphere.hpp"

using namespace riesz;
using sphere::Point;
using sphere::SphereConfig;

namespace {

constexpr double pi = std::numbers::pi;

Point north(const SphereConfig& c) { return {0.0, 0.0, c.radius()}; }
Point south(const SphereConfig& c) { return {0.0, 0.0, -c.radius()}; }

// p-value of a chi-square goodness-of-fit test against equal expected counts
double chi_square_p(const std::vector<double>& counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_SUITE("sphere_geometry") {

TEST_CASE("configuration conventions") {
    CHECK(SphereConfig::half().area() == doctest::Approx(pi));
    CHECK(SphereConfig::unit().area() == doctest::Approx(4.0 * pi));
    CHECK_THROWS_AS(SphereConfig(0.7), InvalidArgument);
}

TEST_CASE("distance examples") {
    const auto h = SphereConfig::half();
    const auto u = SphereConfig::unit();
    CHECK(sphere::geodesic_distance(north(h), south(h), h) == doctest::Approx(pi / 2.0));
    CHECK(sphere::geodesic_distance(north(h), north(h), h) == 0.0);
    CHECK(sphere::geodesic_distance(Point(1, 0, 0), Point(0, 1, 0), u) == doctest::Approx(pi / 2.0));
    CHECK(sphere::chordal_distance(north(h), south(h)) == doctest::Approx(1.0));
    CHECK(sphere::chordal_distance(north(u), south(u)) == doctest::Approx(2.0));
}

TEST_CASE("property: chordal and geodesic distances are related") {
    for (double radius : {0.5, 1.0}) {
        const SphereConfig cfg(radius);
        gen::Gen g(31 + static_cast<std::uint64_t>(radius * 10));
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const Point p = g.point(cfg);
            const Point q = g.point(cfg);
            const double geo = sphere::geodesic_distance(p, q, cfg);
            const double want = 2.0 * radius * std::sin(geo / (2.0 * radius));
            worst = std::max(worst, std::abs(sphere::chordal_distance(p, q) - want));
        }
        CAPTURE(radius);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("geodesic distance is accurate for nearly coincident points") {
    const auto cfg = SphereConfig::unit();
    const Point p(1.0, 0.0, 0.0);
    for (double angle : {1e-4, 1e-8, 1e-12}) {
        const Point q(std::cos(angle), std::sin(angle), 0.0);
        CHECK(sphere::geodesic_distance(p, q, cfg) == doctest::Approx(angle).epsilon(1e-10));
    }
}

TEST_CASE("stereographic chart") {
    const auto h = SphereConfig::half();
    CHECK((sphere::stereographic_to_sphere(std::complex<double>(0.0), h) - south(h)).norm() < 1e-15);
    CHECK((sphere::stereographic_to_sphere(std::nullopt, h) - north(h)).norm() < 1e-15);
    const Point eq = sphere::stereographic_to_sphere(std::polar(1.0, 0.3), h);
    CHECK(std::abs(eq.z()) < 1e-15);
    CHECK(eq.norm() == doctest::Approx(0.5));
    CHECK_FALSE(sphere::sphere_to_stereographic(north(h), h).has_value());
}

TEST_CASE("property: chart round trip") {
    gen::for_all(2000, 32, [](gen::Gen& g) {
        const auto cfg = g.sphere();
        const std::complex<double> z = std::polar(g.log_uniform(1e-6, 1e6), g.uniform(0.0, 2 * pi));
        const Point p = sphere::stereographic_to_sphere(z, cfg);
        CHECK(std::abs(p.norm() - cfg.radius()) <= 1e-12 * cfg.radius());
        const auto back = sphere::sphere_to_stereographic(p, cfg);
        REQUIRE(back.has_value());
        CHECK(std::abs(*back - z) <= 1e-12 * std::abs(z));
    });
}

TEST_CASE("chart pushes the Fubini-Study measure to the uniform measure") {
    // |z|^2 = u / (1 - u) with u uniform has density 1 / (pi (1 + |z|^2)^2)
    const auto cfg = SphereConfig::half();
    gen::Gen g(33);
    std::vector<double> bands(20, 0.0);
    for (int i = 0; i < 1000000; ++i) {
        const double u = g.uniform(0.0, 1.0);
        const std::complex<double> z = std::polar(std::sqrt(u / (1.0 - u)), g.uniform(0.0, 2 * pi));
        const double h = sphere::stereographic_to_sphere(z, cfg).z() / cfg.radius();
        // equal-area bands in height
        const int band = std::min(19, static_cast<int>((h + 1.0) / 2.0 * 20.0));
        bands[band] += 1.0;
    }
    CHECK(chi_square_p(bands) > 0.01);
}

TEST_CASE("kernel examples") {
    const auto h = SphereConfig::half();
    CHECK(sphere::kernel_value(sphere::Kernel::log_chordal(), north(h), south(h), h) ==
          doctest::Approx(0.0));
    CHECK(sphere::kernel_value(sphere::Kernel::riesz(1.0), north(h), south(h), h) ==
          doctest::Approx(2.0 / pi));
    CHECK(sphere::kernel_value(sphere::Kernel::log_geodesic(), north(h), south(h), h) ==
          doctest::Approx(-std::log(pi / 2.0)));
    CHECK_THROWS_AS(sphere::kernel_value(sphere::Kernel::log_chordal(), north(h), north(h), h),
                    DomainError);
    CHECK_THROWS_AS(sphere::Kernel::riesz(0.0), InvalidArgument);
}

TEST_CASE("Robin constant from an independent quadrature") {
    for (double radius : {0.5, 1.0}) {
        const SphereConfig cfg(radius);
        boost::math::quadrature::tanh_sinh<double> ts;
        const double mean_log =
            ts.integrate([&](double t) { return std::log(radius * t) * std::sin(t) / 2.0; }, 0.0, pi);
        CAPTURE(radius);
        CHECK(sphere::robin_constant(cfg) == doctest::Approx(0.5 * mean_log).epsilon(1e-11));
        const auto green = sphere::Kernel::green(cfg);
        // mean zero in the second argument: 1D quadrature over the polar angle; the
        // Kronrod rule never samples the singular endpoint t = 0
        const double mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) {
                const Point p(radius * std::sin(t), 0.0, radius * std::cos(t));
                return sphere::kernel_value(green, north(cfg), p, cfg) * std::sin(t) / 2.0;
            },
            0.0, pi, 30, 1e-13);
        CHECK(std::abs(mean) <= 1e-8);
    }
}

TEST_CASE("leading coefficient a_1") {
    const auto h = SphereConfig::half();
    const auto u = SphereConfig::unit();
    CHECK(std::abs(sphere::a1_sphere(sphere::Kernel::log_chordal(), h) - 0.5) <= 1e-9);
    CHECK(std::abs(sphere::a1_sphere(sphere::Kernel::log_chordal(), u) - (0.5 - std::log(2.0))) <=
          1e-9);
    CHECK(std::abs(sphere::a1_sphere(sphere::Kernel::green(h), h)) <= 1e-8);
    CHECK(std::abs(sphere::a1_sphere(sphere::Kernel::green(u), u)) <= 1e-8);
    // Riesz s = 1 at radius 1: int_0^pi (t)^{-1} sin(t)/2 dt = Si(pi)/2
    CHECK(sphere::a1_sphere(sphere::Kernel::riesz(1.0), u) ==
          doctest::Approx(1.8519370519824662 / 2.0).epsilon(1e-10));
    CHECK_THROWS_AS(sphere::a1_sphere(sphere::Kernel::riesz(2.5), h), DomainError);
}

TEST_CASE("uniform points") {
    gen::Gen g(34);
    CHECK(sphere::uniform_points(0, SphereConfig::half(), g.engine()).count() == 0);
    const auto cfg = SphereConfig::unit();
    const auto pts = sphere::uniform_points(1000000, cfg, g.engine());
    CHECK(pts.max_radial_error() <= 1e-12);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& p : pts.points) mean += p;
    mean /= static_cast<double>(pts.count());
    const double sigma = 1.0 / std::sqrt(3.0 * static_cast<double>(pts.count()));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(mean[k]) <= 3.0 * sigma);
}

TEST_CASE("property: rotations preserve distances") {
    gen::for_all(200, 35, [](gen::Gen& g) {
        const auto cfg = g.sphere();
        const auto pts = g.points(2, cfg);
        const auto rot = sphere::random_rotation(g.engine());
        CHECK((rot * rot.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-13);
        CHECK(rot.determinant() == doctest::Approx(1.0));
        const auto moved = sphere::rotate(pts, rot);
        CHECK(sphere::geodesic_distance(moved.points[0], moved.points[1], cfg) ==
              doctest::Approx(sphere::geodesic_distance(pts.points[0], pts.points[1], cfg)));
    });
}

}  // TEST_SUITE
