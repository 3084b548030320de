#include "riesz/sphere.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"

namespace riesz::sphere {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double angle_between(const Point& p, const Point& q) {
    return std::atan2(p.cross(q).norm(), p.dot(q));
}

}  // namespace

SphereConfig::SphereConfig(double radius, bool normalized_measure)
    : radius_(radius), normalized_(normalized_measure) {
    if (radius != 0.5 && radius != 1.0) {
        throw InvalidArgument("sphere radius must be 1/2 or 1");
    }
}

double SphereConfig::area() const { return 4.0 * std::numbers::pi * radius_ * radius_; }

double PointConfig::max_radial_error() const {
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, std::abs(p.norm() - radius) / radius);
    return worst;
}

double geodesic_distance(const Point& p, const Point& q, const SphereConfig& cfg) {
    return cfg.radius() * angle_between(p, q);
}

double chordal_distance(const Point& p, const Point& q) { return (p - q).norm(); }

Point stereographic_to_sphere(std::optional<std::complex<double>> z, const SphereConfig& cfg) {
    if (!z) return Point(0.0, 0.0, cfg.radius());
    const double mod2 = std::norm(*z);
    Point u;
    if (mod2 <= 1.0) {
        const double d = 1.0 + mod2;
        u = Point(2.0 * z->real() / d, 2.0 * z->imag() / d, (mod2 - 1.0) / d);
    } else {
        const std::complex<double> w = 1.0 / *z;
        const double w2 = std::norm(w);
        const double d = 1.0 + w2;
        u = Point(2.0 * w.real() / d, -2.0 * w.imag() / d, (1.0 - w2) / d);
    }
    return cfg.radius() * u;
}

std::optional<std::complex<double>> sphere_to_stereographic(const Point& p,
                                                            const SphereConfig& cfg) {
    const Point u = p / cfg.radius();
    const double planar2 = u.x() * u.x() + u.y() * u.y();
    if (u.z() <= 0.0) return std::complex<double>(u.x(), u.y()) / (1.0 - u.z());
    if (planar2 == 0.0) return std::nullopt;
    return std::complex<double>(u.x(), u.y()) * (1.0 + u.z()) / planar2;
}

Kernel Kernel::riesz(double s, PairCounting c) {
    if (!(s > 0.0)) throw InvalidArgument("Riesz exponent must be positive");
    return {RieszGeodesic{s}, c};
}
Kernel Kernel::log_geodesic(PairCounting c) { return {LogGeodesic{}, c}; }
Kernel Kernel::log_chordal(PairCounting c) { return {LogChordal{}, c}; }
Kernel Kernel::green(const SphereConfig& cfg, PairCounting c) {
    return {Green{robin_constant(cfg)}, c};
}

std::string Kernel::name() const {
    return std::visit(Overloaded{[](const RieszGeodesic&) { return std::string("riesz"); },
                                 [](const LogGeodesic&) { return std::string("log-geodesic"); },
                                 [](const LogChordal&) { return std::string("log-chordal"); },
                                 [](const Green&) { return std::string("green"); }},
                      variant);
}

bool Kernel::uses_chordal_distance() const { return std::holds_alternative<LogChordal>(variant); }

double Kernel::at_distance(double geodesic, double chordal) const {
    return std::visit(
        Overloaded{[&](const RieszGeodesic& k) { return std::pow(geodesic, -k.s); },
                   [&](const LogGeodesic&) { return -std::log(geodesic); },
                   [&](const LogChordal&) { return -std::log(chordal); },
                   [&](const Green& k) { return -0.5 * std::log(geodesic) + k.robin_constant; }},
        variant);
}

double Kernel::derivative(double d) const {
    return std::visit(
        Overloaded{[&](const RieszGeodesic& k) { return -k.s * std::pow(d, -k.s - 1.0); },
                   [&](const LogGeodesic&) { return -1.0 / d; },
                   [&](const LogChordal&) { return -1.0 / d; },
                   [&](const Green&) { return -0.5 / d; }},
        variant);
}

double robin_constant(const SphereConfig& cfg) {
    const double radius = cfg.radius();
    quad::Options opt;
    opt.abs_tol = 1e-14;
    const auto mean_log = quad::integrate(
        [&](double t) { return std::log(radius * t) * std::sin(t) * 0.5; }, 0.0, std::numbers::pi,
        opt);
    return 0.5 * mean_log.value;
}

double kernel_value(const Kernel& kernel, const Point& p, const Point& q, const SphereConfig& cfg) {
    const double chord = chordal_distance(p, q);
    if (chord == 0.0) throw DomainError("diagonal singularity: kernel evaluated at p = q");
    return kernel.at_distance(geodesic_distance(p, q, cfg), chord);
}

double a1_sphere(const Kernel& kernel, const SphereConfig& cfg, double tol) {
    const double radius = cfg.radius();
    auto density = [&](double t) {
        return kernel.at_distance(radius * t, 2.0 * radius * std::sin(0.5 * t)) * std::sin(t) * 0.5;
    };
    quad::Options opt;
    opt.abs_tol = tol;
    opt.max_subdivisions = 5000;

    if (const auto* riesz = std::get_if<RieszGeodesic>(&kernel.variant)) {
        const double s = riesz->s;
        if (s >= 2.0) throw DomainError("Riesz kernel with s >= 2 is not integrable on the sphere");
        // [0, split]: sin t expanded termwise against t^{-s}
        const double split = 0.5;
        double head = 0.0;
        double term_factor = 1.0;  // 1/(2k+1)!
        for (int k = 0; k < 12; ++k) {
            if (k > 0) term_factor /= (2.0 * k) * (2.0 * k + 1.0);
            const double e = 2.0 * k + 2.0 - s;
            head += (k % 2 == 0 ? 1.0 : -1.0) * term_factor * std::pow(split, e) / e;
        }
        head *= 0.5 * std::pow(radius, -s);
        return head + quad::integrate(density, split, std::numbers::pi, opt).value;
    }
    return quad::integrate(density, 0.0, std::numbers::pi, opt).value;
}

PointConfig uniform_points(std::size_t n, const SphereConfig& cfg, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    PointConfig out{cfg.radius(), {}};
    out.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point g;
        do {
            g = Point(gauss(rng), gauss(rng), gauss(rng));
        } while (g.squaredNorm() == 0.0);
        out.points.push_back(cfg.radius() * g.normalized());
    }
    return out;
}

Eigen::Matrix3d rotation(const Eigen::Vector3d& axis, double angle) {
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    q.normalize();
    return q.toRotationMatrix();
}

PointConfig rotate(const PointConfig& cfg, const Eigen::Matrix3d& rot) {
    PointConfig out{cfg.radius, {}};
    out.points.reserve(cfg.points.size());
    for (const auto& p : cfg.points) out.points.push_back(rot * p);
    return out;
}

}  // namespace riesz::sphere
