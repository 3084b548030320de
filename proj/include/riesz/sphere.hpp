#pragma once

#include <complex>
#include <optional>
#include <string>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace riesz::sphere {

using Point = Eigen::Vector3d;

/// Round sphere of radius 1/2 (area pi, the Fubini-Study CP^1) or radius 1.
class SphereConfig {
public:
    explicit SphereConfig(double radius = 0.5, bool normalized_measure = true);

    static SphereConfig half() { return SphereConfig(0.5); }
    static SphereConfig unit() { return SphereConfig(1.0); }

    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] double area() const;
    [[nodiscard]] bool normalized_measure() const { return normalized_; }

    bool operator==(const SphereConfig&) const = default;

private:
    double radius_;
    bool normalized_;
};

struct PointConfig {
    double radius = 0.5;
    std::vector<Point> points;

    [[nodiscard]] std::size_t count() const { return points.size(); }
    /// Largest relative deviation of |p| from the radius.
    [[nodiscard]] double max_radial_error() const;
};

double geodesic_distance(const Point& p, const Point& q, const SphereConfig& cfg);
double chordal_distance(const Point& p, const Point& q);

/// Inverse stereographic chart: 0 -> south pole, infinity (nullopt) -> north pole.
Point stereographic_to_sphere(std::optional<std::complex<double>> z, const SphereConfig& cfg);

/// Chart coordinate of a sphere point; nullopt for the north pole.
std::optional<std::complex<double>> sphere_to_stereographic(const Point& p,
                                                            const SphereConfig& cfg);

enum class PairCounting { ordered, unordered };

struct RieszGeodesic {
    double s;
};
struct LogGeodesic {};
struct LogChordal {};
/// -1/2 log r_g + robin_constant, with the constant making the kernel mean zero.
struct Green {
    double robin_constant;
};

using KernelVariant = std::variant<RieszGeodesic, LogGeodesic, LogChordal, Green>;

struct Kernel {
    KernelVariant variant;
    PairCounting counting = PairCounting::unordered;

    static Kernel riesz(double s, PairCounting c = PairCounting::unordered);
    static Kernel log_geodesic(PairCounting c = PairCounting::unordered);
    static Kernel log_chordal(PairCounting c = PairCounting::unordered);
    /// Green kernel with its Robin constant fixed numerically for `cfg`.
    static Kernel green(const SphereConfig& cfg, PairCounting c = PairCounting::unordered);

    [[nodiscard]] std::string name() const;
    [[nodiscard]] bool uses_chordal_distance() const;

    /// Kernel as a function of (geodesic, chordal) distance.
    [[nodiscard]] double at_distance(double geodesic, double chordal) const;
    /// d kernel / d distance, with the distance being chordal or geodesic per
    /// uses_chordal_distance().
    [[nodiscard]] double derivative(double distance) const;
};

/// Robin constant F_g = 1/2 * mean of log r_g over the normalized measure.
double robin_constant(const SphereConfig& cfg);

double kernel_value(const Kernel& kernel, const Point& p, const Point& q, const SphereConfig& cfg);

/// a_1 = double integral of the kernel against the normalized uniform measure.
double a1_sphere(const Kernel& kernel, const SphereConfig& cfg, double tol = 1e-12);

PointConfig uniform_points(std::size_t n, const SphereConfig& cfg, std::mt19937_64& rng);

/// Rotation matrix from an axis-angle pair; used for invariance checks.
Eigen::Matrix3d rotation(const Eigen::Vector3d& axis, double angle);
Eigen::Matrix3d random_rotation(std::mt19937_64& rng);
PointConfig rotate(const PointConfig& cfg, const Eigen::Matrix3d& rot);

}  // namespace riesz::sphere
