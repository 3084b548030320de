#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Geometry>

#include "riesz/sphere.hpp"

namespace riesz::minimize {

enum class Initial { random_uniform, spiral, from_zeros };

struct OptimizerConfig {
    /// Starts drawn from `initial`; a generalized-spiral start is appended when spiral_restart is set.
    int restarts = 8;
    bool spiral_restart = true;
    Initial initial = Initial::random_uniform;
    int max_iterations = 5000;
    /// 0 selects 1e-8 * n.
    double gradient_tolerance = 0.0;
    /// Number of stored curvature pairs.
    int memory = 10;
    /// Sufficient-decrease constant of the backtracking search.
    double armijo = 1e-4;
    /// Largest displacement of any single point per step, in units of the radius.
    double max_step = 0.2;
    unsigned threads = 1;
    /// Keep the energy after every accepted step in MinimizeResult::energy_trace.
    bool record_trace = false;

    void validate() const;
    [[nodiscard]] double tolerance_for(std::size_t n) const;
};

struct MinimizeResult {
    sphere::PointConfig config;
    sphere::Kernel kernel;
    double energy = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    int restart_index = 0;
    bool converged = false;
    std::vector<double> energy_trace;
};

/// Riemannian gradient: the ambient gradient of each point projected onto its
/// tangent plane. Antipodal pairs contribute nothing under geodesic kernels.
std::vector<Eigen::Vector3d> energy_gradient(const sphere::PointConfig& config,
                                             const sphere::Kernel& kernel);

/// Euclidean norm of the stacked tangent gradient.
double gradient_norm(const std::vector<Eigen::Vector3d>& gradient);

/// Generalized spiral configuration: heights evenly spaced, longitudes advanced
/// by 3.6 / sqrt(n (1 - h^2)).
sphere::PointConfig spiral_points(std::size_t n, const sphere::SphereConfig& cfg);

/// Limited-memory quasi-Newton descent from a given start. A step is accepted on
/// sufficient decrease, or, once energy differences are at rounding level
/// (16 eps times the summed |kernel|), on a decrease of the gradient norm.
MinimizeResult minimize_from(sphere::PointConfig start, const sphere::Kernel& kernel,
                             const OptimizerConfig& opt);

/// Best local minimum over the configured restarts; restart r draws its start
/// from RngStream(seed, r).
MinimizeResult minimize_energy(int n, const sphere::Kernel& kernel, const OptimizerConfig& opt,
                               std::uint64_t seed,
                               const sphere::SphereConfig& cfg = sphere::SphereConfig::half());

/// C_N of the minimized configuration; requires the log-chordal kernel, unordered
/// pairs and radius 1.
double c_n_extract(const MinimizeResult& result);

}  // namespace riesz::minimize
