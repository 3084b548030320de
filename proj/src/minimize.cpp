#include "riesz/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "riesz/energy_mc.hpp"
#include "riesz/ensembles.hpp"
#include "riesz/errors.hpp"
#include "riesz/parallel.hpp"

namespace riesz::minimize {
namespace {

using Tangent = std::vector<Eigen::Vector3d>;

double dot(const Tangent& a, const Tangent& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].dot(b[i]);
    return acc;
}

void axpy(double alpha, const Tangent& x, Tangent& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Orthogonal projection onto the tangent planes at `at`.
void project(const std::vector<sphere::Point>& at, Tangent& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Eigen::Vector3d u = at[i].normalized();
        v[i] -= v[i].dot(u) * u;
    }
}

sphere::PointConfig retract(const sphere::PointConfig& x, const Tangent& step) {
    sphere::PointConfig out{x.radius, x.points};
    for (std::size_t i = 0; i < step.size(); ++i) {
        out.points[i] = x.radius * (x.points[i] + step[i]).normalized();
    }
    return out;
}

double max_displacement(const Tangent& d) {
    double worst = 0.0;
    for (const auto& v : d) worst = std::max(worst, v.norm());
    return worst;
}

struct CurvaturePair {
    Tangent s;
    Tangent y;
    double rho;
};

bool is_log_chordal(const sphere::Kernel& k) {
    return std::holds_alternative<sphere::LogChordal>(k.variant);
}

}  // namespace

void OptimizerConfig::validate() const {
    if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
    if (gradient_tolerance < 0.0) throw InvalidArgument("gradient_tolerance must be nonnegative");
    if (memory < 1) throw InvalidArgument("memory must be at least 1");
    if (!(armijo > 0.0 && armijo < 0.5)) throw InvalidArgument("armijo must lie in (0, 1/2)");
    if (!(max_step > 0.0 && max_step <= 1.0)) throw InvalidArgument("max_step must lie in (0, 1]");
}

double OptimizerConfig::tolerance_for(std::size_t n) const {
    return gradient_tolerance > 0.0 ? gradient_tolerance : 1e-8 * static_cast<double>(n);
}

std::vector<Eigen::Vector3d> energy_gradient(const sphere::PointConfig& config,
                                             const sphere::Kernel& kernel) {
    const auto& pts = config.points;
    const std::size_t n = pts.size();
    Tangent g(n, Eigen::Vector3d::Zero());
    std::vector<Eigen::Vector3d> unit(n);
    for (std::size_t i = 0; i < n; ++i) unit[i] = pts[i].normalized();
    const bool chordal = kernel.uses_chordal_distance();
    const double radius = config.radius;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Eigen::Vector3d diff = pts[i] - pts[j];
            const double chord = diff.norm();
            if (chord == 0.0) throw InfiniteEnergy(i, j);
            if (chordal) {
                const Eigen::Vector3d dir = diff / chord;
                const double dk = kernel.derivative(chord);
                g[i] += dk * dir;
                g[j] -= dk * dir;
                continue;
            }
            const double sin_angle = unit[i].cross(unit[j]).norm();
            if (sin_angle == 0.0) continue;  // antipodal: geodesic distance is maximal
            const double cos_angle = unit[i].dot(unit[j]);
            const double angle = std::atan2(sin_angle, cos_angle);
            const double dk = kernel.derivative(radius * angle);
            // d(r_g)/d p_i = -(u_j - cos u_i) / sin, already tangent at u_i
            g[i] -= dk * (unit[j] - cos_angle * unit[i]) / sin_angle;
            g[j] -= dk * (unit[i] - cos_angle * unit[j]) / sin_angle;
        }
    }
    project(pts, g);
    if (kernel.counting == sphere::PairCounting::ordered) {
        for (auto& v : g) v *= 2.0;
    }
    return g;
}

double gradient_norm(const std::vector<Eigen::Vector3d>& gradient) {
    return std::sqrt(dot(gradient, gradient));
}

sphere::PointConfig spiral_points(std::size_t n, const sphere::SphereConfig& cfg) {
    sphere::PointConfig out{cfg.radius(), {}};
    out.points.reserve(n);
    if (n == 1) out.points.emplace_back(0.0, 0.0, -cfg.radius());
    double phi = 0.0;
    for (std::size_t k = 0; k < n && n > 1; ++k) {
        const double h = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n - 1);
        const double planar = std::sqrt(std::max(0.0, 1.0 - h * h));
        if (k == 0 || k + 1 == n) {
            phi = 0.0;
        } else {
            phi = std::fmod(phi + 3.6 / std::sqrt(static_cast<double>(n)) / planar,
                            2.0 * std::numbers::pi);
        }
        out.points.push_back(cfg.radius() *
                             sphere::Point(planar * std::cos(phi), planar * std::sin(phi), h));
    }
    return out;
}

MinimizeResult minimize_from(sphere::PointConfig start, const sphere::Kernel& kernel,
                             const OptimizerConfig& opt) {
    opt.validate();
    const std::size_t n = start.points.size();
    if (n < 2) throw InvalidArgument("minimization needs at least two points");
    for (auto& p : start.points) p = start.radius * p.normalized();
    const double tol = opt.tolerance_for(n);
    const double step_cap = opt.max_step * start.radius;

    MinimizeResult res;
    res.kernel = kernel;
    res.config = std::move(start);
    auto current = energy::energy_sum(res.config, kernel);
    res.energy = current.value;
    if (opt.record_trace) res.energy_trace.push_back(res.energy);
    Tangent g = energy_gradient(res.config, kernel);
    res.gradient_norm = gradient_norm(g);

    std::deque<CurvaturePair> memory;
    while (res.iterations < opt.max_iterations && res.gradient_norm > tol) {
        // two-loop recursion
        Tangent d = g;
        std::vector<double> alpha(memory.size());
        for (std::size_t k = memory.size(); k-- > 0;) {
            alpha[k] = memory[k].rho * dot(memory[k].s, d);
            axpy(-alpha[k], memory[k].y, d);
        }
        if (!memory.empty()) {
            const auto& last = memory.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (auto& v : d) v *= gamma;
        } else {
            const double scale = 0.1 * step_cap / std::max(max_displacement(g), 1e-300);
            for (auto& v : d) v *= scale;
        }
        for (std::size_t k = 0; k < memory.size(); ++k) {
            const double beta = memory[k].rho * dot(memory[k].y, d);
            axpy(alpha[k] - beta, memory[k].s, d);
        }
        for (auto& v : d) v = -v;
        project(res.config.points, d);
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            memory.clear();
            d = g;
            for (auto& v : d) v *= -0.1 * step_cap / std::max(max_displacement(g), 1e-300);
            slope = dot(g, d);
        }
        const double longest = max_displacement(d);
        if (longest > step_cap) {
            for (auto& v : d) v *= step_cap / longest;
            slope *= step_cap / longest;
        }

        const double roundoff = 16.0 * std::numeric_limits<double>::epsilon() * current.magnitude;
        double t = 1.0;
        bool accepted = false;
        sphere::PointConfig trial;
        energy::EnergySum trial_energy{};
        Tangent g_new;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            Tangent step = d;
            for (auto& v : step) v *= t;
            trial = retract(res.config, step);
            try {
                trial_energy = energy::energy_sum(trial, kernel);
            } catch (const InfiniteEnergy&) {
                continue;
            }
            if (trial_energy.value <= res.energy + opt.armijo * t * slope &&
                trial_energy.value < res.energy) {
                g_new = energy_gradient(trial, kernel);
                accepted = true;
                break;
            }
            if (std::abs(trial_energy.value - res.energy) <= roundoff) {
                g_new = energy_gradient(trial, kernel);
                if (gradient_norm(g_new) < res.gradient_norm) {
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) break;  // no representable progress along d

        // transport the previous step and gradient by projection
        Tangent s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = trial.points[i] - res.config.points[i];
        project(trial.points, s);
        Tangent g_old = g;
        project(trial.points, g_old);
        Tangent y = g_new;
        axpy(-1.0, g_old, y);
        for (auto& pair : memory) {
            project(trial.points, pair.s);
            project(trial.points, pair.y);
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            memory.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (memory.size() > static_cast<std::size_t>(opt.memory)) memory.pop_front();
        }

        res.config = std::move(trial);
        current = trial_energy;
        res.energy = current.value;
        if (opt.record_trace) res.energy_trace.push_back(res.energy);
        g = std::move(g_new);
        res.gradient_norm = gradient_norm(g);
        ++res.iterations;
    }
    res.converged = res.gradient_norm <= tol;
    return res;
}

MinimizeResult minimize_energy(int n, const sphere::Kernel& kernel, const OptimizerConfig& opt,
                               std::uint64_t seed, const sphere::SphereConfig& cfg) {
    opt.validate();
    if (n < 2) throw InvalidArgument("minimization needs n >= 2");
    const auto count = static_cast<std::size_t>(n);

    std::vector<sphere::PointConfig> starts;
    if (opt.initial == Initial::spiral) {
        starts.push_back(spiral_points(count, cfg));
    } else {
        for (int r = 0; r < opt.restarts; ++r) {
            ensembles::RngStream rng(seed, static_cast<std::uint64_t>(r));
            if (opt.initial == Initial::random_uniform) {
                starts.push_back(sphere::uniform_points(count, cfg, rng.engine()));
            } else {
                starts.push_back(
                    ensembles::zeros_of(ensembles::sample_polynomial(n, rng), cfg));
            }
        }
        if (opt.spiral_restart) starts.push_back(spiral_points(count, cfg));
    }

    std::vector<MinimizeResult> results(starts.size());
    parallel_for(starts.size(), opt.threads, [&](std::size_t r) {
        results[r] = minimize_from(starts[r], kernel, opt);
        results[r].restart_index = static_cast<int>(r);
    });
    auto best = std::min_element(results.begin(), results.end(), [](const auto& l, const auto& r) {
        return l.energy < r.energy;
    });
    return *best;
}

double c_n_extract(const MinimizeResult& result) {
    if (!is_log_chordal(result.kernel) ||
        result.kernel.counting != sphere::PairCounting::unordered) {
        throw InvalidArgument("C_N extraction needs the log-chordal kernel with unordered pairs");
    }
    if (result.config.radius != 1.0) throw InvalidArgument("C_N extraction needs radius 1");
    return energy::c_n_from_energy(static_cast<double>(result.config.count()), result.energy);
}

}  // namespace riesz::minimize
