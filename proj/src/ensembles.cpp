#include "riesz/ensembles.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "riesz/errors.hpp"

namespace riesz::ensembles {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// p(z) / p'(z) together with the backward error of z as a root.
struct Evaluation {
    Complex newton;
    double backward;
};

Evaluation evaluate(std::span<const Complex> c, Complex z) {
    const std::size_t n = c.size() - 1;
    Complex p = 0.0;
    Complex dp = 0.0;
    double scale = 0.0;
    if (std::abs(z) <= 1.0) {
        const double az = std::abs(z);
        for (std::size_t k = n + 1; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
            scale = scale * az + std::abs(c[k]);
        }
        return {p / dp, std::abs(p) / scale};
    }
    // reversed chart: p(z) = z^n q(w), q(w) = sum_k c_{n-k} w^k, w = 1/z
    const Complex w = 1.0 / z;
    const double aw = std::abs(w);
    for (std::size_t k = 0; k <= n; ++k) {
        dp = dp * w + p;
        p = p * w + c[k];
        scale = scale * aw + std::abs(c[k]);
    }
    const Complex denom = static_cast<double>(n) * p - w * dp;
    return {z * p / denom, std::abs(p) / scale};
}

// Parlett-Reinsch balancing in radix 2; leaves the spectrum unchanged.
void balance(Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double col = 0.0;
            double row = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                col += std::abs(a(j, i));
                row += std::abs(a(i, j));
            }
            if (col == 0.0 || row == 0.0) continue;
            const double total = col + row;
            double f = 1.0;
            double g = row / 2.0;
            while (col < g) {
                f *= 2.0;
                col *= 4.0;
            }
            g = row * 2.0;
            while (col >= g) {
                f /= 2.0;
                col /= 4.0;
            }
            if ((col + row) / f < 0.95 * total) {
                converged = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

std::vector<Complex> companion_eigenvalues(std::span<const Complex> c) {
    const auto n = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(n)];
    }
    balance(comp);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success) return {};
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

// Initial guesses on circles whose radii come from the upper convex hull of
// (j, log|c_j|).
std::vector<Complex> newton_polygon_seeds(std::span<const Complex> c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<std::pair<int, double>> pts;
    for (int j = 0; j <= n; ++j) {
        const double a = std::abs(c[static_cast<std::size_t>(j)]);
        if (a > 0.0) pts.emplace_back(j, std::log(a));
    }
    std::vector<std::pair<int, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            const double cross = (a.first - o.first) * (p.second - o.second) -
                                 (a.second - o.second) * (p.first - o.first);
            if (cross < 0.0) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    std::vector<Complex> seeds;
    seeds.reserve(static_cast<std::size_t>(n));
    constexpr double offset = 0.7;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const int k = hull[e + 1].first - hull[e].first;
        const double modulus = std::exp((hull[e].second - hull[e + 1].second) / k);
        for (int i = 0; i < k; ++i) {
            const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) / k +
                                                           static_cast<double>(hull[e].first) / n) +
                                 offset;
            seeds.push_back(std::polar(modulus, angle));
        }
    }
    return seeds;
}

struct AberthOutcome {
    bool converged;
    int iterations;
    double worst;
};

AberthOutcome aberth(std::span<const Complex> c, std::vector<Complex>& z, int max_iterations,
                     double target) {
    const std::size_t n = z.size();
    std::vector<char> done(n, 0);
    int it = 0;
    for (; it < max_iterations; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const auto ev = evaluate(c, z[i]);
            if (ev.backward <= target || ev.newton == 0.0) {
                done[i] = 1;
                continue;
            }
            all_done = false;
            Complex repulsion = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            const Complex step = ev.newton / (1.0 - ev.newton * repulsion);
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[i] -= step;
        }
        if (all_done) break;
    }
    double worst = 0.0;
    for (const auto& root : z) worst = std::max(worst, evaluate(c, root).backward);
    return {worst <= target, it, worst};
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(stream_seed(master_seed, stream_index)) {}

Complex RngStream::complex_gaussian() {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const double re = gauss(engine_);
    const double im = gauss(engine_);
    return {re, im};
}

PolySample PolySample::from_coefficients(std::vector<Complex> coeffs) {
    PolySample p{static_cast<int>(coeffs.size()) - 1, std::move(coeffs)};
    p.validate();
    return p;
}

void PolySample::validate() const {
    if (degree < 1) throw InvalidArgument("polynomial degree must be at least 1");
    if (coeffs.size() != static_cast<std::size_t>(degree) + 1) {
        throw InvalidArgument("polynomial needs degree + 1 coefficients");
    }
    for (const auto& c : coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidArgument("polynomial coefficients must be finite");
        }
    }
}

PolySample sample_polynomial(int degree, RngStream& rng) {
    if (degree < 1) throw InvalidArgument("polynomial degree must be at least 1");
    PolySample p{degree, std::vector<Complex>(static_cast<std::size_t>(degree) + 1)};
    double log_binom = 0.0;  // log C(N, j)
    for (int j = 0; j <= degree; ++j) {
        if (j > 0) log_binom += std::log(static_cast<double>(degree - j + 1) / j);
        p.coeffs[static_cast<std::size_t>(j)] = rng.complex_gaussian() * std::exp(0.5 * log_binom);
    }
    return p;
}

double backward_error(std::span<const Complex> coeffs, Complex z) {
    if (coeffs.size() < 2) throw InvalidArgument("backward_error needs degree >= 1");
    return evaluate(coeffs, z).backward;
}

RootResult find_roots(const PolySample& poly, const RootOptions& opt) {
    poly.validate();
    double largest = 0.0;
    for (const auto& c : poly.coeffs) largest = std::max(largest, std::abs(c));
    if (!(largest >= DBL_MIN)) throw DegenerateSample("degenerate sample: all coefficients vanish");

    RootResult out;
    std::vector<Complex> c;
    c.reserve(poly.coeffs.size());
    for (const auto& x : poly.coeffs) c.push_back(x / largest);

    // leading coefficients are compared with the unitarily invariant norm
    // sqrt(sum_j |c_j|^2 / C(N, j)), each scaled by 1/sqrt(C(N, k))
    const int degree = poly.degree;
    std::vector<double> log_binom(c.size(), 0.0);
    for (int j = 1; j <= degree; ++j) {
        log_binom[static_cast<std::size_t>(j)] =
            log_binom[static_cast<std::size_t>(j) - 1] + std::log(static_cast<double>(degree - j + 1) / j);
    }
    double invariant_norm = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        invariant_norm += std::norm(c[j]) * std::exp(-log_binom[j]);
    }
    invariant_norm = std::sqrt(invariant_norm);
    auto negligible = [&](std::size_t k) {
        const double a = std::abs(c[k]);
        return a == 0.0 ||
               a * std::exp(-0.5 * log_binom[k]) < opt.infinity_threshold * invariant_norm;
    };
    while (c.size() > 1 && negligible(c.size() - 1)) {
        c.pop_back();
        ++out.roots_at_infinity;
    }
    std::size_t low = 0;
    while (low + 1 < c.size() && c[low] == 0.0) ++low;
    out.roots_at_zero = static_cast<int>(low);
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));

    const int n = static_cast<int>(c.size()) - 1;
    std::vector<Complex> z;
    if (n == 1) {
        z.push_back(-c[0] / c[1]);
    } else if (n > 1) {
        const double target = opt.backward_tolerance * kEps * (n + 1);
        AberthOutcome res{false, 0, 0.0};
        if (n <= opt.companion_limit) {
            z = companion_eigenvalues(c);
            out.companion_seeded = true;
        } else {
            z = newton_polygon_seeds(c);
        }
        if (z.size() == static_cast<std::size_t>(n)) {
            res = aberth(c, z, opt.max_iterations, target);
        }
        if (!res.converged && !out.companion_seeded) {
            z = companion_eigenvalues(c);
            out.companion_seeded = true;
            if (z.size() == static_cast<std::size_t>(n)) {
                res = aberth(c, z, opt.max_iterations, target);
            }
        }
        if (!res.converged) {
            throw RootFinderFailure("root-finder failure: backward error target not met",
                                    res.iterations, res.worst);
        }
        out.iterations = res.iterations;
        out.max_backward_error = res.worst;
    }

    out.roots.reserve(poly.coeffs.size() - 1);
    for (int i = 0; i < out.roots_at_zero; ++i) out.roots.emplace_back(Complex(0.0, 0.0));
    for (const auto& root : z) out.roots.emplace_back(root);
    for (int i = 0; i < out.roots_at_infinity; ++i) out.roots.emplace_back(std::nullopt);
    return out;
}

sphere::PointConfig zeros_of(const PolySample& poly, const sphere::SphereConfig& cfg,
                             const RootOptions& opt) {
    const auto roots = find_roots(poly, opt);
    sphere::PointConfig out{cfg.radius(), {}};
    out.points.reserve(roots.roots.size());
    for (const auto& r : roots.roots) out.points.push_back(sphere::stereographic_to_sphere(r, cfg));
    return out;
}

bool scaling_invariance_check(const PolySample& poly, Complex lambda, double tol) {
    if (lambda == 0.0) throw InvalidArgument("scaling factor must be nonzero");
    PolySample scaled = poly;
    for (auto& c : scaled.coeffs) c *= lambda;
    const sphere::SphereConfig unit = sphere::SphereConfig::unit();
    const auto a = zeros_of(poly, unit);
    auto b = zeros_of(scaled, unit).points;
    for (const auto& p : a.points) {
        auto best = std::min_element(b.begin(), b.end(), [&](const auto& l, const auto& r) {
            return (l - p).norm() < (r - p).norm();
        });
        if (best == b.end() || (*best - p).norm() > tol) return false;
        b.erase(best);
    }
    return b.empty();
}

double log_bergman_cpm(int degree, int m) {
    if (degree < 1 || m < 1) throw InvalidArgument("bergman_cpm needs N >= 1 and m >= 1");
    if (m > 100000) return std::lgamma(degree + m + 1.0) - std::lgamma(degree + 1.0);
    double acc = 0.0;
    for (int i = 1; i <= m; ++i) acc += std::log(static_cast<double>(degree) + i);
    return acc;
}

double bergman_cpm(int degree, int m) {
    if (degree < 1 || m < 1) throw InvalidArgument("bergman_cpm needs N >= 1 and m >= 1");
    double prod = 1.0;
    for (int i = 1; i <= m && std::isfinite(prod); ++i) prod *= static_cast<double>(degree) + i;
    if (!std::isfinite(prod)) {
        throw DomainError("bergman_cpm overflows double precision; use log_bergman_cpm");
    }
    return prod;
}

BargmannFockSample bargmann_fock_sample(int terms, double radius, RngStream& rng) {
    if (!(radius > 0.0)) throw InvalidArgument("Bargmann-Fock radius must be positive");
    if (terms < 2 || terms > 300) throw InvalidArgument("Bargmann-Fock terms must lie in [2, 300]");
    const double ratio = terms / (std::numbers::e * radius * radius);
    if (ratio <= 1.0) throw InvalidArgument("Bargmann-Fock truncation needs J > e R^2");
    BargmannFockSample out;
    out.radius = radius;
    out.truncation_bound = std::exp(-terms * std::log(ratio));
    out.coeffs.reserve(static_cast<std::size_t>(terms));
    for (int j = 0; j < terms; ++j) {
        out.coeffs.push_back(rng.complex_gaussian() * std::exp(-0.5 * std::lgamma(j + 1.0)));
    }
    return out;
}

std::vector<Complex> bargmann_fock_zeros(const BargmannFockSample& sample, const RootOptions& opt) {
    // roots in the rescaled variable u = z / R keep the coefficients balanced
    std::vector<Complex> c(sample.coeffs.size());
    double rp = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] = sample.coeffs[j] * rp;
        rp *= sample.radius;
    }
    RootOptions local = opt;
    local.infinity_threshold = 0.0;
    const auto roots = find_roots(PolySample::from_coefficients(std::move(c)), local);
    std::vector<Complex> out;
    for (const auto& r : roots.roots) {
        if (r && std::abs(*r) <= 1.0) out.push_back(*r * sample.radius);
    }
    return out;
}

}  // namespace riesz::ensembles
