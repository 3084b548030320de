#include "riesz/riesz_coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "riesz/kappa.hpp"
#include "riesz/quadrature.hpp"

namespace riesz::coeffs {
namespace {

constexpr double kMinTruncation = 6.0;
constexpr double kMaxTruncation = 40.0;

// int_R^inf r^p e^{-r^2} dr
double gaussian_moment_tail(double p, double radius) {
    return 0.5 * boost::math::tgamma(0.5 * (p + 1.0), radius * radius);
}

// int_0^a r^p dr, or int_0^a r^p log r dr
double power_integral(double p, double a, bool log_weight) {
    const double e = p + 1.0;
    const double base = std::pow(a, e) / e;
    return log_weight ? base * (std::log(a) - 1.0 / e) : base;
}

struct Weight {
    int m;
    double s;
    bool log_weight;

    [[nodiscard]] double power() const { return 2.0 * m - 1.0 - s; }
    [[nodiscard]] double tail_power() const { return 2.0 * m + 3.0 - s + (log_weight ? 1.0 : 0.0); }
};

QuadResult weighted_integral(const Weight& w, double tol, double split_radius,
                             double requested_radius) {
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (!(split_radius > 0.0 && split_radius <= 1.0)) {
        throw InvalidArgument("split_radius must lie in (0, 1]");
    }
    const int m = w.m;
    const double scale = 2.0 * m;

    // [0, split]: termwise integration of r^{2m-1-s} (r^{4-2m} sum q_n r^{2n} - 1)
    kappa::EvalPolicy policy;
    const auto q = kappa::series_coefficients(m);
    double series_part = 0.0;
    double last_term = 0.0;
    for (int n = 0; n < policy.series_order; ++n) {
        last_term = q[static_cast<std::size_t>(n)] *
                    power_integral(2.0 * n + 3.0 - w.s, split_radius, w.log_weight);
        series_part += last_term;
    }
    series_part -= power_integral(w.power(), split_radius, w.log_weight);
    const double series_error = std::abs(last_term) + 1e-15 * std::abs(series_part);

    // truncation radius and tail bound
    const double k_tail = kappa::tail_constant(m);
    auto tail_at = [&](double radius) {
        return scale * k_tail * gaussian_moment_tail(w.tail_power(), radius);
    };
    double radius = requested_radius;
    if (radius <= 0.0) {
        radius = kMinTruncation;
        while (tail_at(radius) >= tol / 10.0 && radius < kMaxTruncation) radius += 0.5;
    } else if (radius < 5.0) {
        throw InvalidArgument("truncation_radius must be at least 5 for the tail bound to apply");
    }
    const double tail = tail_at(radius);

    // [split, R]: adaptive Gauss-Kronrod
    auto integrand = [&](double r) {
        const double base = kappa::kappa_minus_one(m, r) * std::pow(r, w.power());
        return w.log_weight ? base * std::log(r) : base;
    };
    quad::Options opt;
    opt.abs_tol = std::max(0.0, (tol - tail) / scale * 0.5);
    opt.max_subdivisions = 4000;
    const auto body = quad::integrate(integrand, split_radius, radius, opt);

    QuadResult out;
    out.value = scale * (series_part + body.value);
    out.error_estimate = scale * (body.error_estimate + series_error);
    out.tail_bound = tail;
    out.subdivisions = body.subdivisions;
    out.truncation_radius = radius;
    if (out.error_estimate + out.tail_bound > tol) {
        throw PrecisionFailure("precision failure: requested tolerance " + std::to_string(tol) +
                                   " not reached (error " +
                                   std::to_string(out.error_estimate + out.tail_bound) + ")",
                               out);
    }
    return out;
}

void check_m(int m) {
    if (m < 1 || m > kappa::kMaxDimension) throw InvalidArgument("dimension m out of range");
}

}  // namespace

QuadResult c_m_s(const CoeffRequest& req) {
    check_m(req.m);
    if (req.s == 0.0) return c_m_log(req.m, req.tol);
    const double upper = std::min(2.0 * req.m, 4.0);
    if (!(req.s > 0.0 && req.s < upper)) {
        throw DomainError("divergent integral: s must lie in (0, " + std::to_string(upper) + ")");
    }
    return weighted_integral({req.m, req.s, false}, req.tol, req.split_radius,
                             req.truncation_radius);
}

QuadResult c_m_log(int m, double tol) {
    check_m(m);
    return weighted_integral({m, 0.0, true}, tol, 0.35, 0.0);
}

QuadResult normalization_identity(int m, double tol) {
    check_m(m);
    return weighted_integral({m, 0.0, false}, tol, 0.35, 0.0);
}

double residue_at_4(int m) {
    check_m(m);
    if (m == 1) throw DomainError("pole at s = 2, not s = 4");
    if (m == 2) return -1.0;
    return 2.0 * m * (m + 1) / 4.0;
}

std::vector<ScanPoint> c_m_scan(int m, double s_min, double s_max, int points, double tol) {
    if (points < 1) throw InvalidArgument("scan needs at least one point");
    if (!(s_max >= s_min)) throw InvalidArgument("scan needs s_min <= s_max");
    std::vector<ScanPoint> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double s = points == 1 ? s_min : s_min + (s_max - s_min) * i / (points - 1);
        out.push_back({s, c_m_s({m, s, tol}).value});
    }
    return out;
}

std::vector<SignChange> sign_changes(int m, double tol) {
    std::vector<double> grid;
    for (int i = 1; i <= 15; ++i) grid.push_back(0.25 * i);
    grid.push_back(3.9);
    grid.push_back(3.99);
    const double upper = std::min(2.0 * m, 4.0);
    std::erase_if(grid, [&](double s) { return s >= upper; });

    std::vector<SignChange> out;
    // anchor: c_m(s) -> -1 as s -> 0+ (the normalization identity)
    double prev_s = 0.0;
    double prev_c = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c = c_m_s({m, grid[i], tol}).value;
        if ((prev_c < 0.0) != (c < 0.0)) out.push_back({prev_s, grid[i]});
        prev_s = grid[i];
        prev_c = c;
    }
    return out;
}

double s_star(int m, double tol) {
    if (m < 3) throw InvalidArgument("s_star is defined for m >= 3");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const double quad_tol = 1e-10;
    const auto brackets = sign_changes(m, quad_tol);
    if (brackets.empty()) throw DomainError("no crossing of c_m(s) found in (0, 4)");

    double lo = brackets.front().lower;
    double hi = brackets.front().upper;
    const bool rising = lo == 0.0 || c_m_s({m, lo, quad_tol}).value < 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const bool negative = c_m_s({m, mid, quad_tol}).value < 0.0;
        if (negative == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

QuadResult d_m_k_s(int m, int k, double s, const KappaFunction& kappa_km, double decay_constant,
                   double tol) {
    check_m(m);
    if (k < 1 || k >= m) throw InvalidArgument("d_m(k, s) needs 1 <= k < m");
    if (!(s > 0.0 && s < 2.0 * (m - k))) throw DomainError("divergent integral: need 0 < s < 2(m-k)");
    if (!kappa_km) throw InvalidArgument("kappa_km evaluator missing");

    const double prefactor =
        std::pow(std::pow(std::numbers::pi, m - k) / boost::math::factorial<double>(m - k), 2);
    const double scale = prefactor * 2.0 * m;
    const double power = 2.0 * m - 1.0 - s;

    double radius = kMinTruncation;
    auto tail_at = [&](double r) {
        return scale * decay_constant * gaussian_moment_tail(power + 4.0, r);
    };
    while (tail_at(radius) >= tol / 10.0 && radius < kMaxTruncation) radius += 0.5;

    quad::Options opt;
    opt.abs_tol = tol / scale * 0.25;
    opt.max_subdivisions = 20000;
    auto integrand = [&](double r) { return (kappa_km(r) - 1.0) * std::pow(r, power); };
    const auto head = quad::integrate(integrand, 0.0, 1.0, opt);
    const auto body = quad::integrate(integrand, 1.0, radius, opt);

    QuadResult out;
    out.value = scale * (head.value + body.value);
    out.error_estimate = scale * (head.error_estimate + body.error_estimate);
    out.tail_bound = tail_at(radius);
    out.subdivisions = head.subdivisions + body.subdivisions;
    out.truncation_radius = radius;
    if (out.error_estimate + out.tail_bound > tol) {
        throw PrecisionFailure("precision failure in d_m(k, s)", out);
    }
    return out;
}

}  // namespace riesz::coeffs
