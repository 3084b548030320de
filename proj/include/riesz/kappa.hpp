#pragma once

// Scaling limit kappa_mm(r) of the pair correlation of zeros of m independent
// Gaussian random sections in complex dimension m (the point case).
//
//   v = exp(-r^2)
//   kappa_mm(r) = [ m(1-v^{m+1})(1-v) + r^2(2m+2)(v^{m+1}-v)
//                   + r^4 (v^{m+1} + v^m + ((m+1)v+1)(v^m-v)/(v-1)) ]
//                 / ( m (1-v)^{m+2} )
//
// Near r = 0 numerator and denominator vanish to high order, so small r is
// served by a power series in x = r^2 whose coefficients are derived once per
// m with exact rational arithmetic.

#include <optional>
#include <span>
#include <vector>

namespace riesz::kappa {

inline constexpr int kMaxDimension = 16;
inline constexpr int kMaxSeriesOrder = 40;

struct EvalPolicy {
    double series_cutoff = 0.35;  // r below which the series replaces the closed form
    int series_order = 30;        // number of terms of the quotient series in x = r^2
    int direct_precision = 16;    // decimal digits for the closed form; > 16 selects 50-digit floats

    void validate() const;
};

struct KappaQuery {
    int m = 1;
    double r = 0.0;
    EvalPolicy policy{};

    void validate() const;
};

/// The three numerator terms of the closed form, its denominator and v = e^{-r^2}.
struct KappaDecomposition {
    double term_one = 0.0;    // m(1 - v^{m+1})(1 - v)
    double term_two = 0.0;    // r^2 (2m+2)(v^{m+1} - v), never positive
    double term_three = 0.0;  // r^4 [ ... ]
    double denominator = 0.0; // m (1 - v)^{m+2}
    double v = 0.0;

    [[nodiscard]] double reassemble() const {
        return (term_one + term_two + term_three) / denominator;
    }
};

/// Coefficients q_n with kappa_mm(r) = r^{4-2m} * sum_n q_n r^{2n}.
[[nodiscard]] std::span<const double> series_coefficients(int m);

double kappa_mm(const KappaQuery& q);
inline double kappa_mm(int m, double r) { return kappa_mm(KappaQuery{m, r}); }

/// kappa_mm(r) - 1 without the cancellation that makes `kappa_mm(...) - 1`
/// collapse to zero once r^4 e^{-r^2} drops below machine epsilon.
double kappa_minus_one(const KappaQuery& q);
inline double kappa_minus_one(int m, double r) { return kappa_minus_one(KappaQuery{m, r}); }

KappaDecomposition kappa_decompose(const KappaQuery& q);

/// (m+1)/4 * r^{4-2m}
double small_r_leading(int m, double r);

/// sqrt(2m+3): beyond this radius kappa_mm - 1 > 0 (m >= 3).
double positivity_threshold(int m);

enum class Regime { near_zero, near_infinity };

struct AsymptoticForm {
    Regime regime = Regime::near_zero;
    // near zero: kappa ~ constant * r^exponent (constant known only for k = m)
    double exponent = 0.0;
    std::optional<double> constant;
    // near infinity: kappa -> limit with |kappa - limit| = O(r^decay_power e^{-r^2})
    std::optional<double> limit;
    double decay_power = 0.0;
};

AsymptoticForm kappa_km_asymptotic(int k, int m, Regime regime);

/// Constant K with |kappa_mm(r) - 1| <= K r^4 e^{-r^2} for r >= 5: twice the
/// largest ratio observed on [5, 8].
double tail_constant(int m);

}  // namespace riesz::kappa
