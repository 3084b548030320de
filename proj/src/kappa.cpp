#include "riesz/kappa.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "riesz/errors.hpp"

namespace riesz::kappa {
namespace {

using boost::multiprecision::cpp_rational;
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

void check_dimension(int m) {
    if (m < 1 || m > kMaxDimension) {
        throw InvalidArgument("dimension m must lie in [1, " + std::to_string(kMaxDimension) +
                              "], got " + std::to_string(m));
    }
}

// One summand c * x^p * exp(-k x) of the closed-form numerator.
struct ExpMonomial {
    long coefficient;
    int decay;
    int power;
};

std::vector<ExpMonomial> numerator_monomials(int m) {
    const long mm = m;
    std::vector<ExpMonomial> out = {
        // m (1 - v)(1 - v^{m+1}) = m (1 - v - v^{m+1} + v^{m+2})
        {mm, 0, 0}, {-mm, 1, 0}, {-mm, m + 1, 0}, {mm, m + 2, 0},
        // x (2m+2)(v^{m+1} - v)
        {2 * mm + 2, m + 1, 1}, {-(2 * mm + 2), 1, 1},
        // x^2 (v^{m+1} + v^m)
        {1, m + 1, 2}, {1, m, 2},
    };
    // x^2 ((m+1) v + 1)(v + ... + v^{m-1})
    for (int j = 1; j <= m - 1; ++j) {
        out.push_back({mm + 1, j + 1, 2});
        out.push_back({1, j, 2});
    }
    return out;
}

std::vector<cpp_rational> multiply(const std::vector<cpp_rational>& a,
                                   const std::vector<cpp_rational>& b, std::size_t order) {
    std::vector<cpp_rational> c(order, cpp_rational(0));
    for (std::size_t i = 0; i < order && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < order && j < b.size(); ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

std::vector<double> build_series(int m) {
    const std::size_t order = kMaxSeriesOrder;
    const std::size_t numerator_order = order + 4;

    std::vector<cpp_rational> inv_factorial(numerator_order + 2);
    inv_factorial[0] = 1;
    for (std::size_t n = 1; n < inv_factorial.size(); ++n) {
        inv_factorial[n] = inv_factorial[n - 1] / static_cast<long>(n);
    }

    std::vector<cpp_rational> numerator(numerator_order, cpp_rational(0));
    for (const auto& mono : numerator_monomials(m)) {
        cpp_rational decay_pow = 1;  // (-k)^{n-p}
        for (std::size_t n = mono.power; n < numerator_order; ++n) {
            numerator[n] += mono.coefficient * decay_pow * inv_factorial[n - mono.power];
            decay_pow *= -mono.decay;
        }
    }
    for (std::size_t n = 0; n < 4; ++n) {
        if (numerator[n] != 0) {
            throw Error("kappa series: numerator does not vanish to fourth order");
        }
    }

    // (1 - e^{-x}) / x = sum (-1)^n x^n / (n+1)!
    std::vector<cpp_rational> unit(order);
    for (std::size_t n = 0; n < order; ++n) {
        unit[n] = (n % 2 == 0 ? 1 : -1) * inv_factorial[n + 1];
    }
    std::vector<cpp_rational> denominator(order, cpp_rational(0));
    denominator[0] = m;
    for (int i = 0; i < m + 2; ++i) denominator = multiply(denominator, unit, order);

    // quotient of numerator / x^4 by the denominator series
    std::vector<cpp_rational> quotient(order);
    for (std::size_t n = 0; n < order; ++n) {
        cpp_rational acc = numerator[n + 4];
        for (std::size_t j = 1; j <= n; ++j) acc -= denominator[j] * quotient[n - j];
        quotient[n] = acc / denominator[0];
    }

    std::vector<double> out(order);
    for (std::size_t n = 0; n < order; ++n) out[n] = static_cast<double>(quotient[n]);
    return out;
}

struct SeriesCache {
    std::array<std::once_flag, kMaxDimension + 1> flags;
    std::array<std::vector<double>, kMaxDimension + 1> tables;
};

SeriesCache& series_cache() {
    static SeriesCache cache;
    return cache;
}

template <class T>
T one_minus_vpow(const T& x, int k) {
    if constexpr (std::is_same_v<T, double>) {
        return -std::expm1(-k * x);
    } else {
        return 1 - exp(-k * x);
    }
}

template <class T>
struct DirectTerms {
    T term_one, term_two, term_three, denominator, v;
};

template <class T>
DirectTerms<T> direct_terms(int m, const T& r) {
    using std::exp;
    using std::pow;
    const T x = r * r;
    const T v = exp(-x);
    const T one_minus_v = one_minus_vpow(x, 1);

    T geometric = 0;  // v + v^2 + ... + v^{m-1}
    T vp = v;
    for (int j = 1; j <= m - 1; ++j) {
        geometric += vp;
        vp *= v;
    }
    const T v_m = pow(v, m);
    const T v_m1 = v_m * v;

    DirectTerms<T> t{};
    t.term_one = m * one_minus_vpow(x, m + 1) * one_minus_v;
    t.term_two = -x * (2 * m + 2) * v * one_minus_vpow(x, m);
    t.term_three = x * x * (v_m1 + v_m + ((m + 1) * v + 1) * geometric);
    t.denominator = m * pow(one_minus_v, m + 2);
    t.v = v;
    return t;
}

double direct_kappa(int m, double r, int precision) {
    if (precision > 16) {
        const auto t = direct_terms<HighPrecision>(m, HighPrecision(r));
        return static_cast<double>((t.term_one + t.term_two + t.term_three) / t.denominator);
    }
    const auto t = direct_terms<double>(m, r);
    return (t.term_one + t.term_two + t.term_three) / t.denominator;
}

double series_kappa(int m, double r, int order) {
    const auto q = series_coefficients(m);
    const double x = r * r;
    double acc = 0.0;
    for (int n = order - 1; n >= 0; --n) acc = acc * x + q[static_cast<std::size_t>(n)];
    return acc * std::pow(r, 4 - 2 * m);
}

// Numerator minus denominator, regrouped as a polynomial in v with no
// constant term; accurate when v is small.
double numerator_excess_small_v(int m, double r, const DirectTerms<double>& t) {
    const double v = t.v;
    // 1 - v^{m+1} - (1-v)^{m+1} = sum_{j=1}^{m} C(m+1,j)(-1)^{j+1} v^j - (1 + (-1)^{m+1}) v^{m+1}
    double binom = 1.0;
    double vp = 1.0;
    double excess = 0.0;
    for (int j = 1; j <= m; ++j) {
        binom = binom * (m + 2 - j) / j;
        vp *= v;
        excess += ((j % 2 == 1) ? binom : -binom) * vp;
    }
    excess -= (m % 2 == 1 ? 2.0 : 0.0) * vp * v;
    const double one_minus_v = -std::expm1(-r * r);
    return m * one_minus_v * excess + t.term_two + t.term_three;
}

struct TailCache {
    std::array<std::once_flag, kMaxDimension + 1> flags;
    std::array<double, kMaxDimension + 1> values{};
};

}  // namespace

void EvalPolicy::validate() const {
    if (!(series_cutoff > 0.0 && series_cutoff <= 1.0)) {
        throw InvalidArgument("series_cutoff must lie in (0, 1]");
    }
    if (series_order < 8 || series_order > kMaxSeriesOrder) {
        throw InvalidArgument("series_order must lie in [8, " + std::to_string(kMaxSeriesOrder) + "]");
    }
    if (direct_precision < 1) throw InvalidArgument("direct_precision must be positive");
}

void KappaQuery::validate() const {
    check_dimension(m);
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw InvalidArgument("kappa: r must be finite and nonnegative");
    }
    policy.validate();
}

std::span<const double> series_coefficients(int m) {
    check_dimension(m);
    auto& cache = series_cache();
    const auto idx = static_cast<std::size_t>(m);
    std::call_once(cache.flags[idx], [&] { cache.tables[idx] = build_series(m); });
    return cache.tables[idx];
}

double kappa_mm(const KappaQuery& q) {
    q.validate();
    if (q.r == 0.0) {
        if (q.m == 1) return 0.0;
        if (q.m == 2) return 0.75;
        throw DomainError("kappa_mm diverges at zero for m >= 3");
    }
    if (q.r < q.policy.series_cutoff) return series_kappa(q.m, q.r, q.policy.series_order);
    return direct_kappa(q.m, q.r, q.policy.direct_precision);
}

double kappa_minus_one(const KappaQuery& q) {
    q.validate();
    if (q.r * q.r >= 2.0 && q.policy.direct_precision <= 16) {
        const auto t = direct_terms<double>(q.m, q.r);
        return numerator_excess_small_v(q.m, q.r, t) / t.denominator;
    }
    return kappa_mm(q) - 1.0;
}

KappaDecomposition kappa_decompose(const KappaQuery& q) {
    q.validate();
    if (q.r == 0.0) throw DomainError("kappa decomposition undefined at zero");
    const auto t = direct_terms<double>(q.m, q.r);
    return {t.term_one, t.term_two, t.term_three, t.denominator, t.v};
}

double small_r_leading(int m, double r) {
    check_dimension(m);
    if (!(r > 0.0)) throw InvalidArgument("small_r_leading requires r > 0");
    return (m + 1) / 4.0 * std::pow(r, 4 - 2 * m);
}

double positivity_threshold(int m) {
    if (m < 3) throw DomainError("positivity threshold proven only for m >= 3");
    return std::sqrt(2.0 * m + 3.0);
}

AsymptoticForm kappa_km_asymptotic(int k, int m, Regime regime) {
    if (k < 1 || m < 1 || k > m) throw InvalidArgument("invalid codimension: need 1 <= k <= m");
    AsymptoticForm f;
    f.regime = regime;
    if (regime == Regime::near_zero) {
        if (k < m) {
            f.exponent = -2.0 * k;
        } else {
            f.exponent = 4.0 - 2.0 * m;
            f.constant = (m + 1) / 4.0;
        }
    } else {
        f.limit = 1.0;
        f.decay_power = 4.0;
    }
    return f;
}

double tail_constant(int m) {
    check_dimension(m);
    static TailCache cache;
    const auto idx = static_cast<std::size_t>(m);
    std::call_once(cache.flags[idx], [&] {
        double worst = 0.0;
        constexpr int samples = 301;
        for (int i = 0; i < samples; ++i) {
            const double r = 5.0 + 3.0 * i / (samples - 1);
            const double envelope = std::pow(r, 4) * std::exp(-r * r);
            worst = std::max(worst, std::abs(kappa_minus_one(m, r)) / envelope);
        }
        cache.values[idx] = 2.0 * worst;
    });
    return cache.values[idx];
}

}  // namespace riesz::kappa
