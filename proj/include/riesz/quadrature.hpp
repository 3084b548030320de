#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.
// The interval with the largest local error estimate is bisected until the
// summed estimate meets the tolerance. Endpoints are never sampled, so
// integrable endpoint singularities are handled (slowly) by repeated bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace riesz::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 2000;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gauss_kronrod_15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);

    auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!done() && res.subdivisions < opt.max_subdivisions) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);  // interval exhausted at machine resolution
            break;
        }
        auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++res.subdivisions;
    }

    // re-sum to shed the drift of the running updates
    total = 0.0;
    error = 0.0;
    std::vector<detail::Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const auto& l, const auto& r) { return l.a < r.a; });
    for (const auto& s : segments) {
        total += s.value;
        error += s.error;
    }
    res.value = total;
    res.error_estimate = error;
    res.converged = done();
    return res;
}

}  // namespace riesz::quad
