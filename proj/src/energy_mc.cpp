#include "riesz/energy_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/factorials.hpp>

#include "riesz/errors.hpp"
#include "riesz/kappa.hpp"
#include "riesz/parallel.hpp"
#include "riesz/quadrature.hpp"

namespace riesz::energy {
namespace {

const double kLog4OverE = std::log(4.0) - 1.0;

void check_trials(std::size_t trials, std::size_t minimum) {
    if (trials < minimum) {
        throw InvalidArgument("Monte Carlo needs at least " + std::to_string(minimum) + " trials");
    }
}

// Per-trial values with resampling on numerical failure; retries never depend
// on scheduling.
template <class TrialFn>
McStats run_trials(std::size_t trials, std::uint64_t seed, const McOptions& opt,
                   TrialFn&& trial_value) {
    std::vector<double> values(trials);
    std::vector<std::vector<TrialFailure>> logs(trials);
    parallel_for(trials, opt.threads, [&](std::size_t t) {
        for (int retry = 0; retry <= opt.max_retries; ++retry) {
            const auto index = retry_stream_index(t, retry);
            try {
                ensembles::RngStream rng(seed, index);
                values[t] = trial_value(rng);
                return;
            } catch (const RootFinderFailure& e) {
                logs[t].push_back({t, index, e.what()});
            } catch (const DegenerateSample& e) {
                logs[t].push_back({t, index, e.what()});
            } catch (const InfiniteEnergy& e) {
                logs[t].push_back({t, index, e.what()});
            }
        }
        throw Error("trial " + std::to_string(t) + " failed after " +
                    std::to_string(opt.max_retries) + " resamples");
    });

    McStats stats = summarize(values, seed);
    for (auto& log : logs) {
        for (auto& f : log) stats.failure_log.push_back(std::move(f));
    }
    stats.failures = stats.failure_log.size();
    if (static_cast<double>(stats.failures) > opt.max_failure_rate * static_cast<double>(trials)) {
        throw Error("Monte Carlo aborted: " + std::to_string(stats.failures) + " failed trials of " +
                    std::to_string(trials) + " exceeds the failure-rate limit");
    }
    return stats;
}

void add_term(std::vector<ExpansionTerm>& terms, const std::string& label, double power,
              double coefficient) {
    for (auto& t : terms) {
        if (t.power == power) {
            t.label += " + " + label;
            t.coefficient += coefficient;
            return;
        }
    }
    terms.push_back({label, power, coefficient});
}

void sort_terms(std::vector<ExpansionTerm>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& l, const auto& r) { return l.power > r.power; });
}

std::size_t max_a_terms(int m, double s) {
    const int p = static_cast<int>(std::floor(m - s / 2.0)) + 1;
    return static_cast<std::size_t>(std::max(1, p - 1));
}

}  // namespace

EnergySum energy_sum(const sphere::PointConfig& config, const sphere::Kernel& kernel) {
    const sphere::SphereConfig cfg(config.radius);
    const bool chordal_only = kernel.uses_chordal_distance();
    const auto& pts = config.points;
    std::vector<double> terms;
    terms.reserve(pts.size() * (pts.size() > 0 ? pts.size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double chord = sphere::chordal_distance(pts[i], pts[j]);
            if (chord == 0.0) throw InfiniteEnergy(i, j);
            const double geo = chordal_only ? 0.0 : sphere::geodesic_distance(pts[i], pts[j], cfg);
            terms.push_back(kernel.at_distance(geo, chord));
        }
    }
    // a fixed summation order over the multiset of pair values makes the result
    // exactly invariant under permutations of the points
    std::sort(terms.begin(), terms.end(), [](double l, double r) {
        return std::abs(l) < std::abs(r) || (std::abs(l) == std::abs(r) && l < r);
    });
    double total = 0.0;
    double compensation = 0.0;
    double magnitude = 0.0;
    for (double term : terms) {
        const double next = total + term;
        compensation += std::abs(total) >= std::abs(term) ? (total - next) + term
                                                           : (term - next) + total;
        total = next;
        magnitude += std::abs(term);
    }
    total += compensation;
    if (kernel.counting == sphere::PairCounting::ordered) return {2.0 * total, 2.0 * magnitude};
    return {total, magnitude};
}

double energy(const sphere::PointConfig& config, const sphere::Kernel& kernel) {
    return energy_sum(config, kernel).value;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McStats summarize(std::span<const double> values, std::uint64_t seed) {
    check_trials(values.size(), 2);
    const auto n = static_cast<double>(values.size());
    McStats s;
    s.trials = values.size();
    s.seed = seed;
    s.mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(),
                   [&](double v) { return (v - s.mean) * (v - s.mean); });
    s.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return s;
}

std::uint64_t retry_stream_index(std::size_t trial, int retry) {
    return static_cast<std::uint64_t>(trial) + (static_cast<std::uint64_t>(retry) << 40);
}

McStats mc_expected_energy(int degree, const sphere::Kernel& kernel, std::size_t trials,
                           std::uint64_t seed, const McOptions& opt) {
    if (degree < 2) throw InvalidArgument("Monte Carlo energy needs N >= 2");
    check_trials(trials, 100);
    auto stats = run_trials(trials, seed, opt, [&](ensembles::RngStream& rng) {
        const auto poly = ensembles::sample_polynomial(degree, rng);
        return energy(ensembles::zeros_of(poly, opt.sphere, opt.roots), kernel);
    });
    stats.kernel = kernel.name();
    stats.counting = kernel.counting;
    stats.radius = opt.sphere.radius();
    return stats;
}

McStats mc_uniform_energy(int n, const sphere::Kernel& kernel, std::size_t trials,
                          std::uint64_t seed, const McOptions& opt) {
    if (n < 2) throw InvalidArgument("Monte Carlo energy needs n >= 2");
    check_trials(trials, 100);
    auto stats = run_trials(trials, seed, opt, [&](ensembles::RngStream& rng) {
        return energy(sphere::uniform_points(static_cast<std::size_t>(n), opt.sphere, rng.engine()),
                      kernel);
    });
    stats.kernel = kernel.name();
    stats.counting = kernel.counting;
    stats.radius = opt.sphere.radius();
    return stats;
}

PairCorrHistogram empirical_pair_correlation(int degree, std::size_t trials, int bins,
                                             double r_max, std::uint64_t seed,
                                             const PairCorrOptions& opt) {
    if (degree < 50) throw InvalidArgument("pair correlation needs N >= 50 (scaling regime)");
    if (!(r_max > 0.0 && r_max <= 5.0)) throw InvalidArgument("r_max must lie in (0, 5]");
    if (bins < 1) throw InvalidArgument("at least one bin is required");
    check_trials(trials, 2);

    const double root_n = std::sqrt(static_cast<double>(degree));
    const double width = r_max / bins;
    // angle on the sphere of radius 1/2 for universal distance r
    auto angle_of = [&](double r) { return 2.0 * r / root_n; };
    const double cos_max = std::cos(angle_of(r_max));
    const auto nb = static_cast<std::size_t>(bins);
    const sphere::SphereConfig cfg = sphere::SphereConfig::half();

    std::vector<std::vector<std::uint32_t>> per_trial(trials, std::vector<std::uint32_t>(nb, 0));
    parallel_for(trials, opt.threads, [&](std::size_t t) {
        sphere::PointConfig pts;
        for (int retry = 0;; ++retry) {
            ensembles::RngStream rng(seed, retry_stream_index(t, retry));
            try {
                pts = opt.source == PointSource::zeros
                          ? ensembles::zeros_of(ensembles::sample_polynomial(degree, rng), cfg)
                          : sphere::uniform_points(static_cast<std::size_t>(degree), cfg,
                                                   rng.engine());
                break;
            } catch (const RootFinderFailure&) {
                if (retry >= 8) throw;
            }
        }
        std::vector<Eigen::Vector3d> unit(pts.points.size());
        for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = pts.points[i].normalized();
        auto& counts = per_trial[t];
        for (std::size_t i = 0; i < unit.size(); ++i) {
            for (std::size_t j = i + 1; j < unit.size(); ++j) {
                const double dot = unit[i].dot(unit[j]);
                if (dot < cos_max) continue;
                const double ang = std::atan2(unit[i].cross(unit[j]).norm(), dot);
                const double r = 0.5 * root_n * ang;
                const auto b = static_cast<std::size_t>(r / width);
                if (b < nb) ++counts[b];
            }
        }
    });

    PairCorrHistogram h;
    h.degree = degree;
    h.trials = trials;
    h.seed = seed;
    h.bin_edges.resize(nb + 1);
    for (std::size_t b = 0; b <= nb; ++b) h.bin_edges[b] = width * static_cast<double>(b);

    const double n = degree;
    const double pairs = n * (n - 1.0) / 2.0;
    std::vector<double> column(trials);
    quad::Options qopt;
    qopt.abs_tol = 1e-12;
    for (std::size_t b = 0; b < nb; ++b) {
        const double lo = h.bin_edges[b];
        const double hi = h.bin_edges[b + 1];
        const double expected = pairs * 0.5 * (std::cos(angle_of(lo)) - std::cos(angle_of(hi)));
        for (std::size_t t = 0; t < trials; ++t) column[t] = per_trial[t][b];
        const auto stats = summarize(column, seed);
        h.counts.push_back(stats.mean * static_cast<double>(trials));
        h.density.push_back(stats.mean / expected);
        h.std_error.push_back(stats.std_error / expected);

        auto weight = [&](double r) { return std::sin(angle_of(r)); };
        const double norm = quad::integrate(weight, lo, hi, qopt).value;
        const double avg = quad::integrate(
            [&](double r) { return (r > 0.0 ? kappa::kappa_mm(1, r) : 0.0) * weight(r); }, lo, hi,
            qopt).value;
        h.kappa11.push_back(avg / norm);

        if (h.counts.back() < static_cast<double>(opt.min_pairs_per_bin)) {
            h.warnings.push_back("bin " + std::to_string(b) + " holds " +
                                 std::to_string(static_cast<long long>(h.counts.back())) +
                                 " pairs; widen bins or add trials");
        }
    }
    return h;
}

double predict_sphere_log(double n, double radius) {
    if (!(n >= 1.0)) throw InvalidArgument("point count must be at least 1");
    const double log_term = 0.25 * n * std::log(n);
    if (radius == 0.5) return n * n / 4.0 - log_term - n / 4.0;
    if (radius == 1.0) return -0.25 * kLog4OverE * n * n - log_term + 0.25 * kLog4OverE * n;
    throw InvalidArgument("unsupported radius: only 1/2 and 1 are tabulated");
}

double ExpansionPrediction::evaluate(double n) const {
    if (n == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& t : terms) acc += t.coefficient * std::pow(n, t.power);
    if (includes_log_term) acc += log_coefficient * std::pow(n, log_power) * 0.5 * std::log(n);
    return acc;
}

ExpansionPrediction predict_theorem_dis(int m, double s, std::span<const double> a_coeffs,
                                        double c_value) {
    if (m < 1) throw InvalidArgument("dimension m must be positive");
    if (a_coeffs.empty()) throw InvalidArgument("a_1 is required");
    ExpansionPrediction out;
    if (s == 0.0) {
        if (a_coeffs.size() > static_cast<std::size_t>(m)) {
            throw InvalidArgument("log expansion takes a_j for j <= m only");
        }
        add_term(out.terms, "a_1", 2.0 * m, a_coeffs[0]);
        for (std::size_t j = 2; j <= a_coeffs.size(); ++j) {
            add_term(out.terms, "a_" + std::to_string(j), 2.0 * m - static_cast<double>(j),
                     a_coeffs[j - 1]);
        }
        add_term(out.terms, "-c_m", m, -c_value);
        out.includes_log_term = true;
        out.log_coefficient = -1.0;
        out.log_power = m;
    } else {
        if (!(s > 0.0 && s < std::min(2.0 * m, 4.0))) {
            throw DomainError("s outside the validity window 0 < s < min(2m, 4)");
        }
        if (a_coeffs.size() > max_a_terms(m, s)) {
            throw InvalidArgument("too many a_j for this s: need j < floor(m - s/2) + 1");
        }
        add_term(out.terms, "a_1", 2.0 * m, a_coeffs[0]);
        for (std::size_t j = 2; j <= a_coeffs.size(); ++j) {
            add_term(out.terms, "a_" + std::to_string(j), 2.0 * m - static_cast<double>(j),
                     a_coeffs[j - 1]);
        }
        add_term(out.terms, "c_m(s)", m + s / 2.0, c_value);
    }
    sort_terms(out.terms);
    return out;
}

double theorem_con_prefactor(int m, int k) {
    if (k < 1 || k >= m) throw InvalidArgument("codimension needs 1 <= k < m");
    return std::pow(std::pow(std::numbers::pi, m - k) / boost::math::factorial<double>(
                                                             static_cast<unsigned>(m - k)),
                    2);
}

ExpansionPrediction predict_theorem_con(int m, int k, double s, std::span<const double> a_coeffs,
                                        std::span<const double> w_higher, double d_value) {
    const double prefactor = theorem_con_prefactor(m, k);
    if (!(s > 0.0 && s < 2.0 * (m - k))) {
        throw DomainError("s outside the validity window 0 < s < 2(m - k)");
    }
    if (a_coeffs.empty()) throw InvalidArgument("a_1 is required");
    if (a_coeffs.size() > max_a_terms(m, s)) {
        throw InvalidArgument("too many a_j for this s: need j < floor(m - s/2) + 1");
    }
    if (a_coeffs.size() > 2 && w_higher.size() < a_coeffs.size() - 2) {
        throw InvalidArgument("weights w_j are required for every a_j with j >= 3");
    }
    ExpansionPrediction out;
    add_term(out.terms, "a_1", 2.0 * k, prefactor * a_coeffs[0]);
    for (std::size_t j = 2; j <= a_coeffs.size(); ++j) {
        const double w = j == 2 ? static_cast<double>(k) / m : w_higher[j - 3];
        add_term(out.terms, "w_" + std::to_string(j) + " a_" + std::to_string(j),
                 2.0 * k - static_cast<double>(j), prefactor * w * a_coeffs[j - 1]);
    }
    add_term(out.terms, "d_m(k,s)", 2.0 * k - m + s / 2.0, d_value);
    sort_terms(out.terms);
    return out;
}

BoundPair riesz_minimal_bounds(double n, double s, const RieszBoundConstants& k) {
    if (!(n >= 1.0)) throw InvalidArgument("point count must be at least 1");
    if (!(s > 0.0)) throw InvalidArgument("Riesz bounds need s > 0");
    const double growth = std::pow(n, 1.0 + s / 2.0);
    if (s < 2.0) return {0.5 * k.v2 * n * n - k.c3 * growth, 0.5 * k.v2 * n * n - k.c4 * growth};
    if (s == 2.0) {
        const double v = n * n * std::log(n) / 8.0;
        return {v, v};
    }
    return {k.c1 * growth, k.c2 * growth};
}

double elkies_lower_bound(double n) {
    return -0.25 * kLog4OverE * n * n - 0.25 * n * std::log(n) - 11.0 / (6.0 * std::numbers::pi) * n;
}

double c_n_from_energy(double n, double energy) {
    if (!(n >= 1.0)) throw InvalidArgument("point count must be at least 1");
    return (energy + 0.25 * kLog4OverE * n * n + 0.25 * n * std::log(n)) / n;
}

double energy_from_c_n(double n, double c_n) {
    return -0.25 * kLog4OverE * n * n - 0.25 * n * std::log(n) + c_n * n;
}

double rsz_upper_constant() {
    const double sqrt3 = std::sqrt(3.0);
    return -0.25 * std::log(std::numbers::pi * sqrt3 / 2.0) - std::numbers::pi / (8.0 * sqrt3);
}

}  // namespace riesz::energy
