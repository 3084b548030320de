#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riesz/ensembles.hpp"
#include "riesz/sphere.hpp"

namespace riesz::energy {

/// Sum of the kernel over pairs of distinct indices; unordered pairs i < j, or
/// ordered pairs i != j (exactly twice the unordered sum).
double energy(const sphere::PointConfig& config, const sphere::Kernel& kernel);

struct EnergySum {
    double value;
    /// Sum of |kernel| over the same pairs; scales the rounding error of value.
    double magnitude;
};

/// Neumaier-compensated pair sum behind energy(), taken in increasing order of
/// |term| so that it is exactly invariant under permutations of the points.
EnergySum energy_sum(const sphere::PointConfig& config, const sphere::Kernel& kernel);

/// Cascade (pairwise) summation in index order.
double pairwise_sum(std::span<const double> values);

struct TrialFailure {
    std::size_t trial;
    std::uint64_t stream_index;
    std::string message;
};

struct McStats {
    double mean = 0.0;
    double std_error = 0.0;  // sample stdev / sqrt(trials)
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t failures = 0;
    std::string kernel;
    sphere::PairCounting counting = sphere::PairCounting::unordered;
    double radius = 0.5;
    std::vector<TrialFailure> failure_log;
};

/// Summary statistics of per-trial values in trial order.
McStats summarize(std::span<const double> values, std::uint64_t seed);

struct McOptions {
    sphere::SphereConfig sphere = sphere::SphereConfig::half();
    unsigned threads = 1;
    /// Abort when more than this fraction of trials needed a resample.
    double max_failure_rate = 1e-3;
    /// Resamples per trial before the trial counts as lost.
    int max_retries = 8;
    ensembles::RootOptions roots{};
};

/// Stream index of the given retry of a trial; retry 0 is the trial index itself.
std::uint64_t retry_stream_index(std::size_t trial, int retry);

/// Expected energy of the zeros of degree-N SU(2) polynomials; trial t uses
/// RngStream(seed, t) and the result is independent of the thread count.
McStats mc_expected_energy(int degree, const sphere::Kernel& kernel, std::size_t trials,
                           std::uint64_t seed, const McOptions& opt = {});

/// Same estimator on n i.i.d. uniform points.
McStats mc_uniform_energy(int n, const sphere::Kernel& kernel, std::size_t trials,
                          std::uint64_t seed, const McOptions& opt = {});

enum class PointSource { zeros, uniform };

struct PairCorrOptions {
    PointSource source = PointSource::zeros;
    unsigned threads = 1;
    /// Bins with fewer pairs than this raise a warning.
    std::size_t min_pairs_per_bin = 100;
};

/// Pair correlation in the universal variable r = sqrt(N) * geodesic distance on
/// the sphere of radius 1/2, where the zero intensity is 1/pi per unit r-area.
struct PairCorrHistogram {
    int degree = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> bin_edges;
    std::vector<double> density;   // 1 for an uncorrelated process
    std::vector<double> std_error;
    std::vector<double> counts;    // unordered pairs, summed over trials
    std::vector<double> kappa11;   // kappa_11 averaged over each bin
    std::vector<std::string> warnings;

    [[nodiscard]] double bin_mid(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

PairCorrHistogram empirical_pair_correlation(int degree, std::size_t trials, int bins,
                                             double r_max, std::uint64_t seed,
                                             const PairCorrOptions& opt = {});

/// Exact expected log-chordal energy of the zeros, unordered pairs.
///   radius 1/2: N^2/4 - (N/4) log N - N/4
///   radius 1:   -(1/4) log(4/e) N^2 - (N/4) log N + (1/4) log(4/e) N
double predict_sphere_log(double n, double radius);

struct ExpansionTerm {
    std::string label;
    double power;
    double coefficient;
};

/// sum_i coefficient_i N^{power_i} + log_coefficient N^{log_power} log sqrt(N).
struct ExpansionPrediction {
    std::vector<ExpansionTerm> terms;  // strictly decreasing powers
    bool includes_log_term = false;
    double log_coefficient = 0.0;
    double log_power = 0.0;

    [[nodiscard]] double evaluate(double n) const;
};

/// Point-case expansion in dimension m. a_coeffs = {a_1, a_2, ...}; a_1 multiplies
/// N^{2m} and a_j (j >= 2) multiplies N^{2m-j}.
///   0 < s < min(2m, 4): a_j for j < p = floor(m - s/2) + 1, plus c N^{m + s/2}
///   s = 0:             a_j for j <= m, the N^m coefficient becomes a_m - c,
///                      plus -N^m log sqrt(N)
/// Terms sharing a power are merged.
ExpansionPrediction predict_theorem_dis(int m, double s, std::span<const double> a_coeffs,
                                        double c_value);

/// Codimension-k expansion for 0 < s < 2(m - k):
///   (pi^{m-k}/(m-k)!)^2 [a_1 N^{2k} + sum_{j>=2} w_j a_j N^{2k-j}] + d N^{2k-m+s/2}
/// with w_2 = k/m; w_higher supplies w_3, w_4, ....
ExpansionPrediction predict_theorem_con(int m, int k, double s, std::span<const double> a_coeffs,
                                        std::span<const double> w_higher, double d_value);

double theorem_con_prefactor(int m, int k);

struct BoundPair {
    double lower;
    double upper;
};

/// Constants left symbolic in the minimal-energy bounds on S^2.
struct RieszBoundConstants {
    double v2 = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
};

/// Functional forms of the minimal Riesz energy bounds on S^2:
///   s < 2:  v2/2 N^2 - c3 N^{1+s/2} <= E <= v2/2 N^2 - c4 N^{1+s/2}
///   s = 2:  both sides N^2 log N / 8
///   s > 2:  c1 N^{1+s/2} <= E <= c2 N^{1+s/2}
BoundPair riesz_minimal_bounds(double n, double s, const RieszBoundConstants& k);

/// Leading-order lower bound on the minimal log energy on the unit sphere:
///   -(1/4) log(4/e) N^2 - (1/4) N log N - 11/(6 pi) N.
double elkies_lower_bound(double n);

/// C_N from a log energy at radius 1: (E + (1/4) log(4/e) N^2 + (N/4) log N) / N.
double c_n_from_energy(double n, double energy);

/// Inverse of c_n_from_energy.
double energy_from_c_n(double n, double c_n);

/// Upper limit -(1/4) log(pi sqrt(3)/2) - pi/(8 sqrt(3)) for limsup C_N.
double rsz_upper_constant();

}  // namespace riesz::energy
