#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "riesz/sphere.hpp"

namespace riesz::ensembles {

using Complex = std::complex<double>;

/// One splitmix64 step (add 0x9e3779b97f4a7c15, then mix); the seed-splitting
/// primitive for every stream.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `index` under `master_seed`:
///   splitmix64(master_seed ^ splitmix64(index + 0x9e3779b97f4a7c15)).
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

/// One independent random stream per (master seed, index) pair.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    [[nodiscard]] std::uint64_t master_seed() const { return master_seed_; }
    [[nodiscard]] std::uint64_t stream_index() const { return stream_index_; }
    std::mt19937_64& engine() { return engine_; }

    /// Standard complex Gaussian: E|a|^2 = 1, real and imaginary parts N(0, 1/2).
    Complex complex_gaussian();

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

/// p(z) = sum_j coeffs[j] z^j.
struct PolySample {
    int degree = 0;
    std::vector<Complex> coeffs;

    /// Deterministic polynomial from explicit coefficients (lowest degree first).
    static PolySample from_coefficients(std::vector<Complex> coeffs);
    void validate() const;
};

/// c_j = a_j sqrt(binomial(N, j)) with a_j i.i.d. standard complex Gaussian.
PolySample sample_polynomial(int degree, RngStream& rng);

struct RootOptions {
    /// Backward-error target as a multiple of the unit roundoff.
    double backward_tolerance = 64.0;
    int max_iterations = 400;
    /// Companion eigenvalues seed the iteration up to this degree.
    int companion_limit = 60;
    /// A leading coefficient c_k with |c_k| / sqrt(C(N, k)) below this fraction of
    /// sqrt(sum_j |c_j|^2 / C(N, j)) is deflated to a root at infinity.
    double infinity_threshold = 1e-12;
};

struct RootResult {
    /// Chart roots; nullopt is the point at infinity.
    std::vector<std::optional<Complex>> roots;
    int roots_at_infinity = 0;
    int roots_at_zero = 0;
    /// max_i |p(z_i)| / sum_j |c_j| |z_i|^j, evaluated in the reversed chart for |z_i| > 1.
    double max_backward_error = 0.0;
    int iterations = 0;
    bool companion_seeded = false;
};

/// All N roots of the polynomial, counted with multiplicity.
RootResult find_roots(const PolySample& poly, const RootOptions& opt = {});

/// Zeros mapped onto the sphere through the stereographic chart.
sphere::PointConfig zeros_of(const PolySample& poly, const sphere::SphereConfig& cfg,
                             const RootOptions& opt = {});

/// Residual of a single root in the backward-error normalization used by find_roots.
double backward_error(std::span<const Complex> coeffs, Complex z);

/// True when the zeros of lambda * poly and of poly agree as point sets within tol
/// (chordal distance on the unit sphere after optimal matching).
bool scaling_invariance_check(const PolySample& poly, Complex lambda, double tol = 1e-8);

/// Diagonal value of the Bergman kernel of O(N) on CP^m: (N+m)!/N!.
double bergman_cpm(int degree, int m);
double log_bergman_cpm(int degree, int m);

/// Truncated Bargmann-Fock function sum_{j<J} a_j z^j / sqrt(j!).
struct BargmannFockSample {
    std::vector<Complex> coeffs;
    double radius = 0.0;
    /// e^{-J log(J / (e R^2))}: bound on the discarded tail on |z| <= R.
    double truncation_bound = 0.0;
};

BargmannFockSample bargmann_fock_sample(int terms, double radius, RngStream& rng);

/// Zeros of the truncated function inside the disc |z| <= radius.
std::vector<Complex> bargmann_fock_zeros(const BargmannFockSample& sample,
                                         const RootOptions& opt = {});

}  // namespace riesz::ensembles
