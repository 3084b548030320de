#pragma once

// Coefficient integrals built on kappa_mm:
//
//   c_m(s) = 2m * int_0^inf (kappa_mm(r) - 1) r^{2m-1-s} dr,   0 < s < min(2m, 4)
//   c_m    = 2m * int_0^inf log(r) (kappa_mm(r) - 1) r^{2m-1} dr
//
// Each integral is split at `split_radius`: below it the quotient series of
// kappa_mm is integrated term by term in closed form; between split_radius and
// the truncation radius R an adaptive Gauss-Kronrod rule is used; beyond R the
// contribution is bounded by K * int_R^inf r^{2m+3-s} e^{-r^2} dr.

#include <functional>
#include <stdexcept>
#include <vector>

#include "riesz/errors.hpp"

namespace riesz::coeffs {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double tail_bound = 0.0;
    int subdivisions = 0;
    double truncation_radius = 0.0;
};

struct CoeffRequest {
    int m = 1;
    double s = 1.0;  // 0 selects the logarithmic weight
    double tol = 1e-9;
    double split_radius = 0.35;
    double truncation_radius = 0.0;  // 0: smallest R >= 6 whose tail bound is below tol/10
};

/// Raised when error_estimate + tail_bound exceeds the requested tolerance.
class PrecisionFailure : public Error {
public:
    PrecisionFailure(const std::string& what, QuadResult best)
        : Error(what), best_estimate(best) {}
    QuadResult best_estimate;
};

QuadResult c_m_s(const CoeffRequest& req);
QuadResult c_m_log(int m, double tol);

/// 2m int (kappa_mm - 1) r^{2m-1} dr, identically -1 in every dimension.
QuadResult normalization_identity(int m, double tol);

/// lim_{s -> 4^-} (4 - s) c_m(s).
double residue_at_4(int m);

struct ScanPoint {
    double s;
    double value;
};

std::vector<ScanPoint> c_m_scan(int m, double s_min, double s_max, int points, double tol);

struct SignChange {
    double lower;
    double upper;
};

/// Brackets of sign changes of c_m over the grid {0.25, 0.5, ..., 3.75, 3.9, 3.99}, with
/// the limit c_m(0+) = -1 standing in at s = 0.
std::vector<SignChange> sign_changes(int m, double tol);

/// Smallest root of c_m(s) in (0, 4), refined by bisection to width tol.
double s_star(int m, double tol);

using KappaFunction = std::function<double(double)>;

/// Hook for the codimension-k coefficient
///   d_m(k, s) = (pi^{m-k}/(m-k)!)^2 * 2m * int_0^inf (kappa_km(r) - 1) r^{2m-1-s} dr
/// given an externally supplied kappa_km; valid for 0 < s < 2(m - k).
/// `decay_constant` bounds |kappa_km(r) - 1| <= K r^4 e^{-r^2} beyond the truncation radius.
QuadResult d_m_k_s(int m, int k, double s, const KappaFunction& kappa_km, double decay_constant,
                   double tol);

}  // namespace riesz::coeffs
