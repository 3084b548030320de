#pragma once

// Reference evaluations that share no code with the library: the closed form of
// kappa_mm in 100-digit arithmetic, and brute-force Gauss-Legendre integrals on a
// graded mesh built on top of it.

namespace oracle {

/// Closed form of kappa_mm(r) evaluated literally (including the division
/// (v^m - v)/(v - 1)) with 100 significant digits.
double kappa_mm(int m, double r);

/// kappa_mm(r) - 1 at 100 digits, rounded once.
double kappa_minus_one(int m, double r);

/// 2m * int_0^inf (kappa_mm - 1) r^{2m-1-s} dr; s = 0 gives the normalization identity.
double c_m(int m, double s);

/// 2m * int_0^inf log(r) (kappa_mm - 1) r^{2m-1} dr.
double c_m_log(int m);

}  // namespace oracle
