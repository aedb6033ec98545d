#pragma once

// Constructive-interference symbol-level precoding for 1-bit DACs.
//
// For each user k the noiseless received signal h_k x is written in the
// (oblique) basis of the two detection thresholds of its symbol s_k:
//
//   h_k x = alpha_k^A s_k^A + alpha_k^B s_k^B.
//
// Each alpha is linear in x0 = [Re(x); Im(x)], so the stacked vector
// [alpha_1^A .. alpha_K^A, alpha_1^B .. alpha_K^B] = M0 x0. Maximizing the
// smallest alpha over the box |Re x_n|, |Im x_n| <= 1/sqrt(2) is the LP
//
//   min -t   s.t.  t - (M0 x0)_i <= 0  for all i,   x0 in the box, t free,
//
// whose solution is then sign-quantized to the 1-bit alphabet.

#include <cstddef>
#include <span>
#include <vector>

#include "ciprec/analog.hpp"
#include "ciprec/constellation.hpp"
#include "ciprec/lpsolve.hpp"
#include "ciprec/numlin.hpp"

namespace ciprec {

inline constexpr double kOneBitLevel = 0.70710678118654752440;  // 1/sqrt(2)

struct UserCoefficients {
  // alpha^A = a . Re(x) + b . Im(x),  alpha^B = c . Re(x) + d . Im(x)
  std::vector<double> a, b, c, d;
  // s^A = a_re + j a_im,  s^B = b_re + j b_im
  double a_re = 0.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
  double denominator = 0.0;  // a_re * b_im - a_im * b_re
};

struct CiCoefficients {
  std::vector<UserCoefficients> users;
  /// 2K x 2N_RF; row k is [a_k b_k], row K + k is [c_k d_k].
  RMat m0;

  std::size_t num_users() const { return users.size(); }
  std::size_t rf_chains() const { return m0.cols() / 2; }
};

CiCoefficients build_coefficients(const CMat& h_e, std::span<const cplx> symbols,
                                  unsigned order);

/// Variables [t, Re(x)..., Im(x)...]; 2K rows t - alpha_i <= 0.
LpProblem build_lp(const CiCoefficients& coeffs, std::size_t n_rf);

/// M0 [Re(x); Im(x)] for an arbitrary transmit vector.
std::vector<double> threshold_margins(const CiCoefficients& coeffs,
                                      std::span<const cplx> x);

struct RelaxedSignal {
  std::vector<cplx> x_hat_bb;
  double t_star = 0.0;
  std::vector<double> alphas;  // M0 x0, length 2K
  /// Users whose equivalent channel row is identically zero; their margins
  /// are pinned at zero so t_star <= 0.
  std::vector<std::size_t> unserved_users;
  std::size_t lp_iterations = 0;
};

/// Builds and solves the LP relaxation for one symbol vector. Throws
/// std::runtime_error if the solver does not report an optimum.
RelaxedSignal solve_relaxed(const CMat& h_e, std::span<const cplx> symbols,
                            unsigned order);

struct QuantizedSignal {
  std::vector<cplx> x_bb;  // entries in {+-1/sqrt(2) +- j/sqrt(2)}
};

/// x_n = sgn(Re) / sqrt(2) + j sgn(Im) / sqrt(2), with sgn(0) = +1.
QuantizedSignal quantize_one_bit(std::span<const cplx> x_hat);
QuantizedSignal quantize_one_bit(const RelaxedSignal& relaxed);

/// Relax, solve, quantize.
QuantizedSignal ci_precode_one_bit(const CMat& h_e, std::span<const cplx> symbols,
                                   unsigned order);

/// min_i alpha_i / f with f = ||F_RF x||, the unrelaxed 1-bit objective.
double one_bit_objective(const CiCoefficients& coeffs, const AnalogPrecoder& f_rf,
                         std::span<const cplx> x_bb);

}  // namespace ciprec
