#include "ciprec/ciprecode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ciprec {
namespace {
constexpr double kMinDenominator = 1e-12;
}

CiCoefficients build_coefficients(const CMat& h_e, std::span<const cplx> symbols,
                                  unsigned order) {
  const std::size_t k_users = h_e.rows();
  const std::size_t n_rf = h_e.cols();
  if (symbols.size() != k_users) {
    throw std::invalid_argument("build_coefficients: " + std::to_string(symbols.size()) +
                                " symbols for " + std::to_string(k_users) + " users");
  }
  if (n_rf == 0) throw std::invalid_argument("build_coefficients: no RF chains");

  CiCoefficients out;
  out.users.resize(k_users);
  out.m0 = RMat(2 * k_users, 2 * n_rf);
  for (std::size_t k = 0; k < k_users; ++k) {
    const ThresholdDecomposition dec = decompose(symbols[k], order);
    UserCoefficients& u = out.users[k];
    u.a_re = dec.s_a.real();
    u.a_im = dec.s_a.imag();
    u.b_re = dec.s_b.real();
    u.b_im = dec.s_b.imag();
    u.denominator = u.a_re * u.b_im - u.a_im * u.b_re;
    if (std::abs(u.denominator) < kMinDenominator) {
      throw std::invalid_argument("build_coefficients: degenerate thresholds for user " +
                                  std::to_string(k));
    }
    const double inv = 1.0 / u.denominator;
    u.a.resize(n_rf);
    u.b.resize(n_rf);
    u.c.resize(n_rf);
    u.d.resize(n_rf);
    for (std::size_t n = 0; n < n_rf; ++n) {
      const double hr = h_e(k, n).real();
      const double hi = h_e(k, n).imag();
      u.a[n] = (u.b_im * hr - u.b_re * hi) * inv;
      u.b[n] = -(u.b_im * hi + u.b_re * hr) * inv;
      u.c[n] = (u.a_re * hi - u.a_im * hr) * inv;
      u.d[n] = (u.a_re * hr + u.a_im * hi) * inv;
      out.m0(k, n) = u.a[n];
      out.m0(k, n_rf + n) = u.b[n];
      out.m0(k_users + k, n) = u.c[n];
      out.m0(k_users + k, n_rf + n) = u.d[n];
    }
  }
  return out;
}

LpProblem build_lp(const CiCoefficients& coeffs, std::size_t n_rf) {
  if (coeffs.rf_chains() != n_rf) {
    throw std::invalid_argument("build_lp: coefficients are for " +
                                std::to_string(coeffs.rf_chains()) + " RF chains, not " +
                                std::to_string(n_rf));
  }
  const std::size_t rows = coeffs.m0.rows();
  const std::size_t vars = 2 * n_rf + 1;
  LpProblem p;
  p.objective.assign(vars, 0.0);
  p.objective[0] = -1.0;
  p.ineq_matrix = RMat(rows, vars);
  for (std::size_t i = 0; i < rows; ++i) {
    p.ineq_matrix(i, 0) = 1.0;
    for (std::size_t j = 0; j < 2 * n_rf; ++j) p.ineq_matrix(i, j + 1) = -coeffs.m0(i, j);
  }
  p.ineq_rhs.assign(rows, 0.0);
  p.lower.assign(vars, -kOneBitLevel);
  p.upper.assign(vars, kOneBitLevel);
  p.lower[0] = -kInf;
  p.upper[0] = kInf;
  return p;
}

std::vector<double> threshold_margins(const CiCoefficients& coeffs,
                                      std::span<const cplx> x) {
  const std::size_t n_rf = coeffs.rf_chains();
  if (x.size() != n_rf) {
    throw std::invalid_argument("threshold_margins: signal length " +
                                std::to_string(x.size()) + " != " + std::to_string(n_rf));
  }
  std::vector<double> out(coeffs.m0.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto row = coeffs.m0.row(i);
    double s = 0.0;
    for (std::size_t n = 0; n < n_rf; ++n) s += row[n] * x[n].real() + row[n_rf + n] * x[n].imag();
    out[i] = s;
  }
  return out;
}

RelaxedSignal solve_relaxed(const CMat& h_e, std::span<const cplx> symbols,
                            unsigned order) {
  const CiCoefficients coeffs = build_coefficients(h_e, symbols, order);
  const std::size_t n_rf = h_e.cols();
  const LpSolution sol = solve(build_lp(coeffs, n_rf));
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error("solve_relaxed: LP solver returned '" +
                             std::string(to_string(sol.status)) + "' after " +
                             std::to_string(sol.iterations) + " iterations");
  }
  RelaxedSignal out;
  out.t_star = sol.x[0];
  out.lp_iterations = sol.iterations;
  out.x_hat_bb.resize(n_rf);
  for (std::size_t n = 0; n < n_rf; ++n) out.x_hat_bb[n] = {sol.x[1 + n], sol.x[1 + n_rf + n]};
  out.alphas = threshold_margins(coeffs, out.x_hat_bb);
  for (std::size_t k = 0; k < h_e.rows(); ++k) {
    const auto row = h_e.row(k);
    if (std::all_of(row.begin(), row.end(), [](const cplx& v) { return v == cplx{}; })) {
      out.unserved_users.push_back(k);
    }
  }
  return out;
}

QuantizedSignal quantize_one_bit(std::span<const cplx> x_hat) {
  QuantizedSignal q;
  q.x_bb.reserve(x_hat.size());
  for (const cplx& v : x_hat) {
    q.x_bb.emplace_back(v.real() >= 0.0 ? kOneBitLevel : -kOneBitLevel,
                        v.imag() >= 0.0 ? kOneBitLevel : -kOneBitLevel);
  }
  return q;
}

QuantizedSignal quantize_one_bit(const RelaxedSignal& relaxed) {
  return quantize_one_bit(relaxed.x_hat_bb);
}

QuantizedSignal ci_precode_one_bit(const CMat& h_e, std::span<const cplx> symbols,
                                   unsigned order) {
  return quantize_one_bit(solve_relaxed(h_e, symbols, order));
}

double one_bit_objective(const CiCoefficients& coeffs, const AnalogPrecoder& f_rf,
                         std::span<const cplx> x_bb) {
  const std::vector<double> margins = threshold_margins(coeffs, x_bb);
  const double f = vector_norm(matvec(f_rf.f_rf, x_bb));
  if (!(f > 0.0)) throw std::invalid_argument("one_bit_objective: zero transmit power");
  return *std::min_element(margins.begin(), margins.end()) / f;
}

}  // namespace ciprec
