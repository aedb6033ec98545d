#pragma once

// Dense bounded-variable revised simplex.
//
//   minimize    c . x
//   subject to  A x <= b
//               lower <= x <= upper      (either side may be infinite)
//
// Box bounds are handled by the ratio test, not as extra rows, so the basis
// is only as large as the number of inequality rows. Pricing and the ratio
// test both follow Bland's rule, which rules out cycling.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

#include "ciprec/numlin.hpp"

namespace ciprec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view to_string(LpStatus status);

struct LpProblem {
  std::vector<double> objective;  // c
  RMat ineq_matrix;               // A, rows x vars
  std::vector<double> ineq_rhs;   // b
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return ineq_rhs.size(); }

  /// Throws std::invalid_argument on inconsistent sizes, NaNs, or
  /// lower > upper.
  void validate() const;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective_value = 0.0;
  /// b - A x; all >= -1e-8 at an optimal solution.
  std::vector<double> residuals;
  std::size_t iterations = 0;

  /// Largest violation of any row or bound at x.
  double max_violation(const LpProblem& problem) const;
};

struct LpOptions {
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-9;
  /// 0 selects 50 * (vars + rows).
  std::size_t max_iterations = 0;
  /// Basis inverse is rebuilt from scratch every this many pivots.
  std::size_t refactor_interval = 32;
};

LpSolution solve(const LpProblem& problem, const LpOptions& options = {});

/// Plain-text dump for cross-checking with external solvers:
///
///   # ciprec dense LP
///   vars <n>
///   rows <m>
///   objective c_1 ... c_n
///   row a_i1 ... a_in <= b_i        (m lines)
///   lower l_1 ... l_n               (-inf allowed)
///   upper u_1 ... u_n               (inf allowed)
///
/// Numbers are written with 17 significant digits so the dump round-trips.
void write_lp_text(std::ostream& out, const LpProblem& problem);
LpProblem read_lp_text(std::istream& in);

}  // namespace ciprec
