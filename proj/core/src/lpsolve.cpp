#include "ciprec/lpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ciprec {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

void LpProblem::validate() const {
  const std::size_t n = num_vars();
  const std::size_t m = num_rows();
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("LpProblem: " + what);
  };
  if (lower.size() != n || upper.size() != n) fail("bound vectors must have one entry per variable");
  if (m > 0 && (ineq_matrix.rows() != m || ineq_matrix.cols() != n)) {
    fail("constraint matrix is " + std::to_string(ineq_matrix.rows()) + "x" +
         std::to_string(ineq_matrix.cols()) + ", expected " + std::to_string(m) +
         "x" + std::to_string(n));
  }
  if (m == 0 && ineq_matrix.rows() != 0) fail("constraint matrix has rows but rhs is empty");
  for (double c : objective)
    if (!std::isfinite(c)) fail("objective entries must be finite");
  for (double a : ineq_matrix.data())
    if (!std::isfinite(a)) fail("constraint matrix entries must be finite");
  for (double b : ineq_rhs)
    if (!std::isfinite(b)) fail("right-hand side entries must be finite");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) fail("bounds must not be NaN");
    if (lower[j] > upper[j]) fail("lower > upper for variable " + std::to_string(j));
    if (lower[j] == kInf || upper[j] == -kInf) fail("infeasible infinite bound for variable " + std::to_string(j));
  }
}

double LpSolution::max_violation(const LpProblem& p) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < p.num_vars(); ++j) ax += p.ineq_matrix(i, j) * x[j];
    worst = std::max(worst, ax - p.ineq_rhs[i]);
  }
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    worst = std::max(worst, p.lower[j] - x[j]);
    worst = std::max(worst, x[j] - p.upper[j]);
  }
  return worst;
}

namespace {

enum class VarState { kBasic, kAtLower, kAtUpper, kFreeZero };

// Column layout: [0, n) structural, [n, n+m) slacks (+e_i, bounds [0, inf)),
// then one artificial per initially violated row (-e_i, bounds [0, inf)).
class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& p, const LpOptions& o)
      : p_(p), opt_(o), n_(p.num_vars()), m_(p.num_rows()) {
    limit_ = opt_.max_iterations ? opt_.max_iterations : 50 * (n_ + m_);
  }

  LpSolution run() {
    initialize();

    if (!artificial_rows_.empty()) {
      std::fill(cost_.begin(), cost_.end(), 0.0);
      for (std::size_t a = 0; a < artificial_rows_.size(); ++a) cost_[n_ + m_ + a] = 1.0;
      const LpStatus s = iterate();
      if (s == LpStatus::kIterationLimit) return finish(s);
      double infeasibility = 0.0;
      for (std::size_t a = 0; a < artificial_rows_.size(); ++a)
        infeasibility += std::max(0.0, x_[n_ + m_ + a]);
      double bscale = 1.0;
      for (double b : p_.ineq_rhs) bscale = std::max(bscale, std::abs(b));
      if (infeasibility > opt_.feasibility_tolerance * bscale) {
        return finish(LpStatus::kInfeasible);
      }
      // Pin artificials to zero for phase 2.
      for (std::size_t a = 0; a < artificial_rows_.size(); ++a) {
        const std::size_t j = n_ + m_ + a;
        upper_[j] = 0.0;
        if (state_[j] != VarState::kBasic) {
          state_[j] = VarState::kAtLower;
          x_[j] = 0.0;
        }
      }
      refactor();
    }

    std::fill(cost_.begin(), cost_.end(), 0.0);
    std::copy(p_.objective.begin(), p_.objective.end(), cost_.begin());
    return finish(iterate());
  }

 private:
  std::size_t total() const { return n_ + m_ + artificial_rows_.size(); }

  // Dense column j of [A I -E].
  void column(std::size_t j, std::vector<double>& out) const {
    out.assign(m_, 0.0);
    if (j < n_) {
      for (std::size_t i = 0; i < m_; ++i) out[i] = p_.ineq_matrix(i, j);
    } else if (j < n_ + m_) {
      out[j - n_] = 1.0;
    } else {
      out[artificial_rows_[j - n_ - m_]] = -1.0;
    }
  }

  double column_dot(std::size_t j, const std::vector<double>& y) const {
    if (j < n_) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i) s += y[i] * p_.ineq_matrix(i, j);
      return s;
    }
    if (j < n_ + m_) return y[j - n_];
    return -y[artificial_rows_[j - n_ - m_]];
  }

  void initialize() {
    lower_.assign(n_ + m_, 0.0);
    upper_.assign(n_ + m_, kInf);
    std::copy(p_.lower.begin(), p_.lower.end(), lower_.begin());
    std::copy(p_.upper.begin(), p_.upper.end(), upper_.begin());
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, VarState::kAtLower);

    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j])) {
        state_[j] = VarState::kAtLower;
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        state_[j] = VarState::kAtUpper;
        x_[j] = upper_[j];
      } else {
        state_[j] = VarState::kFreeZero;
        x_[j] = 0.0;
      }
    }

    basis_.assign(m_, 0);
    std::vector<double> sign(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double r = p_.ineq_rhs[i];
      for (std::size_t j = 0; j < n_; ++j) r -= p_.ineq_matrix(i, j) * x_[j];
      if (r >= -opt_.feasibility_tolerance) {
        basis_[i] = n_ + i;
        state_[n_ + i] = VarState::kBasic;
        x_[n_ + i] = r;
      } else {
        const std::size_t a = n_ + m_ + artificial_rows_.size();
        artificial_rows_.push_back(i);
        lower_.push_back(0.0);
        upper_.push_back(kInf);
        x_.push_back(-r);
        state_.push_back(VarState::kBasic);
        basis_[i] = a;
        sign[i] = -1.0;
      }
    }
    cost_.assign(total(), 0.0);
    binv_ = RMat(m_, m_);
    for (std::size_t i = 0; i < m_; ++i) binv_(i, i) = sign[i];
    since_refactor_ = 0;
  }

  // Rebuilds B^{-1} by Gauss-Jordan elimination and recomputes x_B.
  void refactor() {
    RMat b(m_, m_);
    std::vector<double> col;
    for (std::size_t k = 0; k < m_; ++k) {
      column(basis_[k], col);
      for (std::size_t i = 0; i < m_; ++i) b(i, k) = col[i];
    }
    RMat inv = RMat::identity(m_);
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m_; ++r)
        if (std::abs(b(r, c)) > std::abs(b(piv, c))) piv = r;
      if (std::abs(b(piv, c)) < 1e-14) {
        throw std::runtime_error("lpsolve: basis matrix became singular");
      }
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b(piv, k), b(c, k));
          std::swap(inv(piv, k), inv(c, k));
        }
      }
      const double d = b(c, c);
      for (std::size_t k = 0; k < m_; ++k) {
        b(c, k) /= d;
        inv(c, k) /= d;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = b(r, c);
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b(r, k) -= f * b(c, k);
          inv(r, k) -= f * inv(c, k);
        }
      }
    }
    binv_ = std::move(inv);

    std::vector<double> rhs(p_.ineq_rhs);
    for (std::size_t j = 0; j < total(); ++j) {
      if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
      column(j, col);
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= col[i] * x_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += binv_(i, k) * rhs[k];
      x_[basis_[i]] = s;
    }
    since_refactor_ = 0;
  }

  LpStatus iterate() {
    std::vector<double> y(m_), alpha(m_), col;
    while (true) {
      if (iterations_ >= limit_) return LpStatus::kIterationLimit;
      if (since_refactor_ >= opt_.refactor_interval) refactor();

      // y^T = c_B^T B^{-1}
      for (std::size_t k = 0; k < m_; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) s += cost_[basis_[i]] * binv_(i, k);
        y[k] = s;
      }

      // Bland: lowest-index nonbasic variable with an improving direction.
      std::size_t entering = total();
      double dir = 0.0;
      for (std::size_t j = 0; j < total(); ++j) {
        const VarState st = state_[j];
        if (st == VarState::kBasic) continue;
        if (st != VarState::kFreeZero && upper_[j] - lower_[j] <= 0.0) continue;
        const double d = cost_[j] - column_dot(j, y);
        if (st == VarState::kAtLower && d < -opt_.optimality_tolerance) {
          entering = j;
          dir = 1.0;
        } else if (st == VarState::kAtUpper && d > opt_.optimality_tolerance) {
          entering = j;
          dir = -1.0;
        } else if (st == VarState::kFreeZero && std::abs(d) > opt_.optimality_tolerance) {
          entering = j;
          dir = d < 0.0 ? 1.0 : -1.0;
        }
        if (entering != total()) break;
      }
      if (entering == total()) return LpStatus::kOptimal;

      column(entering, col);
      for (std::size_t i = 0; i < m_; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += binv_(i, k) * col[k];
        alpha[i] = s;
      }

      // Ratio test. Basic variable i moves by -dir * alpha_i per unit step.
      double step = upper_[entering] - lower_[entering];  // bound flip
      if (!std::isfinite(step)) step = kInf;
      std::size_t leave_pos = m_;
      bool leave_to_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const double delta = -dir * alpha[i];
        const std::size_t b = basis_[i];
        double ratio;
        bool to_upper;
        if (delta < -opt_.pivot_tolerance && std::isfinite(lower_[b])) {
          ratio = (x_[b] - lower_[b]) / -delta;
          to_upper = false;
        } else if (delta > opt_.pivot_tolerance && std::isfinite(upper_[b])) {
          ratio = (upper_[b] - x_[b]) / delta;
          to_upper = true;
        } else {
          continue;
        }
        ratio = std::max(ratio, 0.0);
        if (ratio < step - 1e-12) {
          step = ratio;
        } else if (!(leave_pos != m_ && ratio <= step + 1e-12 && b < basis_[leave_pos])) {
          continue;
        }
        leave_pos = i;
        leave_to_upper = to_upper;
      }
      if (step == kInf) return LpStatus::kUnbounded;

      ++iterations_;
      x_[entering] += dir * step;
      for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] -= dir * alpha[i] * step;

      if (leave_pos == m_) {
        // Entering variable ran to its opposite bound.
        if (dir > 0.0) {
          state_[entering] = VarState::kAtUpper;
          x_[entering] = upper_[entering];
        } else {
          state_[entering] = VarState::kAtLower;
          x_[entering] = lower_[entering];
        }
        continue;
      }

      const std::size_t leaving = basis_[leave_pos];
      if (leave_to_upper) {
        state_[leaving] = VarState::kAtUpper;
        x_[leaving] = upper_[leaving];
      } else {
        state_[leaving] = VarState::kAtLower;
        x_[leaving] = lower_[leaving];
      }
      state_[entering] = VarState::kBasic;
      basis_[leave_pos] = entering;

      const double piv = alpha[leave_pos];
      for (std::size_t k = 0; k < m_; ++k) binv_(leave_pos, k) /= piv;
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == leave_pos || alpha[i] == 0.0) continue;
        const double f = alpha[i];
        for (std::size_t k = 0; k < m_; ++k) binv_(i, k) -= f * binv_(leave_pos, k);
      }
      ++since_refactor_;
    }
  }

  LpSolution finish(LpStatus status) {
    if (m_ > 0) refactor();
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations_;
    sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective_value += p_.objective[j] * sol.x[j];
    sol.residuals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double r = p_.ineq_rhs[i];
      for (std::size_t j = 0; j < n_; ++j) r -= p_.ineq_matrix(i, j) * sol.x[j];
      sol.residuals[i] = r;
    }
    return sol;
  }

  const LpProblem& p_;
  const LpOptions& opt_;
  std::size_t n_;
  std::size_t m_;
  std::size_t limit_ = 0;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;

  std::vector<std::size_t> artificial_rows_;
  std::vector<double> lower_, upper_, x_, cost_;
  std::vector<VarState> state_;
  std::vector<std::size_t> basis_;
  RMat binv_;
};

std::string format_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& token, std::size_t line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::invalid_argument("read_lp_text: line " + std::to_string(line) +
                                ": bad number '" + token + "'");
  }
  return v;
}

}  // namespace

LpSolution solve(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  return BoundedSimplex(problem, options).run();
}

void write_lp_text(std::ostream& out, const LpProblem& p) {
  p.validate();
  out << "# ciprec dense LP\n";
  out << "vars " << p.num_vars() << "\n";
  out << "rows " << p.num_rows() << "\n";
  out << "objective";
  for (double c : p.objective) out << ' ' << format_double(c);
  out << "\n";
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    out << "row";
    for (double a : p.ineq_matrix.row(i)) out << ' ' << format_double(a);
    out << " <= " << format_double(p.ineq_rhs[i]) << "\n";
  }
  out << "lower";
  for (double l : p.lower) out << ' ' << format_double(l);
  out << "\nupper";
  for (double u : p.upper) out << ' ' << format_double(u);
  out << "\n";
}

LpProblem read_lp_text(std::istream& in) {
  LpProblem p;
  std::size_t n = 0, m = 0;
  bool have_vars = false, have_rows = false;
  std::vector<double> a;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("read_lp_text: line " + std::to_string(lineno) + ": " + what);
  };
  auto read_vector = [&](std::istringstream& ls, std::size_t count) {
    std::vector<double> v;
    std::string tok;
    while (v.size() < count && ls >> tok) v.push_back(parse_double(tok, lineno));
    if (v.size() != count) fail("expected " + std::to_string(count) + " numbers");
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "vars") {
      if (!(ls >> n)) fail("bad vars count");
      have_vars = true;
    } else if (key == "rows") {
      if (!(ls >> m)) fail("bad rows count");
      have_rows = true;
    } else if (!have_vars || !have_rows) {
      fail("'vars' and 'rows' must come first");
    } else if (key == "objective") {
      p.objective = read_vector(ls, n);
    } else if (key == "row") {
      const auto r = read_vector(ls, n);
      std::string le, rhs;
      if (!(ls >> le >> rhs) || le != "<=") fail("row must end with '<= b'");
      a.insert(a.end(), r.begin(), r.end());
      p.ineq_rhs.push_back(parse_double(rhs, lineno));
    } else if (key == "lower") {
      p.lower = read_vector(ls, n);
    } else if (key == "upper") {
      p.upper = read_vector(ls, n);
    } else {
      fail("unknown record '" + key + "'");
    }
  }
  if (p.ineq_rhs.size() != m) {
    throw std::invalid_argument("read_lp_text: expected " + std::to_string(m) +
                                " rows, found " + std::to_string(p.ineq_rhs.size()));
  }
  p.ineq_matrix = RMat(m, n, std::move(a));
  p.validate();
  return p;
}

}  // namespace ciprec
