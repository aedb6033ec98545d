#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ciprec::oracle {

std::optional<std::vector<double>> solve_dense(std::vector<double> a, std::vector<double> b,
                                               std::size_t n, double tol) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < tol) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

namespace {

// Calls fn(subset) for every k-subset of {0..n-1}.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool is_feasible(const LpProblem& p, std::span<const double> x, double tol) {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < p.lower[j] - tol || x[j] > p.upper[j] + tol) return false;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += p.ineq_matrix(i, j) * x[j];
    if (s > p.ineq_rhs[i] + tol * (1.0 + std::abs(p.ineq_rhs[i]))) return false;
  }
  return true;
}

}  // namespace

VertexResult enumerate_vertices(const LpProblem& p, double feas_tol) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_rows();
  VertexResult best;
  best.objective = std::numeric_limits<double>::infinity();

  // state[j]: 0 = at lower, 1 = at upper, 2 = free.
  std::vector<int> state(n, 0);
  std::vector<double> x(n);
  while (true) {
    bool valid = true;
    std::vector<std::size_t> free_vars;
    for (std::size_t j = 0; j < n; ++j) {
      if (state[j] == 2) {
        free_vars.push_back(j);
      } else {
        const double v = state[j] == 0 ? p.lower[j] : p.upper[j];
        if (!std::isfinite(v)) valid = false;
        x[j] = v;
      }
    }
    const std::size_t f = free_vars.size();
    if (valid && f <= m) {
      for_each_subset(m, f, [&](std::span<const std::size_t> rows) {
        std::vector<double> a(f * f), b(f);
        for (std::size_t r = 0; r < f; ++r) {
          const std::size_t i = rows[r];
          double rhs = p.ineq_rhs[i];
          for (std::size_t j = 0; j < n; ++j)
            if (state[j] != 2) rhs -= p.ineq_matrix(i, j) * x[j];
          b[r] = rhs;
          for (std::size_t c = 0; c < f; ++c) a[r * f + c] = p.ineq_matrix(i, free_vars[c]);
        }
        std::vector<double> trial = x;
        if (f > 0) {
          const auto sol = solve_dense(a, b, f);
          if (!sol) return;
          for (std::size_t c = 0; c < f; ++c) trial[free_vars[c]] = (*sol)[c];
        }
        ++best.vertices_checked;
        if (!is_feasible(p, trial, feas_tol)) return;
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * trial[j];
        if (obj < best.objective) {
          best.objective = obj;
          best.x = trial;
          best.feasible = true;
        }
      });
    }
    std::size_t j = 0;
    while (j < n && state[j] == 2) state[j++] = 0;
    if (j == n) break;
    ++state[j];
  }
  return best;
}

double maxmin_by_vertices(const RMat& m, double a) {
  // Epigraph LP: min -t, t - (M x)_i <= 0. t is boxed by the largest
  // attainable row value so every vertex is finite.
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  double bound = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(m(i, j));
    bound = std::max(bound, s * a);
  }
  LpProblem p;
  p.objective.assign(n + 1, 0.0);
  p.objective[0] = -1.0;
  p.ineq_matrix = RMat(rows, n + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    p.ineq_matrix(i, 0) = 1.0;
    for (std::size_t j = 0; j < n; ++j) p.ineq_matrix(i, j + 1) = -m(i, j);
  }
  p.ineq_rhs.assign(rows, 0.0);
  p.lower.assign(n + 1, -a);
  p.upper.assign(n + 1, a);
  p.lower[0] = -bound - 1.0;
  p.upper[0] = bound + 1.0;
  return -enumerate_vertices(p).objective;
}

double maxmin_by_grid(const RMat& m, double a, std::size_t points, std::size_t passes) {
  const std::size_t n = m.cols();
  auto score = [&](const std::vector<double>& x) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
      worst = std::min(worst, s);
    }
    return worst;
  };
  std::vector<double> center(n, 0.0);
  std::vector<double> best_x = center;
  double best = score(center);
  double radius = a;
  std::vector<std::size_t> digit(n);
  std::vector<double> x(n);
  for (std::size_t pass = 0; pass < passes; ++pass) {
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      for (std::size_t j = 0; j < n; ++j) {
        const double offset =
            points == 1 ? 0.0 : -radius + 2.0 * radius * static_cast<double>(digit[j]) / (points - 1);
        x[j] = std::clamp(center[j] + offset, -a, a);
      }
      const double s = score(x);
      if (s > best) {
        best = s;
        best_x = x;
      }
      std::size_t j = 0;
      while (j < n && ++digit[j] == points) digit[j++] = 0;
      if (j == n) break;
    }
    center = best_x;
    radius *= 0.5;
  }
  return best;
}

std::pair<double, double> oblique_coordinates(cplx y, cplx s_a, cplx s_b) {
  const double det = s_a.real() * s_b.imag() - s_b.real() * s_a.imag();
  const double alpha_a = (y.real() * s_b.imag() - s_b.real() * y.imag()) / det;
  const double alpha_b = (s_a.real() * y.imag() - y.real() * s_a.imag()) / det;
  return {alpha_a, alpha_b};
}

double exhaustive_one_bit(const RMat& m0, const CMat& f_rf) {
  const std::size_t n = f_rf.cols();
  const double level = 1.0 / std::sqrt(2.0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<cplx> x(n);
  const std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = {(code >> (2 * k)) & 1 ? -level : level, (code >> (2 * k + 1)) & 1 ? -level : level};
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m0.rows(); ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m0(i, k) * x[k].real() + m0(i, n + k) * x[k].imag();
      worst = std::min(worst, s);
    }
    double f2 = 0.0;
    for (std::size_t r = 0; r < f_rf.rows(); ++r) {
      cplx acc{};
      for (std::size_t k = 0; k < n; ++k) acc += f_rf(r, k) * x[k];
      f2 += std::norm(acc);
    }
    best = std::max(best, worst / std::sqrt(f2));
  }
  return best;
}

}  // namespace ciprec::oracle
