#include "ciprec/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ciprec/rng.hpp"

namespace ciprec {
namespace {

std::string dims(const CMat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-10;
// Entries below this magnitude (unit-norm vectors) count as zero when
// picking the phase reference.
constexpr double kPhaseZero = 1e-13;

double off_diagonal_norm(const CMat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Rotates v (and u, if given) so the first nonzero entry of v is real
// positive.
void fix_phase(std::vector<cplx>& v, std::vector<cplx>* u) {
  for (const cplx& x : v) {
    const double mag = std::abs(x);
    if (mag > kPhaseZero) {
      const cplx rot = std::conj(x) / mag;
      for (cplx& y : v) y *= rot;
      if (u) {
        for (cplx& y : *u) y *= rot;
      }
      return;
    }
  }
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  // a^H b
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

RankDeficientError::RankDeficientError(std::size_t rank, std::size_t rows,
                                       double sigma_ratio)
    : std::runtime_error("matrix is rank deficient: numerical rank " +
                         std::to_string(rank) + " < " + std::to_string(rows) +
                         " rows (sigma_min/sigma_max = " +
                         std::to_string(sigma_ratio) + ")"),
      rank_(rank),
      rows_(rows),
      sigma_ratio_(sigma_ratio) {}

CMat matmul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch " + dims(a) +
                                " * " + dims(b));
  }
  CMat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

std::vector<cplx> matvec(const CMat& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("matvec: dimension mismatch " + dims(a) +
                                " * " + std::to_string(x.size()));
  }
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    cplx s{};
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

CMat adjoint(const CMat& a) {
  CMat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

double frobenius_norm(const CMat& a) {
  double s = 0.0;
  for (const cplx& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

double vector_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& v : x) s += std::norm(v);
  return std::sqrt(s);
}

bool all_finite(const CMat& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

HermEig herm_eig(const CMat& input) {
  if (input.rows() != input.cols()) {
    throw std::invalid_argument("herm_eig: matrix is not square (" +
                                dims(input) + ")");
  }
  if (!all_finite(input)) {
    throw std::invalid_argument("herm_eig: matrix has non-finite entries");
  }
  const std::size_t n = input.rows();
  double max_abs = 0.0;
  for (const cplx& x : input.data()) max_abs = std::max(max_abs, std::abs(x));
  const double herm_tol = kHermitianTolerance * std::max(1.0, max_abs);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(input(i, j) - std::conj(input(j, i))) > herm_tol) {
        throw std::invalid_argument(
            "herm_eig: matrix is not Hermitian at (" + std::to_string(i) +
            "," + std::to_string(j) + ")");
      }
    }
  }

  CMat a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = input(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  CMat v = CMat::identity(n);
  const double scale = frobenius_norm(a);

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiTolerance * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Real Jacobi angle for [[app, mag], [mag, aqq]] after removing the
        // phase of a_pq with diag(1, conj(phase)).
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx gpp = c;
        const cplx gpq = s;
        const cplx gqp = -s * std::conj(phase);
        const cplx gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(a) >= kJacobiTolerance * scale) {
    throw std::runtime_error("herm_eig: Jacobi iteration did not converge in " +
                             std::to_string(kMaxJacobiSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  HermEig out;
  out.values.resize(n);
  out.vectors = CMat(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

ThinSvd thin_svd_wide(const CMat& h, std::size_t num_right_vectors,
                      std::uint64_t seed) {
  const std::size_t k = h.rows();
  const std::size_t nt = h.cols();
  if (k == 0) throw std::invalid_argument("thin_svd_wide: empty matrix");
  if (k > nt) {
    throw std::invalid_argument("thin_svd_wide: expected a wide matrix, got " +
                                dims(h));
  }
  if (num_right_vectors > nt) {
    throw std::invalid_argument(
        "thin_svd_wide: requested " + std::to_string(num_right_vectors) +
        " right vectors but the matrix has only " + std::to_string(nt) +
        " columns");
  }

  const CMat hh = adjoint(h);
  const HermEig eig = herm_eig(matmul(h, hh));

  ThinSvd out;
  out.sigma.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    out.sigma[i] = std::sqrt(std::max(eig.values[i], 0.0));
  const double sigma_max = out.sigma[0];
  out.rank = 0;
  while (out.rank < k && sigma_max > 0.0 &&
         out.sigma[out.rank] > kRankTolerance * sigma_max) {
    ++out.rank;
  }

  std::vector<std::vector<cplx>> ucols(k);
  for (std::size_t i = 0; i < k; ++i) ucols[i] = eig.vectors.col(i);

  std::vector<std::vector<cplx>> vcols;
  for (std::size_t i = 0; i < out.rank; ++i) {
    std::vector<cplx> vi = matvec(hh, ucols[i]);
    for (cplx& x : vi) x /= out.sigma[i];
    fix_phase(vi, &ucols[i]);
    vcols.push_back(std::move(vi));
  }

  const std::size_t total = std::max(num_right_vectors, out.rank);
  CounterRng rng(seed, {StreamTag::kCompletion, 0, 0});
  while (vcols.size() < total) {
    std::vector<cplx> z(nt);
    for (cplx& x : z) x = rng.complex_normal();
    const double initial = vector_norm(z);
    // Two Gram-Schmidt passes for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : vcols) {
        const cplx proj = dot_conj(q, z);
        for (std::size_t m = 0; m < nt; ++m) z[m] -= proj * q[m];
      }
    }
    const double norm = vector_norm(z);
    if (norm <= 1e-6 * initial) continue;
    for (cplx& x : z) x /= norm;
    fix_phase(z, nullptr);
    vcols.push_back(std::move(z));
  }

  out.u = CMat(k, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < k; ++r) out.u(r, c) = ucols[c][r];
  out.v = CMat(nt, vcols.size());
  for (std::size_t c = 0; c < vcols.size(); ++c)
    for (std::size_t r = 0; r < nt; ++r) out.v(r, c) = vcols[c][r];
  return out;
}

CMat pinv_right(const CMat& h) {
  const std::size_t k = h.rows();
  if (k == 0) throw std::invalid_argument("pinv_right: empty matrix");
  if (k > h.cols()) {
    throw RankDeficientError(h.cols(), k, 0.0);
  }
  const CMat hh = adjoint(h);
  const HermEig eig = herm_eig(matmul(h, hh));
  const double sigma_max = std::sqrt(std::max(eig.values.front(), 0.0));
  const double sigma_min = std::sqrt(std::max(eig.values.back(), 0.0));
  if (!(sigma_min > kRankTolerance * sigma_max)) {
    std::size_t rank = 0;
    for (double lambda : eig.values) {
      if (std::sqrt(std::max(lambda, 0.0)) > kRankTolerance * sigma_max &&
          sigma_max > 0.0) {
        ++rank;
      }
    }
    throw RankDeficientError(rank, k,
                             sigma_max > 0.0 ? sigma_min / sigma_max : 0.0);
  }
  // (H H^H)^{-1} = Q diag(1/lambda) Q^H
  CMat inv(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx s{};
      for (std::size_t l = 0; l < k; ++l)
        s += eig.vectors(i, l) * std::conj(eig.vectors(j, l)) / eig.values[l];
      inv(i, j) = s;
    }
  }
  return matmul(hh, inv);
}

}  // namespace ciprec
