#pragma once

// Small dense linear algebra used throughout the library. Matrices here are
// at most a few hundred columns wide and a handful of rows tall, so
// everything is plain row-major storage and straightforward loops.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ciprec {

using cplx = std::complex<double>;

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("Matrix: entry count " +
                                  std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows_) +
                                  "x" + std::to_string(cols_));
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw std::invalid_argument("Matrix: ragged initializer rows");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<T> col(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMat = Matrix<cplx>;
using RMat = Matrix<double>;

/// Thrown when a right inverse is requested for a matrix without full row
/// rank.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(std::size_t rank, std::size_t rows, double sigma_ratio);
  std::size_t rank() const { return rank_; }
  std::size_t rows() const { return rows_; }
  double sigma_ratio() const { return sigma_ratio_; }

 private:
  std::size_t rank_;
  std::size_t rows_;
  double sigma_ratio_;
};

CMat matmul(const CMat& a, const CMat& b);
std::vector<cplx> matvec(const CMat& a, std::span<const cplx> x);
CMat adjoint(const CMat& a);
double frobenius_norm(const CMat& a);
double vector_norm(std::span<const cplx> x);
bool all_finite(const CMat& a);

struct HermEig {
  std::vector<double> values;  // descending
  CMat vectors;                // column i pairs with values[i]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Stops once the off-diagonal Frobenius norm falls below
/// 1e-12 * ||A||_F; throws if that takes more than 100 sweeps.
HermEig herm_eig(const CMat& a);

struct ThinSvd {
  CMat u;                     // K x K
  std::vector<double> sigma;  // K values, descending
  CMat v;                     // Nt x max(rank, requested) columns
  std::size_t rank = 0;
};

/// Thin SVD of a wide matrix (K <= Nt) through the K x K problem H H^H.
///
/// The first `rank` columns of v are H^H u_i / sigma_i. Extra columns up to
/// `num_right_vectors` are an orthonormal completion from seeded random
/// complex vectors (Gram-Schmidt), so the result is deterministic in `seed`.
/// Every v_i is rotated so its first nonzero entry is real positive, with u_i
/// rotated to match for i < rank.
ThinSvd thin_svd_wide(const CMat& h, std::size_t num_right_vectors,
                      std::uint64_t seed);

/// H^H (H H^H)^{-1}. Throws RankDeficientError when the smallest singular
/// value is at or below 1e-10 times the largest.
CMat pinv_right(const CMat& h);

inline constexpr double kRankTolerance = 1e-10;

}  // namespace ciprec
