#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ferroqmc/error.hpp"

namespace ferroqmc {

/// Row-major dense real square matrix. Every operator in this library is real
/// in the computational basis, so no complex type is needed.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  static DenseMatrix identity(std::size_t dim) {
    DenseMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < dim_ && j < dim_);
    return data_[i * dim_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < dim_ && j < dim_);
    return data_[i * dim_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  std::span<const double> data() const noexcept { return data_; }

  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_symmetric(double tol = 1e-12) const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

  DenseMatrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  DenseMatrix& operator+=(const DenseMatrix& o) {
    assert(o.dim_ == dim_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    assert(o.dim_ == dim_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    assert(a.dim_ == b.dim_);
    const std::size_t n = a.dim_;
    DenseMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* brow = b.data_.data() + k * n;
        double* crow = c.data_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  assert(a.dim() == b.dim());
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

/// Kronecker product a (x) b with a as the more significant factor.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  DenseMatrix k(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t p = 0; p < nb; ++p)
        for (std::size_t q = 0; q < nb; ++q) k(i * nb + p, j * nb + q) = a(i, j) * b(p, q);
  return k;
}

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k is the eigenvector of values[k]
};

/// Eigendecomposition of a real symmetric matrix.
inline SymmetricEigen symmetric_eigen(const DenseMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return {{}, DenseMatrix(0)};
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      a.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigensolveFailure, "symmetric eigensolve did not converge");
  SymmetricEigen out{std::vector<double>(n), DenseMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, k) = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  return out;
}

inline DenseMatrix apply_spectral(const SymmetricEigen& eig,
                                  const std::function<double(double)>& f) {
  const std::size_t n = eig.vectors.dim();
  DenseMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = eig.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * eig.vectors(j, k);
    }
  }
  return out;
}

/// Principal logarithm of a symmetric positive-definite matrix. The input is
/// symmetrised first so that round-off asymmetry from products does not leak
/// into the eigenvectors.
inline DenseMatrix sym_log(const DenseMatrix& a, double min_eigenvalue = 1e-12) {
  DenseMatrix s = 0.5 * (a + a.transpose());
  SymmetricEigen eig = symmetric_eigen(s);
  for (double lambda : eig.values)
    if (lambda <= min_eigenvalue)
      throw Error(ErrorCode::NotPositiveDefinite, "matrix logarithm needs a positive-definite input");
  return apply_spectral(eig, [](double x) { return std::log(x); });
}

inline DenseMatrix sym_exp(const DenseMatrix& a) {
  DenseMatrix s = 0.5 * (a + a.transpose());
  return apply_spectral(symmetric_eigen(s), [](double x) { return std::exp(x); });
}

/// Spectral norm of a symmetric matrix, i.e. the largest |eigenvalue|.
inline double sym_norm(const DenseMatrix& a) {
  DenseMatrix s = 0.5 * (a + a.transpose());
  double m = 0.0;
  for (double x : symmetric_eigen(s).values) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace ferroqmc
