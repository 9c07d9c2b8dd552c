#include "ferroqmc/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ferroqmc;

TEST(SymmetricEigen, DiagonalisesKnownSpectrum) {
  // [[2,1],[1,2]] has eigenvalues 1 and 3.
  DenseMatrix a(2);
  a(0, 0) = a(1, 1) = 2.0;
  a(0, 1) = a(1, 0) = 1.0;
  const SymmetricEigen e = symmetric_eigen(a);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
}

TEST(SymmetricEigen, ReconstructsRandomSymmetric) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (std::size_t dim : {3u, 8u, 17u}) {
    DenseMatrix a(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) a(i, j) = a(j, i) = g(rng);
    const SymmetricEigen e = symmetric_eigen(a);
    EXPECT_LT(max_abs_diff(apply_spectral(e, [](double x) { return x; }), a), 1e-12);
    EXPECT_LT(max_abs_diff(e.vectors.transpose() * e.vectors, DenseMatrix::identity(dim)), 1e-12);
    for (std::size_t k = 1; k < dim; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(SymLog, InvertsExp) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  DenseMatrix a(6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i; j < 6; ++j) a(i, j) = a(j, i) = 0.3 * g(rng);
  EXPECT_LT(max_abs_diff(sym_log(sym_exp(a)), a), 1e-12);
}

TEST(SymLog, RejectsSingular) {
  DenseMatrix a = DenseMatrix::identity(2);
  a(1, 1) = 0.0;
  EXPECT_THROW(sym_log(a), Error);
}

TEST(Kron, SignificanceOrder) {
  DenseMatrix x(2), i2 = DenseMatrix::identity(2);
  x(0, 1) = x(1, 0) = 1.0;
  const DenseMatrix k = kron(x, i2);  // flips the high bit
  EXPECT_EQ(k(2, 0), 1.0);
  EXPECT_EQ(k(1, 0), 0.0);
}
