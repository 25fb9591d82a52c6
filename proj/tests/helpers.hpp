#pragma once

#include <cstdint>
#include <vector>

#include "dilab/inner.hpp"
#include "dilab/linalg.hpp"
#include "dilab/rng.hpp"

namespace dilab::testing {

inline CMatrix random_matrix(int rows, int cols, Rng& rng) {
  CMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = rng.cnormal();
  return a;
}

inline CMatrix random_hermitian(int n, Rng& rng) {
  const CMatrix a = random_matrix(n, n, rng);
  return (a + a.adjoint()) / 2.0;
}

inline CMatrix random_projection(int n, int rank, Rng& rng) {
  const CMatrix u = haar_unitary(n, rng);
  return u.leftCols(rank) * u.leftCols(rank).adjoint();
}

inline Complex random_disc_point(Rng& rng, double radius) {
  // Rejection from the square keeps the distribution rotation-invariant.
  for (;;) {
    const double x = 2.0 * rng.uniform() - 1.0;
    const double y = 2.0 * rng.uniform() - 1.0;
    if (x * x + y * y <= 1.0) return radius * Complex(x, y);
  }
}

/// Random pure Blaschke-Potapov product with the requested factor ranks.
inline BPProduct random_product(int n, const std::vector<int>& ranks, Rng& rng,
                                double radius = 0.75, bool haar_constant = true) {
  for (;;) {
    std::vector<BPFactor> factors;
    factors.reserve(ranks.size());
    for (int r : ranks)
      factors.emplace_back(random_disc_point(rng, radius),
                           random_projection(n, r, rng));
    CMatrix v = haar_constant ? haar_unitary(n, rng) : CMatrix::Identity(n, n);
    BPProduct b(n, std::move(factors), std::move(v));
    if (is_pure(b)) return b;
  }
}

/// Random factor-rank pattern with sum d.
inline std::vector<int> random_ranks(int n, int d, Rng& rng) {
  std::vector<int> ranks;
  int left = d;
  while (left > 0) {
    const int max_r = std::min(n, left);
    const int r = 1 + static_cast<int>(rng.uniform() * max_r);
    ranks.push_back(std::min(r, left));
    left -= ranks.back();
  }
  return ranks;
}

/// Random m x m contraction with both defect ranks exactly `defect`.
inline CMatrix random_contraction_with_defect(int m, int defect, Rng& rng) {
  const CMatrix u1 = haar_unitary(m, rng);
  const CMatrix u2 = haar_unitary(m, rng);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < defect; ++i) s(i) = 0.1 + 0.8 * rng.uniform();
  return u1 * s.asDiagonal() * u2.adjoint();
}

/// Scalar product z^n (n Jordan-block factors at the origin).
inline BPProduct monomial_product(int n) {
  std::vector<BPFactor> factors;
  for (int j = 0; j < n; ++j) factors.push_back(BPFactor::full(0.0, 1));
  return BPProduct(1, std::move(factors));
}

}  // namespace dilab::testing
