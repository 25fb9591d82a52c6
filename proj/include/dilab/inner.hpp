#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dilab/linalg.hpp"

namespace dilab {

/// A matrix-valued function of one complex variable (evaluable on |z| <= 1).
using MatFn = std::function<CMatrix(Complex)>;

/**
 * Elementary inner factor b(P, lambda) on C^N, determined by a point of the
 * open disc and an orthogonal projection:
 *
 *   b(P,lambda)(z) = (|lambda|/lambda) (lambda - z)/(1 - conj(lambda) z) P + (I - P),
 *   b(P,0)(z)      = z P + (I - P).
 */
struct BPFactor {
  Complex lambda;
  CMatrix P;

  /// Validates |lambda| <= 1 - 1e-12 and that P is an orthogonal projection.
  BPFactor(Complex lambda, CMatrix projection);

  /// Factor whose projection is the span of the given columns.
  static BPFactor from_span(Complex lambda, const CMatrix& columns);

  /// Full projection P = I on C^n.
  static BPFactor full(Complex lambda, int n);

  int dim() const { return static_cast<int>(P.rows()); }

  /// rank(P) as the rounded trace; throws NonIntegerRank beyond 1e-8.
  int rank() const;

  /// True when |lambda| >= 1 - 1e-6 (accepted, but numerically delicate).
  bool near_boundary() const;
};

CMatrix factor_eval(const BPFactor& f, Complex z);

/**
 * Finite Blaschke-Potapov product B(z) = b_1(z) ... b_n(z) V with a constant
 * unitary right factor V. Immutable after construction.
 */
class BPProduct {
 public:
  BPProduct(int n, std::vector<BPFactor> factors, CMatrix v);
  BPProduct(int n, std::vector<BPFactor> factors);  // V = I

  int dim() const { return n_; }
  const std::vector<BPFactor>& factors() const { return factors_; }
  const CMatrix& constant_unitary() const { return v_; }

  /// Product of the first `count` factors only (no V).
  CMatrix prefix_eval(std::size_t count, Complex z) const;

  /// First `depth` factors, same V.
  BPProduct truncate(std::size_t depth) const;

  bool near_boundary() const;

 private:
  int n_;
  std::vector<BPFactor> factors_;
  CMatrix v_;
};

/// Theta(z), the full product including V.
CMatrix product_eval(const BPProduct& b, Complex z);

/// Theta as a closure.
MatFn product_evaluator(const BPProduct& b);

/// Largest singular value of Theta(0). Pure iff < 1 - tol.
double purity_check(const BPProduct& b);

inline constexpr double kPurityTol = 1e-8;

inline bool is_pure(const BPProduct& b, double tol = kPurityTol) {
  return purity_check(b) <= 1.0 - tol;
}

/// dim K_Theta = sum of factor ranks.
int model_dimension(const BPProduct& b);

/**
 * Frostman transform z -> (Theta(z) - lambda I)(I - conj(lambda) Theta(z))^{-1},
 * inner for |lambda| < 1. Throws SingularResolvent at evaluation if the
 * resolvent degenerates (possible only for invalid input products).
 */
MatFn frostman_transform(const MatFn& theta, Complex lambda);
MatFn frostman_transform(const BPProduct& b, Complex lambda);

/// Block-diagonal extension z -> diag(F(z), V) with V constant unitary.
MatFn direct_sum(const MatFn& f, const CMatrix& v);

}  // namespace dilab
