#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dilab/inner.hpp"
#include "dilab/linalg.hpp"

namespace dilab {

/// A C^N-valued function of one complex variable.
using VecFn = std::function<CVector(Complex)>;

/// Quadrature settings for H^2 inner products on the circle.
struct QuadratureSpec {
  int initial_order = 512;
  double tol = 1e-12;
  static constexpr int kMaxOrder = 1 << 16;
  static constexpr double kFailTol = 1e-9;
};

/**
 * H^2(C^N) inner product <f, g> by trapezoidal quadrature on the unit circle
 * at a fixed order M. Geometrically accurate for functions analytic in a
 * neighborhood of the closed disc.
 */
Complex h2_inner(const VecFn& f, const VecFn& g, int order);

/**
 * Adaptive version: doubles the order until successive values differ by less
 * than spec.tol, capping at 2^16. Throws NoConvergence if the final
 * difference still exceeds 1e-9.
 */
Complex h2_inner_adaptive(const VecFn& f, const VecFn& g,
                          const QuadratureSpec& spec = {});

/**
 * Orthonormal basis of K_Theta built from the factor sequence
 * (Takenaka-Malmquist-Walsh elements): element k is
 *
 *   e_k(z) = B_{j(k)-1}(z) * sqrt(1-|lambda_j|^2)/(1 - conj(lambda_j) z) * p_k,
 *
 * with p_k running over an orthonormal basis of ran P_j, corrected by the
 * inverse square root of the numerically computed Gram matrix.
 */
class TMWBasis {
 public:
  TMWBasis(std::shared_ptr<const BPProduct> product, QuadratureSpec spec,
           CMatrix correction, std::vector<int> factor_index,
           std::vector<CVector> range_vectors);

  int dim() const { return static_cast<int>(factor_index_.size()); }
  int ambient_dim() const { return product_->dim(); }
  const QuadratureSpec& quadrature() const { return spec_; }
  const BPProduct& product() const { return *product_; }

  /// Uncorrected element l evaluated at z.
  CVector raw_eval(int l, Complex z) const;

  /// Corrected orthonormal element k as a closure.
  VecFn element(int k) const;

  /// N x d matrix of all corrected elements at z.
  CMatrix eval_all(Complex z) const;

 private:
  std::shared_ptr<const BPProduct> product_;
  QuadratureSpec spec_;
  CMatrix correction_;             // d x d, element k = sum_l raw_l * C(l,k)
  std::vector<int> factor_index_;  // j(k), 0-based
  std::vector<CVector> range_vectors_;
};

/**
 * Assembled finite-dimensional data of the model operator S_Theta in the
 * TMW basis, together with the defect embeddings of C^N:
 *
 *   iota      : coordinates of (1/z)(Theta(z)-Theta(0)) D_{Theta(0)}^{-1} xi_i,
 *   iota_star : coordinates of (I - Theta(z) Theta(0)^*) D_{Theta(0)^*}^{-1} xi_i.
 */
struct ModelOperator {
  CMatrix S;          // d x d
  CMatrix iota;       // d x N
  CMatrix iota_star;  // d x N
  CMatrix Theta0;     // N x N
  CMatrix D0;         // D_{Theta(0)}
  CMatrix D0star;     // D_{Theta(0)^*}
  std::shared_ptr<const TMWBasis> basis;

  int model_dim() const { return static_cast<int>(S.rows()); }
  int defect_dim() const { return static_cast<int>(Theta0.rows()); }
};

TMWBasis build_basis(const BPProduct& b, QuadratureSpec spec = {});

ModelOperator assemble_model(const BPProduct& b, QuadratureSpec spec = {});

/**
 * The augmented model of Xi(z) = z Theta(z) in the orthonormal basis
 * {e_1..e_d, Theta xi_1..Theta xi_N} of K_Xi = K_Theta (+) Theta C^N,
 * with the coordinate matrices of the identification maps
 *
 *   J(f + xi)  = f + Theta xi,    J_star(f + xi) = z f + xi
 *
 * from K_Theta (+) C^N onto K_Xi (both unitary within 1e-8).
 */
struct AugmentedModel {
  CMatrix S_xi;          // (d+N) x (d+N), model operator of Xi
  CMatrix J;             // (d+N) x (d+N)
  CMatrix J_star;        // (d+N) x (d+N)
  CMatrix const_coords;  // (d+N) x N, coordinates of the constants xi_i
};

AugmentedModel assemble_augmented(const ModelOperator& model);
AugmentedModel assemble_augmented(const BPProduct& b, QuadratureSpec spec = {});

/**
 * Defect operators D_T, D_{T*} and orthonormal bases of the defect spaces
 * (eigenvectors of I - T*T and I - TT* above rank_tol).
 */
struct DefectData {
  CMatrix D;           // (I - T*T)^{1/2}
  CMatrix Dstar;       // (I - TT*)^{1/2}
  CMatrix basis;       // dim x rank, columns span ran D_T
  CMatrix basis_star;  // dim x rank_star
  Eigen::VectorXd gaps;       // defect eigenvalues kept for basis
  Eigen::VectorXd gaps_star;  // same for basis_star

  int rank() const { return static_cast<int>(basis.cols()); }
  int rank_star() const { return static_cast<int>(basis_star.cols()); }
};

DefectData defect_data(const CMatrix& t, double rank_tol = 1e-8);

}  // namespace dilab
