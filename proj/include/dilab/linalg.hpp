#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "dilab/errors.hpp"
#include "dilab/rng.hpp"

namespace dilab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Operator 2-norm (largest singular value).
double op_norm(const CMatrix& a);

/// max_ij |a_ij - conj(a_ji)|, the Hermitian-symmetry defect.
double hermitian_defect(const CMatrix& a);

/// ||u* u - I|| in operator norm.
double unitary_defect(const CMatrix& u);

bool all_finite(const CMatrix& a);

/**
 * Eigendecomposition of a Hermitian matrix.
 *
 * Returns ascending eigenvalues and a unitary matrix of column eigenvectors
 * with A V = V diag(lambda) to a residual of 1e-10 * (1 + ||A||).
 * Throws NotHermitian if the symmetry defect exceeds 1e-12 * (1 + max|A|),
 * NoConvergence if the solver fails.
 */
std::pair<Eigen::VectorXd, CMatrix> hermitian_eigs(const CMatrix& a);

/// Largest eigenvalue of the Hermitian part of a (support-function kernel).
double top_hermitian_eig(const CMatrix& a);

/**
 * Eigenvalues of a unitary matrix, unimodular to 1e-9, order unspecified.
 * Throws NotUnitary if ||U*U - I|| > 1e-8.
 */
std::vector<Complex> unitary_eigs(const CMatrix& u);

/**
 * Hermitian PSD square root. Eigenvalues in [-1e-10, 0) are clamped to zero;
 * anything below -1e-10 throws NotPSD.
 */
CMatrix psd_sqrt(const CMatrix& a);

/**
 * Re-orthonormalization: returns B G^{-1/2} for a Hermitian positive-definite
 * Gram matrix G (callers feed near-identity Grams, ||G - I|| <= 0.5).
 * Throws IllConditioned if lambda_min(G) < 1e-6. Passing B = I yields
 * G^{-1/2} itself.
 */
CMatrix gram_correct(const CMatrix& b, const CMatrix& g);

/**
 * Haar-distributed unitary: QR of a complex Gaussian matrix with the R
 * diagonal phase absorbed into Q. Deterministic in (n, seed); entries of
 * the Gaussian are drawn row-major from Rng(seed).
 */
CMatrix haar_unitary(int n, std::uint64_t seed);
CMatrix haar_unitary(int n, Rng& rng);

/// Haar-random unit vector (normalized complex Gaussian).
CVector haar_vector(int n, Rng& rng);

/**
 * Chart on the unitary group: n^2 real coordinates of a skew-Hermitian K.
 * Layout: n diagonal params a_j (K_jj = i a_j), then for each pair j < k in
 * lexicographic order two params (x, y) with K_jk = x + iy, K_kj = -x + iy.
 */
struct UnitaryParams {
  int n = 0;
  Eigen::VectorXd params;  // size n^2

  static UnitaryParams zero(int n);
  CMatrix skew() const;
};

/// exp(K) through the eigendecomposition of the Hermitian matrix iK.
CMatrix unitary_from_params(const UnitaryParams& p);

}  // namespace dilab
