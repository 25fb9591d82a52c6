#pragma once

#include <optional>
#include <vector>

#include "dilab/modelspace.hpp"

namespace dilab {

enum class DilationOrigin { direct_formula, z_xi_construction, general_form };

/// A unitary (d+N)-dimensional dilation of a d-dimensional contraction.
struct UnitaryDilation {
  CMatrix U;      // (d+N) x (d+N)
  CMatrix Omega;  // N x N parameter
  DilationOrigin origin = DilationOrigin::direct_formula;
};

/**
 * The canonical dilation family of the model operator,
 *
 *   U_Omega = [ S_Theta                iota_star D_{Theta(0)^*} Omega ]
 *             [ D_{Theta(0)} iota^*    Theta(0)^* Omega               ].
 *
 * Throws NotUnitaryParam unless Omega is unitary within 1e-10.
 */
UnitaryDilation build_U_Omega(const ModelOperator& model, const CMatrix& omega);

/**
 * Parameters of a general unitary N-dilation of a contraction with equal
 * defect ranks, expressed in the orthonormal defect bases chosen by
 * defect_data: `omega` maps C^N into D_{T*}-coordinates (it enters the
 * dilation as D_{T*} omega), `omega_star` maps C^N into D_T-coordinates.
 */
struct GeneralDilationParams {
  CMatrix omega;       // N x N
  CMatrix omega_star;  // N x N
};

/**
 * The full block form of a unitary N-dilation,
 *
 *   U = [ T                 D_{T*} omega        ]
 *       [ omega_star^* D_T  -omega_star^* T^* omega ].
 *
 * Throws UnequalDefects if rank(I-T*T) != rank(I-TT*), NotContraction if
 * ||T|| > 1.
 */
CMatrix general_dilation(const CMatrix& t, const GeneralDilationParams& params);

/**
 * Recovers the parameters of a given unitary dilation from its off-diagonal
 * blocks; the reconstruction through general_dilation reproduces U within
 * 1e-8 or NotADilation is thrown. Parameters are reported modulo the
 * defect-basis gauge of defect_data.
 */
GeneralDilationParams factor_dilation(const CMatrix& t, const CMatrix& u);

/**
 * Independent construction of U_Omega through the augmented model: the shift
 * S_Xi of Xi(z) = z Theta(z) has defect space Theta C^N; replacing its action
 * there by A_Omega(Theta xi) = Omega xi and conjugating by J gives
 * Z_Xi(Omega) = J^* S_Xi[A_Omega] J, equal to the direct formula.
 */
UnitaryDilation build_Z_Xi(const ModelOperator& model, const AugmentedModel& aug,
                           const CMatrix& omega);
UnitaryDilation build_Z_Xi(const BPProduct& b, const CMatrix& omega,
                           QuadratureSpec spec = {});

/// |det(zeta Theta(zeta) - Omega)| for |zeta| = 1; zero exactly on the
/// spectrum of U_Omega.
double spectrum_predicate(const BPProduct& b, const CMatrix& omega, Complex zeta);

/**
 * Eigenvalues of the dilation. When the product is supplied, each eigenvalue
 * is cross-checked against the determinant predicate.
 */
std::vector<Complex> dilation_spectrum(const UnitaryDilation& dil,
                                       const BPProduct* b = nullptr);

/**
 * Scan of |det(zeta Theta(zeta) - Omega)| over `points` circle samples.
 * Local minima are refined by ternary search; returns the refined angles in
 * [0, 2pi), one per zero of the predicate for generic Omega.
 */
std::vector<double> spectrum_scan(const BPProduct& b, const CMatrix& omega,
                                  int points = 4096);

}  // namespace dilab
