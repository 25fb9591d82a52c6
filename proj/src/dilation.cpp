#include "dilab/dilation.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace dilab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dilation_invariants(const UnitaryDilation& dil, const CMatrix& s) {
  if (unitary_defect(dil.U) > 1e-9)
    throw ResidualTooLarge("dilation: ||U*U - I|| exceeds 1e-9");
  const Eigen::Index d = s.rows();
  if (op_norm(dil.U.topLeftCorner(d, d) - s) > 1e-9)
    throw ResidualTooLarge("dilation: compression does not reproduce S");
}

}  // namespace

UnitaryDilation build_U_Omega(const ModelOperator& model, const CMatrix& omega) {
  const int n = model.defect_dim();
  if (omega.rows() != n || omega.cols() != n)
    throw NotUnitaryParam("build_U_Omega: Omega has wrong dimension");
  if (unitary_defect(omega) > 1e-10)
    throw NotUnitaryParam("build_U_Omega: Omega not unitary within 1e-10");

  const int d = model.model_dim();
  UnitaryDilation dil;
  dil.Omega = omega;
  dil.origin = DilationOrigin::direct_formula;
  dil.U.resize(d + n, d + n);
  dil.U.topLeftCorner(d, d) = model.S;
  dil.U.topRightCorner(d, n) = model.iota_star * model.D0star * omega;
  dil.U.bottomLeftCorner(n, d) = model.D0 * model.iota.adjoint();
  dil.U.bottomRightCorner(n, n) = model.Theta0.adjoint() * omega;
  check_dilation_invariants(dil, model.S);
  return dil;
}

CMatrix general_dilation(const CMatrix& t, const GeneralDilationParams& params) {
  const DefectData dd = defect_data(t);
  if (dd.rank() != dd.rank_star())
    throw UnequalDefects("general_dilation: defect ranks differ");
  const int n = dd.rank();
  if (params.omega.rows() != n || params.omega.cols() != n ||
      params.omega_star.rows() != n || params.omega_star.cols() != n)
    throw InvalidArgument("general_dilation: parameter dimension mismatch");
  if (unitary_defect(params.omega) > 1e-10 ||
      unitary_defect(params.omega_star) > 1e-10)
    throw NotUnitaryParam("general_dilation: parameters not unitary");

  const Eigen::Index m = t.rows();
  const CMatrix omega = dd.basis_star * params.omega;  // C^N -> H, lands in D_{T*}
  const CMatrix omega_star = dd.basis * params.omega_star;  // lands in D_T

  CMatrix u(m + n, m + n);
  u.topLeftCorner(m, m) = t;
  u.topRightCorner(m, n) = dd.Dstar * omega;
  u.bottomLeftCorner(n, m) = omega_star.adjoint() * dd.D;
  u.bottomRightCorner(n, n) = -omega_star.adjoint() * t.adjoint() * omega;
  return u;
}

GeneralDilationParams factor_dilation(const CMatrix& t, const CMatrix& u) {
  const Eigen::Index m = t.rows();
  const Eigen::Index n = u.rows() - m;
  if (n < 1 || u.rows() != u.cols())
    throw InvalidArgument("factor_dilation: U does not extend T");
  if (unitary_defect(u) > 1e-8)
    throw NotADilation("factor_dilation: U not unitary");
  if (op_norm(u.topLeftCorner(m, m) - t) > 1e-8)
    throw NotADilation("factor_dilation: top-left block differs from T");

  const DefectData dd = defect_data(t);
  if (dd.rank() != dd.rank_star() || dd.rank() != n)
    throw UnequalDefects("factor_dilation: defect ranks incompatible with U");

  // D_{T*} acts on its eigenbasis by sqrt of the defect eigenvalues, so the
  // restriction inverts exactly in defect coordinates.
  GeneralDilationParams params;
  params.omega = dd.gaps_star.cwiseSqrt().cwiseInverse().asDiagonal() *
                 (dd.basis_star.adjoint() * u.topRightCorner(m, n));
  params.omega_star =
      ((u.bottomLeftCorner(n, m) * dd.basis) *
       dd.gaps.cwiseSqrt().cwiseInverse().asDiagonal()).adjoint();

  if (unitary_defect(params.omega) > 1e-6 ||
      unitary_defect(params.omega_star) > 1e-6)
    throw NotADilation("factor_dilation: recovered parameters not unitary");

  const CMatrix rebuilt = general_dilation(t, params);
  if (op_norm(rebuilt - u) > 1e-8)
    throw NotADilation("factor_dilation: blocks inconsistent with dilation form");
  return params;
}

UnitaryDilation build_Z_Xi(const ModelOperator& model, const AugmentedModel& aug,
                           const CMatrix& omega) {
  const int n = model.defect_dim();
  const int d = model.model_dim();
  const int dn = d + n;
  if (omega.rows() != n || omega.cols() != n)
    throw NotUnitaryParam("build_Z_Xi: Omega has wrong dimension");
  if (unitary_defect(omega) > 1e-10)
    throw NotUnitaryParam("build_Z_Xi: Omega not unitary within 1e-10");

  // Defect space of S_Xi is Theta C^N: the last N coordinate directions of
  // the K_Xi basis. The projector comes from defect_data, per contract.
  const DefectData dd = defect_data(aug.S_xi);
  if (dd.rank() != n)
    throw ResidualTooLarge("build_Z_Xi: defect rank of S_Xi differs from N");
  const CMatrix q = dd.basis * dd.basis.adjoint();

  // A_Omega(Theta xi) = Omega xi: read xi off the last N coordinates, map to
  // the coordinates of the constant function Omega xi.
  CMatrix read_xi = CMatrix::Zero(n, dn);
  read_xi.rightCols(n) = CMatrix::Identity(n, n);
  const CMatrix a_full = aug.const_coords * omega * read_xi * q;
  const CMatrix s_replaced =
      a_full + aug.S_xi * (CMatrix::Identity(dn, dn) - q);

  UnitaryDilation dil;
  dil.Omega = omega;
  dil.origin = DilationOrigin::z_xi_construction;
  dil.U = aug.J.adjoint() * s_replaced * aug.J;
  check_dilation_invariants(dil, model.S);
  return dil;
}

UnitaryDilation build_Z_Xi(const BPProduct& b, const CMatrix& omega,
                           QuadratureSpec spec) {
  const ModelOperator model = assemble_model(b, spec);
  return build_Z_Xi(model, assemble_augmented(model), omega);
}

double spectrum_predicate(const BPProduct& b, const CMatrix& omega,
                          Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-9)
    throw InvalidArgument("spectrum_predicate: |zeta| must be 1");
  return std::abs((zeta * product_eval(b, zeta) - omega).determinant());
}

std::vector<Complex> dilation_spectrum(const UnitaryDilation& dil,
                                       const BPProduct* b) {
  std::vector<Complex> eigs = unitary_eigs(dil.U);
  for (const Complex& zeta : eigs) {
    if (std::abs(std::abs(zeta) - 1.0) > 1e-9)
      throw ResidualTooLarge("dilation_spectrum: eigenvalue off the circle");
    if (b != nullptr) {
      const double res =
          spectrum_predicate(*b, dil.Omega, zeta / std::abs(zeta));
      if (res > 1e-7 * (1.0 + op_norm(dil.Omega)))
        throw ResidualTooLarge("dilation_spectrum: determinant residual too large");
    }
  }
  return eigs;
}

std::vector<double> spectrum_scan(const BPProduct& b, const CMatrix& omega,
                                  int points) {
  if (points < 8) throw InvalidArgument("spectrum_scan: too few points");
  auto predicate = [&](double t) {
    return spectrum_predicate(b, omega, Complex(std::cos(t), std::sin(t)));
  };
  std::vector<double> vals(points);
  for (int k = 0; k < points; ++k) vals[k] = predicate(kTwoPi * k / points);

  std::vector<double> minima;
  for (int k = 0; k < points; ++k) {
    const double prev = vals[(k + points - 1) % points];
    const double next = vals[(k + 1) % points];
    if (vals[k] < prev && vals[k] <= next) {
      // Ternary-search refinement inside the bracketing interval.
      double lo = kTwoPi * (k - 1) / points;
      double hi = kTwoPi * (k + 1) / points;
      for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (predicate(m1) < predicate(m2))
          hi = m2;
        else
          lo = m1;
      }
      double angle = std::fmod((lo + hi) / 2.0, kTwoPi);
      if (angle < 0.0) angle += kTwoPi;
      minima.push_back(angle);
    }
  }
  std::sort(minima.begin(), minima.end());
  return minima;
}

}  // namespace dilab
