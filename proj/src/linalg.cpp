#include "dilab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dilab {

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

double hermitian_defect(const CMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitary_defect(const CMatrix& u) {
  return op_norm(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

bool all_finite(const CMatrix& a) {
  return a.allFinite();
}

std::pair<Eigen::VectorXd, CMatrix> hermitian_eigs(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("hermitian_eigs: matrix not square");
  if (!all_finite(a)) throw InvalidArgument("hermitian_eigs: non-finite entries");
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  if (hermitian_defect(a) > 1e-12 * scale)
    throw NotHermitian("hermitian_eigs: symmetry defect exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((a + a.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw NoConvergence("hermitian_eigs: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double top_hermitian_eig(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((a + a.adjoint()) / 2.0,
                                            Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NoConvergence("top_hermitian_eig: eigensolver did not converge");
  return es.eigenvalues()(a.rows() - 1);
}

std::vector<Complex> unitary_eigs(const CMatrix& u) {
  if (u.rows() != u.cols()) throw InvalidArgument("unitary_eigs: matrix not square");
  if (unitary_defect(u) > 1e-8)
    throw NotUnitary("unitary_eigs: ||U*U - I|| exceeds 1e-8");
  Eigen::ComplexEigenSolver<CMatrix> es(u, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NoConvergence("unitary_eigs: eigensolver did not converge");
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + u.rows());
  return out;
}

CMatrix psd_sqrt(const CMatrix& a) {
  auto [vals, vecs] = hermitian_eigs(a);
  Eigen::VectorXd s(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -1e-10)
      throw NotPSD("psd_sqrt: eigenvalue below -1e-10");
    s(i) = std::sqrt(std::max(vals(i), 0.0));
  }
  return vecs * s.asDiagonal() * vecs.adjoint();
}

CMatrix gram_correct(const CMatrix& b, const CMatrix& g) {
  if (b.cols() != g.rows()) throw InvalidArgument("gram_correct: shape mismatch");
  auto [vals, vecs] = hermitian_eigs(g);
  if (vals(0) < 1e-6)
    throw IllConditioned("gram_correct: Gram matrix nearly singular");
  Eigen::VectorXd s = vals.array().rsqrt();
  return b * (vecs * s.asDiagonal() * vecs.adjoint());
}

CMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("haar_unitary: n must be >= 1");
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    const double m = std::abs(rjj);
    q.col(j) *= (m > 0.0) ? rjj / m : Complex(1.0, 0.0);
  }
  return q;
}

CMatrix haar_unitary(int n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(n, rng);
}

CVector haar_vector(int n, Rng& rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cnormal();
  const double nrm = v.norm();
  if (nrm == 0.0) return CVector::Unit(n, 0);
  return v / nrm;
}

UnitaryParams UnitaryParams::zero(int n) {
  UnitaryParams p;
  p.n = n;
  p.params = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * n);
  return p;
}

CMatrix UnitaryParams::skew() const {
  if (params.size() != static_cast<Eigen::Index>(n) * n)
    throw InvalidArgument("UnitaryParams: expected n^2 coordinates");
  if (!params.allFinite())
    throw InvalidArgument("UnitaryParams: non-finite coordinates");
  CMatrix k = CMatrix::Zero(n, n);
  Eigen::Index idx = 0;
  for (int j = 0; j < n; ++j) k(j, j) = Complex(0.0, params(idx++));
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const double x = params(idx++);
      const double y = params(idx++);
      k(j, l) = Complex(x, y);
      k(l, j) = Complex(-x, y);
    }
  }
  return k;
}

CMatrix unitary_from_params(const UnitaryParams& p) {
  const CMatrix k = p.skew();
  // iK is Hermitian; exp(K) = V exp(-i mu) V*.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Complex(0.0, 1.0) * k);
  if (es.info() != Eigen::Success)
    throw NoConvergence("unitary_from_params: eigensolver did not converge");
  CVector phases(p.n);
  for (int j = 0; j < p.n; ++j)
    phases(j) = std::exp(Complex(0.0, -es.eigenvalues()(j)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace dilab
