#include "dilab/inner.hpp"

#include <Eigen/LU>
#include <cmath>
#include <utility>

namespace dilab {

BPFactor::BPFactor(Complex lam, CMatrix projection)
    : lambda(lam), P(std::move(projection)) {
  if (P.rows() != P.cols()) throw InvalidArgument("BPFactor: projection not square");
  if (!all_finite(P) || !std::isfinite(std::abs(lambda)))
    throw InvalidArgument("BPFactor: non-finite data");
  if (std::abs(lambda) > 1.0 - 1e-12)
    throw InvalidArgument("BPFactor: |lambda| must be <= 1 - 1e-12");
  if (hermitian_defect(P) > 1e-10)
    throw InvalidArgument("BPFactor: projection not Hermitian");
  if (op_norm(P * P - P) > 1e-10)
    throw InvalidArgument("BPFactor: projection not idempotent");
}

BPFactor BPFactor::from_span(Complex lam, const CMatrix& columns) {
  if (columns.cols() < 1 || columns.cols() > columns.rows())
    throw InvalidArgument("BPFactor::from_span: need 1..N independent columns");
  Eigen::HouseholderQR<CMatrix> qr(columns);
  CMatrix q = CMatrix(qr.householderQ()).leftCols(columns.cols());
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < columns.cols(); ++j)
    if (std::abs(r(j, j)) < 1e-10 * (1.0 + columns.cwiseAbs().maxCoeff()))
      throw InvalidArgument("BPFactor::from_span: columns nearly dependent");
  return BPFactor(lam, q * q.adjoint());
}

BPFactor BPFactor::full(Complex lam, int n) {
  return BPFactor(lam, CMatrix::Identity(n, n));
}

int BPFactor::rank() const {
  const double tr = P.trace().real();
  const double r = std::round(tr);
  if (std::abs(tr - r) > 1e-8)
    throw NonIntegerRank("BPFactor: trace of projection not an integer");
  return static_cast<int>(r);
}

bool BPFactor::near_boundary() const {
  return std::abs(lambda) >= 1.0 - 1e-6;
}

CMatrix factor_eval(const BPFactor& f, Complex z) {
  const int n = f.dim();
  const CMatrix eye = CMatrix::Identity(n, n);
  if (f.lambda == Complex(0.0, 0.0)) return z * f.P + (eye - f.P);
  const double m = std::abs(f.lambda);
  const Complex scalar =
      (m / f.lambda) * (f.lambda - z) / (1.0 - std::conj(f.lambda) * z);
  return scalar * f.P + (eye - f.P);
}

BPProduct::BPProduct(int n, std::vector<BPFactor> factors, CMatrix v)
    : n_(n), factors_(std::move(factors)), v_(std::move(v)) {
  if (n_ < 1) throw InvalidArgument("BPProduct: dimension must be >= 1");
  for (const auto& f : factors_)
    if (f.dim() != n_) throw InvalidArgument("BPProduct: factor dimension mismatch");
  if (v_.rows() != n_ || v_.cols() != n_)
    throw InvalidArgument("BPProduct: constant factor dimension mismatch");
  if (unitary_defect(v_) > 1e-10)
    throw InvalidArgument("BPProduct: constant factor not unitary");
}

BPProduct::BPProduct(int n, std::vector<BPFactor> factors)
    : BPProduct(n, std::move(factors), CMatrix::Identity(n, n)) {}

CMatrix BPProduct::prefix_eval(std::size_t count, Complex z) const {
  CMatrix m = CMatrix::Identity(n_, n_);
  for (std::size_t j = 0; j < count && j < factors_.size(); ++j)
    m = m * factor_eval(factors_[j], z);
  return m;
}

BPProduct BPProduct::truncate(std::size_t depth) const {
  if (depth > factors_.size())
    throw InvalidArgument("BPProduct::truncate: depth exceeds factor count");
  return BPProduct(n_, {factors_.begin(), factors_.begin() + depth}, v_);
}

bool BPProduct::near_boundary() const {
  for (const auto& f : factors_)
    if (f.near_boundary()) return true;
  return false;
}

CMatrix product_eval(const BPProduct& b, Complex z) {
  return b.prefix_eval(b.factors().size(), z) * b.constant_unitary();
}

MatFn product_evaluator(const BPProduct& b) {
  return [b](Complex z) { return product_eval(b, z); };
}

double purity_check(const BPProduct& b) {
  return op_norm(product_eval(b, 0.0));
}

int model_dimension(const BPProduct& b) {
  int d = 0;
  for (const auto& f : b.factors()) d += f.rank();
  return d;
}

MatFn frostman_transform(const MatFn& theta, Complex lambda) {
  if (std::abs(lambda) >= 1.0)
    throw InvalidArgument("frostman_transform: |lambda| must be < 1");
  return [theta, lambda](Complex z) -> CMatrix {
    const CMatrix th = theta(z);
    const Eigen::Index n = th.rows();
    const CMatrix eye = CMatrix::Identity(n, n);
    Eigen::FullPivLU<CMatrix> lu(eye - std::conj(lambda) * th);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
      throw SingularResolvent("frostman_transform: I - conj(lambda) Theta(z) singular");
    return (th - lambda * eye) * lu.inverse();
  };
}

MatFn frostman_transform(const BPProduct& b, Complex lambda) {
  return frostman_transform(product_evaluator(b), lambda);
}

MatFn direct_sum(const MatFn& f, const CMatrix& v) {
  if (v.rows() != v.cols()) throw InvalidArgument("direct_sum: V not square");
  if (v.rows() > 0 && unitary_defect(v) > 1e-10)
    throw InvalidArgument("direct_sum: V not unitary");
  return [f, v](Complex z) -> CMatrix {
    const CMatrix top = f(z);
    const Eigen::Index n = top.rows(), m = v.rows();
    CMatrix out = CMatrix::Zero(n + m, n + m);
    out.topLeftCorner(n, n) = top;
    out.bottomRightCorner(m, m) = v;
    return out;
  };
}

}  // namespace dilab
