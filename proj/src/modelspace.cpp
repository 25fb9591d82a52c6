#include "dilab/modelspace.hpp"

#include <cmath>
#include <utility>

namespace dilab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Complex circle_node(int m, int order) {
  const double t = kTwoPi * m / order;
  return {std::cos(t), std::sin(t)};
}

Complex trapezoid(const VecFn& f, const VecFn& g, int order) {
  Complex acc(0.0, 0.0);
  for (int m = 0; m < order; ++m) {
    const Complex z = circle_node(m, order);
    acc += g(z).dot(f(z));  // Eigen's dot conjugates the left operand
  }
  return acc / static_cast<double>(order);
}

/// Uncorrected TMW element layout shared by the assembly passes.
struct RawLayout {
  std::vector<int> factor_index;
  std::vector<CVector> range_vectors;
  int dim() const { return static_cast<int>(factor_index.size()); }
};

RawLayout make_layout(const BPProduct& b) {
  RawLayout layout;
  for (std::size_t j = 0; j < b.factors().size(); ++j) {
    const auto& f = b.factors()[j];
    if (f.rank() == 0) continue;
    auto [vals, vecs] = hermitian_eigs(f.P);
    // Eigenvalues ascending; range vectors are those with eigenvalue near 1.
    // Pin each vector's phase (largest component real positive) so the basis
    // is reproducible across eigensolver implementations.
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (vals(i) > 0.5) {
        CVector p = vecs.col(i);
        Eigen::Index imax = 0;
        p.cwiseAbs().maxCoeff(&imax);
        const Complex pivot = p(imax);
        if (std::abs(pivot) > 0.0) p *= std::conj(pivot) / std::abs(pivot);
        layout.factor_index.push_back(static_cast<int>(j));
        layout.range_vectors.push_back(p);
      }
    }
  }
  return layout;
}

/**
 * All trapezoid sums the model assembly needs, accumulated in one pass over
 * the circle nodes. Column set beta = {raw TMW elements r_1..r_d} followed by
 * {Theta xi_1..Theta xi_N}; entries follow <f, g> = sum conj(g) f / M with
 * the second index as f:
 *   gram(l,m)      = <beta_m, beta_l>
 *   shifted(l,m)   = <z beta_m, beta_l>
 *   iota_raw(l,i)      = <(Theta - Theta0)/z D0^{-1} xi_i, r_l>
 *   iota_star_raw(l,i) = <(I - Theta Theta0^*) D0star^{-1} xi_i, r_l>
 *   const_raw(l,i) = <xi_i, beta_l>
 */
struct RawSums {
  int order = 0;
  CMatrix gram, shifted;           // (d+N) x (d+N)
  CMatrix iota_raw, iota_star_raw; // d x N
  CMatrix const_raw;               // (d+N) x N

  double max_diff(const RawSums& other) const {
    double m = (gram - other.gram).cwiseAbs().maxCoeff();
    m = std::max(m, (shifted - other.shifted).cwiseAbs().maxCoeff());
    m = std::max(m, (iota_raw - other.iota_raw).cwiseAbs().maxCoeff());
    m = std::max(m, (iota_star_raw - other.iota_star_raw).cwiseAbs().maxCoeff());
    m = std::max(m, (const_raw - other.const_raw).cwiseAbs().maxCoeff());
    return m;
  }
};

RawSums run_raw_pass(const BPProduct& b, const RawLayout& layout, int order) {
  const int n = b.dim();
  const int d = layout.dim();
  const int dn = d + n;
  const CMatrix theta0 = product_eval(b, 0.0);
  const CMatrix eye = CMatrix::Identity(n, n);
  const CMatrix d0_inv =
      gram_correct(eye, eye - theta0.adjoint() * theta0);  // D0^{-1} = G^{-1/2}
  const CMatrix d0s_inv = gram_correct(eye, eye - theta0 * theta0.adjoint());

  RawSums s;
  s.order = order;
  s.gram = CMatrix::Zero(dn, dn);
  s.shifted = CMatrix::Zero(dn, dn);
  s.iota_raw = CMatrix::Zero(d, n);
  s.iota_star_raw = CMatrix::Zero(d, n);
  s.const_raw = CMatrix::Zero(dn, n);

  const std::size_t nfac = b.factors().size();
  std::vector<CMatrix> prefix(nfac + 1);
  CMatrix beta(n, dn);

  for (int m = 0; m < order; ++m) {
    const Complex z = circle_node(m, order);

    prefix[0] = CMatrix::Identity(n, n);
    for (std::size_t j = 0; j < nfac; ++j)
      prefix[j + 1] = prefix[j] * factor_eval(b.factors()[j], z);
    const CMatrix theta = prefix[nfac] * b.constant_unitary();

    for (int l = 0; l < d; ++l) {
      const int j = layout.factor_index[static_cast<std::size_t>(l)];
      const Complex lam = b.factors()[static_cast<std::size_t>(j)].lambda;
      const Complex kernel =
          std::sqrt(1.0 - std::norm(lam)) / (1.0 - std::conj(lam) * z);
      beta.col(l) = prefix[static_cast<std::size_t>(j)] *
                    (kernel * layout.range_vectors[static_cast<std::size_t>(l)]);
    }
    beta.rightCols(n) = theta;

    const CMatrix beta_adj = beta.adjoint();
    const CMatrix pairings = beta_adj * beta;
    s.gram += pairings;
    s.shifted += z * pairings;
    s.iota_raw += beta_adj.topRows(d) * ((theta - theta0) * d0_inv / z);
    s.iota_star_raw += beta_adj.topRows(d) * ((eye - theta * theta0.adjoint()) * d0s_inv);
    s.const_raw += beta_adj;
  }

  const double scale = 1.0 / order;
  s.gram *= scale;
  s.shifted *= scale;
  s.iota_raw *= scale;
  s.iota_star_raw *= scale;
  s.const_raw *= scale;
  return s;
}

/// Doubles the order until the full set of trapezoid sums settles, mirroring
/// the per-integral adaptive contract of h2_inner_adaptive.
RawSums adaptive_raw_pass(const BPProduct& b, const RawLayout& layout,
                          const QuadratureSpec& spec) {
  int order = spec.initial_order;
  RawSums prev = run_raw_pass(b, layout, order);
  for (;;) {
    order *= 2;
    RawSums cur = run_raw_pass(b, layout, order);
    const double diff = cur.max_diff(prev);
    if (diff < spec.tol) return cur;
    if (order >= QuadratureSpec::kMaxOrder) {
      if (diff > QuadratureSpec::kFailTol)
        throw NoConvergence("modelspace: quadrature did not settle at cap 2^16");
      return cur;
    }
    prev = std::move(cur);
  }
}

}  // namespace

Complex h2_inner(const VecFn& f, const VecFn& g, int order) {
  if (order < 1) throw InvalidArgument("h2_inner: order must be >= 1");
  return trapezoid(f, g, order);
}

Complex h2_inner_adaptive(const VecFn& f, const VecFn& g,
                          const QuadratureSpec& spec) {
  int order = spec.initial_order;
  Complex prev = trapezoid(f, g, order);
  for (;;) {
    order *= 2;
    const Complex cur = trapezoid(f, g, order);
    const double diff = std::abs(cur - prev);
    if (diff < spec.tol) return cur;
    if (order >= QuadratureSpec::kMaxOrder) {
      if (diff > QuadratureSpec::kFailTol)
        throw NoConvergence("h2_inner: quadrature did not settle at cap 2^16");
      return cur;
    }
    prev = cur;
  }
}

TMWBasis::TMWBasis(std::shared_ptr<const BPProduct> product, QuadratureSpec spec,
                   CMatrix correction, std::vector<int> factor_index,
                   std::vector<CVector> range_vectors)
    : product_(std::move(product)),
      spec_(spec),
      correction_(std::move(correction)),
      factor_index_(std::move(factor_index)),
      range_vectors_(std::move(range_vectors)) {}

CVector TMWBasis::raw_eval(int l, Complex z) const {
  const int j = factor_index_[static_cast<std::size_t>(l)];
  const Complex lam = product_->factors()[static_cast<std::size_t>(j)].lambda;
  const double scale = std::sqrt(1.0 - std::norm(lam));
  const Complex kernel = scale / (1.0 - std::conj(lam) * z);
  return product_->prefix_eval(static_cast<std::size_t>(j), z) *
         (kernel * range_vectors_[static_cast<std::size_t>(l)]);
}

VecFn TMWBasis::element(int k) const {
  const int d = dim();
  // Capture by value; the basis object may go out of scope first.
  auto self = *this;
  return [self, k, d](Complex z) -> CVector {
    CVector acc = CVector::Zero(self.ambient_dim());
    for (int l = 0; l < d; ++l) acc += self.correction_(l, k) * self.raw_eval(l, z);
    return acc;
  };
}

CMatrix TMWBasis::eval_all(Complex z) const {
  CMatrix raw(ambient_dim(), dim());
  for (int l = 0; l < dim(); ++l) raw.col(l) = raw_eval(l, z);
  return raw * correction_;
}

TMWBasis build_basis(const BPProduct& b, QuadratureSpec spec) {
  if (!is_pure(b))
    throw NotPure("build_basis: Theta(0) is not a strict contraction");
  const int d = model_dimension(b);
  if (d < 1) throw InvalidArgument("build_basis: empty model space");

  const RawLayout layout = make_layout(b);
  if (layout.dim() != d)
    throw ResidualTooLarge("build_basis: projection ranks inconsistent");

  const RawSums sums = adaptive_raw_pass(b, layout, spec);
  const CMatrix gram = sums.gram.topLeftCorner(d, d);
  const CMatrix correction = gram_correct(CMatrix::Identity(d, d), gram);
  if (op_norm(correction.adjoint() * gram * correction -
              CMatrix::Identity(d, d)) > 1e-9)
    throw ResidualTooLarge("build_basis: Gram residual after correction");

  return TMWBasis(std::make_shared<BPProduct>(b), spec, correction,
                  layout.factor_index, layout.range_vectors);
}

ModelOperator assemble_model(const BPProduct& b, QuadratureSpec spec) {
  if (!is_pure(b))
    throw NotPure("assemble_model: Theta(0) is not a strict contraction");
  const int d = model_dimension(b);
  if (d < 1) throw InvalidArgument("assemble_model: empty model space");
  const int n = b.dim();

  const RawLayout layout = make_layout(b);
  if (layout.dim() != d)
    throw ResidualTooLarge("assemble_model: projection ranks inconsistent");
  const RawSums sums = adaptive_raw_pass(b, layout, spec);

  const CMatrix gram = sums.gram.topLeftCorner(d, d);
  const CMatrix correction = gram_correct(CMatrix::Identity(d, d), gram);
  if (op_norm(correction.adjoint() * gram * correction -
              CMatrix::Identity(d, d)) > 1e-9)
    throw ResidualTooLarge("assemble_model: Gram residual after correction");

  ModelOperator model;
  model.basis = std::make_shared<TMWBasis>(std::make_shared<BPProduct>(b), spec,
                                           correction, layout.factor_index,
                                           layout.range_vectors);
  model.Theta0 = product_eval(b, 0.0);
  model.D0 = psd_sqrt(CMatrix::Identity(n, n) -
                      model.Theta0.adjoint() * model.Theta0);
  model.D0star = psd_sqrt(CMatrix::Identity(n, n) -
                          model.Theta0 * model.Theta0.adjoint());

  model.S = correction.adjoint() * sums.shifted.topLeftCorner(d, d) * correction;
  model.iota = correction.adjoint() * sums.iota_raw;
  model.iota_star = correction.adjoint() * sums.iota_star_raw;

  const CMatrix eye_n = CMatrix::Identity(n, n);
  const double iso = op_norm(model.iota.adjoint() * model.iota - eye_n);
  const double iso_star =
      op_norm(model.iota_star.adjoint() * model.iota_star - eye_n);
  const double intertwine =
      op_norm(model.S * model.iota + model.iota_star * model.Theta0);
  if (iso > 1e-8 || iso_star > 1e-8 || intertwine > 1e-8)
    throw ResidualTooLarge("assemble_model: embedding residual exceeds 1e-8");
  if (op_norm(model.S) > 1.0 + 1e-9)
    throw ResidualTooLarge("assemble_model: ||S|| exceeds 1");

  const DefectData dd = defect_data(model.S);
  if (dd.rank() != n || dd.rank_star() != n)
    throw ResidualTooLarge("assemble_model: defect ranks of S differ from N");

  return model;
}

AugmentedModel assemble_augmented(const ModelOperator& model) {
  const QuadratureSpec spec = model.basis->quadrature();
  const BPProduct& b = model.basis->product();
  const int d = model.model_dim();
  const int n = model.defect_dim();
  const int dn = d + n;

  const RawLayout layout = make_layout(b);
  const RawSums sums = adaptive_raw_pass(b, layout, spec);

  // Basis of K_Xi: corrected TMW elements of Theta, then Theta xi_i.
  CMatrix corr2 = CMatrix::Identity(dn, dn);
  const CMatrix correction =
      gram_correct(CMatrix::Identity(d, d), sums.gram.topLeftCorner(d, d));
  corr2.topLeftCorner(d, d) = correction;

  AugmentedModel aug;
  aug.S_xi = corr2.adjoint() * sums.shifted * corr2;
  aug.const_coords = corr2.adjoint() * sums.const_raw;

  // J(f + xi) = f + Theta xi sends the domain basis onto the K_Xi basis:
  // its coordinate matrix is the corrected Gram, an identity up to
  // quadrature error. J_star(e_k + 0) = z e_k matches the S_xi columns
  // (z e_k already lies in K_Xi); J_star(0 + xi_i) is the constant xi_i.
  aug.J = corr2.adjoint() * sums.gram * corr2;
  aug.J_star.resize(dn, dn);
  aug.J_star.leftCols(d) = aug.S_xi.leftCols(d);
  aug.J_star.rightCols(n) = aug.const_coords;

  if (unitary_defect(aug.J) > 1e-8 || unitary_defect(aug.J_star) > 1e-8)
    throw ResidualTooLarge("assemble_augmented: identification maps not unitary");
  if (op_norm(aug.S_xi) > 1.0 + 1e-9)
    throw ResidualTooLarge("assemble_augmented: ||S_Xi|| exceeds 1");

  return aug;
}

AugmentedModel assemble_augmented(const BPProduct& b, QuadratureSpec spec) {
  return assemble_augmented(assemble_model(b, spec));
}

DefectData defect_data(const CMatrix& t, double rank_tol) {
  if (t.rows() != t.cols()) throw InvalidArgument("defect_data: matrix not square");
  if (op_norm(t) > 1.0 + 1e-9)
    throw NotContraction("defect_data: ||T|| exceeds 1");
  const Eigen::Index m = t.rows();
  const CMatrix eye = CMatrix::Identity(m, m);
  const CMatrix g = eye - t.adjoint() * t;
  const CMatrix g_star = eye - t * t.adjoint();

  DefectData dd;
  dd.D = psd_sqrt(g);
  dd.Dstar = psd_sqrt(g_star);

  auto pick = [&](const CMatrix& a, CMatrix& basis, Eigen::VectorXd& gaps) {
    auto [vals, vecs] = hermitian_eigs(a);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (vals(i) > rank_tol) idx.push_back(i);
    basis.resize(m, static_cast<Eigen::Index>(idx.size()));
    gaps.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      basis.col(static_cast<Eigen::Index>(i)) = vecs.col(idx[i]);
      gaps(static_cast<Eigen::Index>(i)) = vals(idx[i]);
    }
  };
  pick(g, dd.basis, dd.gaps);
  pick(g_star, dd.basis_star, dd.gaps_star);
  return dd;
}

}  // namespace dilab
