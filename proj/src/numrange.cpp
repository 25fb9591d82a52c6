#include "dilab/numrange.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "dilab/parallel.hpp"

namespace dilab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kGolden = 0.6180339887498948482;

CMatrix assemble_u(const ModelOperator& model, const CMatrix& omega) {
  const int d = model.model_dim();
  const int n = model.defect_dim();
  CMatrix u(d + n, d + n);
  u.topLeftCorner(d, d) = model.S;
  u.topRightCorner(d, n) = model.iota_star * model.D0star * omega;
  u.bottomLeftCorner(n, d) = model.D0 * model.iota.adjoint();
  u.bottomRightCorner(n, n) = model.Theta0.adjoint() * omega;
  return u;
}

double dilation_support(const ModelOperator& model, const CMatrix& omega,
                        Complex rot) {
  return top_hermitian_eig(rot * assemble_u(model, omega));
}

/// Standard Nelder-Mead on R^dim; returns best point, best value and the
/// number of iterations spent.
struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, double step, double tol,
                          int max_iter) {
  const Eigen::Index dim = x0.size();
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> fs;
  xs.push_back(x0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd x = x0;
    x(i) += step;
    xs.push_back(x);
  }
  for (const auto& x : xs) fs.push_back(f(x));

  std::vector<std::size_t> order(xs.size());
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    if (fs[order.back()] - fs[order.front()] < tol) break;

    const std::size_t worst = order.back();
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += xs[order[i]];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double fr = f(reflected);
    if (fr < fs[order.front()]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[order[order.size() - 2]]) {
      xs[worst] = reflected;
      fs[worst] = fr;
      continue;
    }
    const Eigen::VectorXd contracted = centroid + 0.5 * (xs[worst] - centroid);
    const double fc = f(contracted);
    if (fc < fs[worst]) {
      xs[worst] = contracted;
      fs[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
      xs[order[i]] = xs[order[0]] + 0.5 * (xs[order[i]] - xs[order[0]]);
      fs[order[i]] = f(xs[order[i]]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < fs.size(); ++i)
    if (fs[i] < fs[best]) best = i;
  return {xs[best], fs[best], iter};
}

}  // namespace

SupportProfile::SupportProfile(int grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (grid_ < 3 || values_.size() != static_cast<std::size_t>(grid_))
    throw InvalidArgument("SupportProfile: grid/value size mismatch");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("SupportProfile: non-finite value");
}

double SupportProfile::angle(int g) const {
  return kTwoPi * g / grid_;
}

double SupportProfile::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SupportProfile SupportProfile::of_point(Complex w, int grid) {
  return of_points({w}, grid);
}

SupportProfile SupportProfile::of_points(const std::vector<Complex>& pts,
                                         int grid) {
  if (pts.empty()) throw InvalidArgument("SupportProfile: empty point set");
  std::vector<double> vals(static_cast<std::size_t>(grid));
  for (int g = 0; g < grid; ++g) {
    const double phi = kTwoPi * g / grid;
    const Complex rot(std::cos(phi), -std::sin(phi));
    double h = -1e300;
    for (const Complex& w : pts) h = std::max(h, (rot * w).real());
    vals[static_cast<std::size_t>(g)] = h;
  }
  return SupportProfile(grid, std::move(vals));
}

std::array<double, 2> SupportProfile::boundary_point(int g) const {
  const int prev = (g + grid_ - 1) % grid_;
  const int next = (g + 1) % grid_;
  const double dphi = kTwoPi / grid_;
  const double h = value(g);
  const double hp = (value(next) - value(prev)) / (2.0 * dphi);
  const double c = std::cos(angle(g)), s = std::sin(angle(g));
  return {h * c - hp * s, h * s + hp * c};
}

SupportProfile SupportProfile::induced_polygon_profile() const {
  // Candidate vertices: intersections of adjacent supporting lines; keep the
  // feasible ones and read the support off them.
  const double slack = 1e-9 * (1.0 + max_abs());
  std::vector<Complex> feasible;
  for (int g = 0; g < grid_; ++g) {
    const int g2 = (g + 1) % grid_;
    const double a1 = angle(g), a2 = angle(g2);
    // Solve x cos a + y sin a = h for both lines.
    const double det = std::cos(a1) * std::sin(a2) - std::sin(a1) * std::cos(a2);
    const double x =
        (value(g) * std::sin(a2) - value(g2) * std::sin(a1)) / det;
    const double y =
        (value(g2) * std::cos(a1) - value(g) * std::cos(a2)) / det;
    bool ok = true;
    for (int j = 0; j < grid_ && ok; ++j)
      if (x * std::cos(angle(j)) + y * std::sin(angle(j)) > value(j) + slack)
        ok = false;
    if (ok) feasible.emplace_back(x, y);
  }
  if (feasible.empty())
    throw InvalidArgument("SupportProfile: induced polygon is empty");
  return of_points(feasible, grid_);
}

double SupportProfile::consistency_gap() const {
  const SupportProfile p = induced_polygon_profile();
  double gap = 0.0;
  for (int g = 0; g < grid_; ++g)
    gap = std::max(gap, std::abs(p.value(g) - value(g)));
  return gap;
}

SupportProfile support_function(const CMatrix& t, int grid) {
  if (t.rows() != t.cols()) throw InvalidArgument("support_function: not square");
  std::vector<double> vals(static_cast<std::size_t>(grid));
  for (int g = 0; g < grid; ++g) {
    const double phi = kTwoPi * g / grid;
    vals[static_cast<std::size_t>(g)] =
        top_hermitian_eig(Complex(std::cos(phi), -std::sin(phi)) * t);
  }
  return SupportProfile(grid, std::move(vals));
}

SupportProfile nr_unitary(const CMatrix& u, int grid) {
  return SupportProfile::of_points(unitary_eigs(u), grid);
}

double hausdorff(const SupportProfile& a, const SupportProfile& b) {
  if (a.grid() != b.grid()) throw GridMismatch("hausdorff: grids differ");
  double d = 0.0;
  for (int g = 0; g < a.grid(); ++g)
    d = std::max(d, std::abs(a.value(g) - b.value(g)));
  return d;
}

SupportProfile hull_merge(const SupportProfile& a, const SupportProfile& b) {
  if (a.grid() != b.grid()) throw GridMismatch("hull_merge: grids differ");
  std::vector<double> vals(static_cast<std::size_t>(a.grid()));
  for (int g = 0; g < a.grid(); ++g)
    vals[static_cast<std::size_t>(g)] = std::max(a.value(g), b.value(g));
  return SupportProfile(a.grid(), std::move(vals));
}

SupportProfile intersect_family(const std::vector<SupportProfile>& profiles) {
  if (profiles.empty()) throw EmptyFamily("intersect_family: no profiles");
  const int grid = profiles.front().grid();
  std::vector<double> vals(static_cast<std::size_t>(grid), 1e300);
  for (const auto& p : profiles) {
    if (p.grid() != grid) throw GridMismatch("intersect_family: grids differ");
    for (int g = 0; g < grid; ++g)
      vals[static_cast<std::size_t>(g)] =
          std::min(vals[static_cast<std::size_t>(g)], p.value(g));
  }
  return SupportProfile(grid, std::move(vals));
}

WrapReport wrap_gap(const ModelOperator& model,
                    const std::vector<double>& directions, int samples,
                    std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("wrap_gap: samples must be >= 1");
  const int n = model.defect_dim();
  const int count = static_cast<int>(directions.size());

  WrapReport report;
  report.directions = directions;
  report.gaps.resize(directions.size());
  report.minimizers.resize(directions.size());
  report.samples = samples;
  std::vector<long> iters(directions.size(), 0);

  parallel_for(count, [&](int di) {
    const double phi = directions[static_cast<std::size_t>(di)];
    const Complex rot(std::cos(phi), -std::sin(phi));
    const double target = top_hermitian_eig(rot * model.S);

    CMatrix best_omega;
    double best = 0.0;
    long local_iters = 0;

    if (n == 1) {
      // One-parameter family: deterministic scan plus golden-section.
      auto value_at = [&](double alpha) {
        CMatrix om(1, 1);
        om(0, 0) = Complex(std::cos(alpha), std::sin(alpha));
        return dilation_support(model, om, rot);
      };
      const int scan = 1024;
      double best_alpha = 0.0;
      best = 1e300;
      for (int k = 0; k < scan; ++k) {
        const double alpha = kTwoPi * k / scan;
        const double v = value_at(alpha);
        if (v < best) {
          best = v;
          best_alpha = alpha;
        }
      }
      double lo = best_alpha - kTwoPi / scan;
      double hi = best_alpha + kTwoPi / scan;
      double m1 = hi - kGolden * (hi - lo), m2 = lo + kGolden * (hi - lo);
      double f1 = value_at(m1), f2 = value_at(m2);
      for (int it = 0; it < 200 && hi - lo > 1e-12; ++it, ++local_iters) {
        if (f1 < f2) {
          hi = m2; m2 = m1; f2 = f1;
          m1 = hi - kGolden * (hi - lo);
          f1 = value_at(m1);
        } else {
          lo = m1; m1 = m2; f1 = f2;
          m2 = lo + kGolden * (hi - lo);
          f2 = value_at(m2);
        }
      }
      best_alpha = (lo + hi) / 2.0;
      best = value_at(best_alpha);
      best_omega.resize(1, 1);
      best_omega(0, 0) = Complex(std::cos(best_alpha), std::sin(best_alpha));
    } else {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(di)));
      best = 1e300;
      for (int s = 0; s < samples; ++s) {
        const CMatrix om = haar_unitary(n, rng);
        const double v = dilation_support(model, om, rot);
        if (v < best) {
          best = v;
          best_omega = om;
        }
      }
      // Local refinement in the exponential chart around the best sample.
      const CMatrix anchor = best_omega;
      auto objective = [&](const Eigen::VectorXd& p) {
        UnitaryParams up{n, p};
        return dilation_support(model, anchor * unitary_from_params(up), rot);
      };
      const SimplexResult res = nelder_mead(
          objective, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * n),
          0.15, 1e-6, 500);
      local_iters += res.iterations;
      if (res.value < best) {
        best = res.value;
        UnitaryParams up{n, res.x};
        best_omega = anchor * unitary_from_params(up);
      }
    }

    const double gap = best - target;
    if (gap < -1e-8)
      throw ResidualTooLarge("wrap_gap: containment violated beyond roundoff");
    report.gaps[static_cast<std::size_t>(di)] = gap;
    report.minimizers[static_cast<std::size_t>(di)] = best_omega;
    iters[static_cast<std::size_t>(di)] = local_iters;
  });

  for (long it : iters) report.refine_iterations += it;
  return report;
}

SupportProfile ellipse_oracle(const CMatrix& t, int grid) {
  if (t.rows() != 2 || t.cols() != 2)
    throw InvalidArgument("ellipse_oracle: expected a 2x2 matrix");
  Eigen::ComplexEigenSolver<CMatrix> es(t, false);
  const Complex l1 = es.eigenvalues()(0), l2 = es.eigenvalues()(1);
  const double tr = (t.adjoint() * t).trace().real();
  const double minor_sq = tr - std::norm(l1) - std::norm(l2);
  const double b = 0.5 * std::sqrt(std::max(minor_sq, 0.0));
  const double c = 0.5 * std::abs(l2 - l1);
  const double a = std::hypot(b, c);
  const Complex center = 0.5 * (l1 + l2);
  const double psi = (c > 0.0) ? std::arg(l2 - l1) : 0.0;

  std::vector<double> vals(static_cast<std::size_t>(grid));
  for (int g = 0; g < grid; ++g) {
    const double phi = kTwoPi * g / grid;
    const double rel = phi - psi;
    const double radial = std::sqrt(a * a * std::cos(rel) * std::cos(rel) +
                                    b * b * std::sin(rel) * std::sin(rel));
    vals[static_cast<std::size_t>(g)] =
        (Complex(std::cos(phi), -std::sin(phi)) * center).real() + radial;
  }
  return SupportProfile(grid, std::move(vals));
}

std::vector<Complex> rayleigh_samples(const CMatrix& t, int count,
                                      std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("rayleigh_samples: count must be >= 1");
  if (t.rows() != t.cols()) throw InvalidArgument("rayleigh_samples: not square");
  Rng rng(seed);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const CVector x = haar_vector(static_cast<int>(t.rows()), rng);
    out.push_back(x.dot(t * x));  // dot conjugates x: <Tx, x>
  }
  return out;
}

std::vector<double> uniform_directions(int count) {
  std::vector<double> dirs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) dirs[static_cast<std::size_t>(i)] = kTwoPi * i / count;
  return dirs;
}

}  // namespace dilab
