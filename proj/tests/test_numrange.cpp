#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dilab/numrange.hpp"
#include "helpers.hpp"

using namespace dilab;
using dilab::testing::monomial_product;
using dilab::testing::random_matrix;
using dilab::testing::random_product;

namespace {

constexpr int kGrid = 720;

CMatrix jordan2() {
  CMatrix j(2, 2);
  j << 0, 1, 0, 0;
  return j;
}

SupportProfile disc_profile(double radius, int grid) {
  return SupportProfile(grid, std::vector<double>(grid, radius));
}

}  // namespace

TEST_CASE("support_function closed forms") {
  const SupportProfile zero = support_function(CMatrix::Zero(2, 2), kGrid);
  CHECK(zero.max_abs() < 1e-14);

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  const SupportProfile seg = support_function(diag, kGrid);
  for (int g = 0; g < kGrid; g += 7)
    CHECK(seg.value(g) == doctest::Approx(std::abs(std::cos(seg.angle(g)))));

  const SupportProfile j = support_function(jordan2(), kGrid);
  for (int g = 0; g < kGrid; g += 7) CHECK(j.value(g) == doctest::Approx(0.5));
}

TEST_CASE("Jordan-block family has constant support cos(pi/(n+1))") {
  for (int n = 1; n <= 8; ++n) {
    const ModelOperator m = assemble_model(monomial_product(n));
    const SupportProfile p = support_function(m.S, 90);
    const double expected = std::cos(M_PI / (n + 1));
    for (int g = 0; g < p.grid(); ++g)
      CHECK(std::abs(p.value(g) - expected) < 1e-8);
  }
}

TEST_CASE("profiles from matrices are consistent support functions") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);
    const SupportProfile p = support_function(random_matrix(n, n, rng), 180);
    CHECK(p.consistency_gap() < 1e-10 * (1.0 + p.max_abs()));
  }
}

TEST_CASE("nr_unitary on closed forms") {
  const SupportProfile pid = nr_unitary(CMatrix::Identity(2, 2), kGrid);
  for (int g = 0; g < kGrid; g += 11)
    CHECK(pid.value(g) == doctest::Approx(std::cos(pid.angle(g))));

  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const SupportProfile pseg = nr_unitary(swap, kGrid);
  for (int g = 0; g < kGrid; g += 11)
    CHECK(pseg.value(g) == doctest::Approx(std::abs(std::cos(pseg.angle(g)))));

  // Cube roots of unity: the equilateral triangle.
  CMatrix c3 = CMatrix::Zero(3, 3);
  c3(0, 2) = 1.0;
  c3(1, 0) = 1.0;
  c3(2, 1) = 1.0;
  const SupportProfile tri = nr_unitary(c3, kGrid);
  std::vector<Complex> verts;
  for (int k = 0; k < 3; ++k) verts.push_back(std::polar(1.0, 2.0 * M_PI * k / 3.0));
  CHECK(hausdorff(tri, SupportProfile::of_points(verts, kGrid)) < 1e-9);

  // Agreement with the eigensolver-free path.
  Rng rng(5);
  const CMatrix u = haar_unitary(4, rng);
  CHECK(hausdorff(nr_unitary(u, kGrid), support_function(u, kGrid)) <= 1e-8);
}

TEST_CASE("hausdorff closed forms") {
  const SupportProfile a = disc_profile(1.0, kGrid);
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, disc_profile(0.5, kGrid)) == doctest::Approx(0.5));

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  const SupportProfile seg = support_function(diag, kGrid);
  const SupportProfile point = SupportProfile::of_point(0.0, kGrid);
  CHECK(hausdorff(seg, point) == doctest::Approx(1.0));

  CHECK_THROWS_AS(hausdorff(a, disc_profile(1.0, 64)), GridMismatch);
}

TEST_CASE("hull_merge") {
  const SupportProfile p1 = SupportProfile::of_point(1.0, kGrid);
  const SupportProfile m1 = SupportProfile::of_point(-1.0, kGrid);
  CHECK(hausdorff(hull_merge(p1, p1), p1) == 0.0);

  const SupportProfile seg = hull_merge(p1, m1);
  for (int g = 0; g < kGrid; g += 13)
    CHECK(seg.value(g) == doctest::Approx(std::abs(std::cos(seg.angle(g)))));

  const SupportProfile cone = hull_merge(disc_profile(0.5, kGrid), p1);
  for (int g = 0; g < kGrid; g += 13)
    CHECK(cone.value(g) ==
          doctest::Approx(std::max(0.5, std::cos(cone.angle(g)))));
}

TEST_CASE("intersect_family") {
  const SupportProfile disc = disc_profile(1.0, kGrid);
  CHECK(hausdorff(intersect_family({disc}), disc) == 0.0);
  CHECK_THROWS_AS(intersect_family({}), EmptyFamily);

  // Diameters of the disc through 0 intersect in {0}.
  std::vector<SupportProfile> diameters;
  for (int k = 0; k < 1024; ++k) {
    const double a = 2.0 * M_PI * k / 1024;
    diameters.push_back(SupportProfile::of_points(
        {std::polar(1.0, a), -std::polar(1.0, a)}, kGrid));
  }
  const SupportProfile origin = intersect_family(diameters);
  CHECK(hausdorff(origin, SupportProfile::of_point(0.0, kGrid)) < 5e-3);

  // Triangles at the cube roots of omega envelope the disc of radius 1/2.
  std::vector<SupportProfile> triangles;
  for (int k = 0; k < 720; ++k) {
    const double a = 2.0 * M_PI * k / 720;
    std::vector<Complex> verts;
    for (int j = 0; j < 3; ++j)
      verts.push_back(std::polar(1.0, (a + 2.0 * M_PI * j) / 3.0));
    triangles.push_back(SupportProfile::of_points(verts, kGrid));
  }
  const SupportProfile envelope = intersect_family(triangles);
  CHECK(hausdorff(envelope, disc_profile(0.5, kGrid)) < 5e-3);
  // Cross-check against the model operator's own range.
  const ModelOperator m2 = assemble_model(monomial_product(2));
  CHECK(hausdorff(envelope, support_function(m2.S, kGrid)) < 5e-3);
}

TEST_CASE("ellipse_oracle closed forms") {
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  const SupportProfile seg = ellipse_oracle(diag, kGrid);
  for (int g = 0; g < kGrid; g += 11)
    CHECK(std::abs(seg.value(g) - std::abs(std::cos(seg.angle(g)))) < 1e-12);

  const SupportProfile circ = ellipse_oracle(jordan2(), kGrid);
  CHECK(hausdorff(circ, disc_profile(0.5, kGrid)) < 1e-12);

  CMatrix imdiag = CMatrix::Zero(2, 2);
  imdiag(0, 0) = Complex(0, 1);
  imdiag(1, 1) = Complex(0, -1);
  const SupportProfile vseg = ellipse_oracle(imdiag, kGrid);
  for (int g = 0; g < kGrid; g += 11)
    CHECK(std::abs(vseg.value(g) - std::abs(std::sin(vseg.angle(g)))) < 1e-12);
}

TEST_CASE("ellipse_oracle agrees with support_function") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix t = random_matrix(2, 2, rng);
    CHECK(hausdorff(support_function(t, 360), ellipse_oracle(t, 360)) <= 1e-8);
  }
}

TEST_CASE("rayleigh_samples stay inside the range") {
  auto ones = rayleigh_samples(CMatrix::Identity(3, 3), 50, 1);
  for (const auto& w : ones) CHECK(std::abs(w - 1.0) < 1e-12);

  auto zeros = rayleigh_samples(CMatrix::Zero(2, 2), 50, 2);
  for (const auto& w : zeros) CHECK(std::abs(w) < 1e-12);

  auto jd = rayleigh_samples(jordan2(), 500, 3);
  for (const auto& w : jd) CHECK(std::abs(w) <= 0.5 + 1e-9);

  Rng rng(11);
  const CMatrix t = random_matrix(4, 4, rng);
  const SupportProfile p = support_function(t, 360);
  for (const auto& w : rayleigh_samples(t, 1000, 4)) {
    for (int g = 0; g < p.grid(); g += 5) {
      const Complex rot(std::cos(p.angle(g)), -std::sin(p.angle(g)));
      CHECK((rot * w).real() <= p.value(g) + 1e-9);
    }
  }
}

TEST_CASE("Lipschitz continuity of the numerical range") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 7);
    const CMatrix t = random_matrix(n, n, rng);
    const CMatrix s = random_matrix(n, n, rng);
    const double dist =
        hausdorff(support_function(t, 180), support_function(s, 180));
    CHECK(dist <= op_norm(t - s) + 1e-9);
  }
}

TEST_CASE("compression continuity bound") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform() * 5);
    const int rank = 2 + static_cast<int>(rng.uniform() * 2);
    CMatrix t = random_matrix(n, n, rng);
    t /= op_norm(t);

    const CMatrix u = haar_unitary(n, rng);
    const CMatrix basis_p = u.leftCols(rank);
    // Rotate the subspace by a bounded amount.
    UnitaryParams up{n, Eigen::VectorXd::Zero(n * n)};
    for (Eigen::Index i = 0; i < up.params.size(); ++i)
      up.params(i) = 0.25 * (2.0 * rng.uniform() - 1.0);
    const CMatrix rot = unitary_from_params(up);
    const CMatrix basis_q = rot * basis_p;

    const CMatrix p = basis_p * basis_p.adjoint();
    const CMatrix q = basis_q * basis_q.adjoint();
    const double sep = op_norm(p - q);
    if (sep > 0.9) continue;

    const SupportProfile wp =
        support_function(basis_p.adjoint() * t * basis_p, 180);
    const SupportProfile wq =
        support_function(basis_q.adjoint() * t * basis_q, 180);
    const double bound =
        op_norm(t) * sep * (1.0 + 2.0 / ((1.0 - sep) * (1.0 - sep)));
    CHECK(hausdorff(wp, wq) <= bound + 1e-8);
  }
}

TEST_CASE("truncation support profiles are monotone and convergent") {
  std::vector<BPFactor> factors;
  for (int j = 1; j <= 6; ++j)
    factors.push_back(BPFactor::full(1.0 - std::pow(2.0, -j), 1));
  const BPProduct full(1, factors);

  std::vector<SupportProfile> profiles;
  for (std::size_t depth = 2; depth <= 6; ++depth) {
    const ModelOperator m = assemble_model(full.truncate(depth));
    profiles.push_back(support_function(m.S, 180));
  }
  for (std::size_t i = 1; i < profiles.size(); ++i)
    for (int g = 0; g < 180; ++g)
      CHECK(profiles[i].value(g) >= profiles[i - 1].value(g) - 1e-9);

  double prev = 1e300;
  for (std::size_t i = 0; i + 1 < profiles.size(); ++i) {
    const double dist = hausdorff(profiles[i], profiles.back());
    CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("wrap_gap scalar cases") {
  const ModelOperator m1 = assemble_model(monomial_product(1));
  const WrapReport r1 = wrap_gap(m1, {0.0}, 1, 0);
  CHECK(r1.gaps[0] >= -1e-8);
  CHECK(r1.gaps[0] <= 1e-6);
  // The minimizer turns the segment perpendicular: omega near -1.
  CHECK(std::abs(r1.minimizers[0](0, 0) + 1.0) < 1e-2);

  const ModelOperator m2 = assemble_model(monomial_product(2));
  const WrapReport r2 = wrap_gap(m2, {0.0}, 1, 0);
  CHECK(r2.gaps[0] >= -1e-8);
  CHECK(r2.gaps[0] <= 5e-3);
}

TEST_CASE("wrap_gap matrix case with deterministic optimum") {
  // Theta = z I_2: Omega = -e^{2 i phi} I gives gap 0 at direction phi.
  const ModelOperator mz =
      assemble_model(BPProduct(2, {BPFactor::full(0.0, 2)}));
  const WrapReport r = wrap_gap(mz, {0.0, 1.1, 2.7}, 64, 7);
  for (double gap : r.gaps) {
    CHECK(gap >= -1e-8);
    CHECK(gap <= 1e-6);
  }
}

TEST_CASE("wrap_gap is deterministic for a fixed seed") {
  Rng rng(19);
  const BPProduct b = random_product(2, {1, 1}, rng);
  const ModelOperator m = assemble_model(b);
  const std::vector<double> dirs = uniform_directions(4);
  const WrapReport a = wrap_gap(m, dirs, 16, 42);
  const WrapReport c = wrap_gap(m, dirs, 16, 42);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    CHECK(a.gaps[i] == c.gaps[i]);
    CHECK(op_norm(a.minimizers[i] - c.minimizers[i]) == 0.0);
  }
}

TEST_CASE("containment: dilation ranges cover the model range") {
  Rng rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 2);
    const BPProduct b =
        random_product(n, dilab::testing::random_ranks(n, 3, rng), rng);
    const ModelOperator m = assemble_model(b);
    const SupportProfile base = support_function(m.S, 90);
    for (int s = 0; s < 8; ++s) {
      const UnitaryDilation dil = build_U_Omega(m, haar_unitary(n, rng));
      const SupportProfile up = support_function(dil.U, 90);
      for (int g = 0; g < 90; ++g) CHECK(up.value(g) >= base.value(g) - 1e-8);
    }
  }
}

TEST_CASE("direct-sum wrapping reduction") {
  Rng rng(29);
  const BPProduct b = monomial_product(2);
  const ModelOperator m = assemble_model(b);
  const CMatrix v = haar_unitary(2, rng);
  const SupportProfile wv = nr_unitary(v, kGrid);

  std::vector<SupportProfile> plain, extended;
  for (int k = 0; k < 256; ++k) {
    CMatrix omega(1, 1);
    omega(0, 0) = std::polar(1.0, 2.0 * M_PI * k / 256);
    const UnitaryDilation dil = build_U_Omega(m, omega);
    plain.push_back(nr_unitary(dil.U, kGrid));
    CMatrix big = CMatrix::Zero(5, 5);
    big.topLeftCorner(3, 3) = dil.U;
    big.bottomRightCorner(2, 2) = v;
    extended.push_back(nr_unitary(big, kGrid));
  }
  const SupportProfile lhs = intersect_family(extended);
  const SupportProfile rhs = hull_merge(intersect_family(plain), wv);
  CHECK(hausdorff(lhs, rhs) < 5e-3);
}
