#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dilab/dilation.hpp"
#include "dilab/modelspace.hpp"

namespace dilab {

/**
 * A convex compact set represented by its support-function values
 * h(phi_g) = max Re(e^{-i phi_g} w) on G equispaced directions
 * phi_g = 2 pi g / G. The common currency for numerical ranges, Hausdorff
 * distances, hull merges and intersections.
 */
class SupportProfile {
 public:
  SupportProfile(int grid, std::vector<double> values);

  static SupportProfile of_point(Complex w, int grid);
  static SupportProfile of_points(const std::vector<Complex>& hull_points,
                                  int grid);

  int grid() const { return grid_; }
  double angle(int g) const;
  double value(int g) const { return values_[static_cast<std::size_t>(g)]; }
  const std::vector<double>& values() const { return values_; }
  double max_abs() const;

  /// Boundary point h u + h' u_perp, tangential part by central differences.
  std::array<double, 2> boundary_point(int g) const;

  /**
   * Support values of the induced polygon (the intersection of the G
   * half-planes). Equal to the profile itself, within roundoff, whenever the
   * profile came from an actual convex set; a pointwise-min profile may sit
   * strictly above its polygon.
   */
  SupportProfile induced_polygon_profile() const;
  double consistency_gap() const;

 private:
  int grid_;
  std::vector<double> values_;
};

/// Support function of the numerical range: h(phi) is the top eigenvalue of
/// the Hermitian part of e^{-i phi} T.
SupportProfile support_function(const CMatrix& t, int grid);

/// Numerical range of a unitary matrix: convex hull of its eigenvalues.
SupportProfile nr_unitary(const CMatrix& u, int grid);

/// Hausdorff distance of convex compacts = sup-norm distance of support
/// functions (exact up to grid discretization).
double hausdorff(const SupportProfile& a, const SupportProfile& b);

/// Closed convex hull of the union: pointwise max.
SupportProfile hull_merge(const SupportProfile& a, const SupportProfile& b);

/// Outer approximation of the intersection: pointwise min over the family.
SupportProfile intersect_family(const std::vector<SupportProfile>& profiles);

/// Per-direction wrapping gaps inf_Omega h_{U_Omega}(phi) - h_{S_Theta}(phi).
struct WrapReport {
  std::vector<double> directions;
  std::vector<double> gaps;
  std::vector<CMatrix> minimizers;
  int samples = 0;
  long refine_iterations = 0;  // total across directions
};

/**
 * Wrapping-gap optimizer. For N = 1 a deterministic phase scan (1024 points)
 * with golden-section refinement; otherwise `samples` Haar starts per
 * direction (stream derived from (seed, direction index)) refined by
 * Nelder-Mead in the exponential chart around the best sample.
 */
WrapReport wrap_gap(const ModelOperator& model,
                    const std::vector<double>& directions, int samples,
                    std::uint64_t seed);

/// Independent 2x2 oracle: the numerical range is the ellipse with foci at
/// the eigenvalues and minor axis sqrt(tr(T*T) - |l1|^2 - |l2|^2).
SupportProfile ellipse_oracle(const CMatrix& t, int grid);

/// Rayleigh quotients <Tx, x> at Haar-random unit vectors.
std::vector<Complex> rayleigh_samples(const CMatrix& t, int count,
                                      std::uint64_t seed);

/// Equispaced wrap/test directions in [0, 2pi).
std::vector<double> uniform_directions(int count);

}  // namespace dilab
