#pragma once

#include <optional>
#include <vector>

#include "mixcurv/mesh.hpp"
#include "mixcurv/polygon_area.hpp"

namespace mixcurv {

struct DualQuadDiagnostics {
  double mixed_area = 0.0;
  // |A(P,Q)| / (diam P diam Q)
  double normalized_mixed_area = 0.0;
  // Sine of the angle between p0p2 and q1q3, and between p1p3 and q0q2.
  double diagonal_sine_02 = 0.0;
  double diagonal_sine_13 = 0.0;
  bool mixed_area_vanishes = false;
  bool diagonals_parallel = false;
  bool criteria_agree = false;

  bool dual() const { return mixed_area_vanishes; }
};

// Throws NotParallel, InvalidArgument (not quads).
DualQuadDiagnostics is_dual_quads(const Polygon2& p, const Polygon2& q, double area_tol = 1e-10,
                                  double angle_tol = 1e-8);

// Dual quad of P with q0 = 0 and q1 - q0 = p1 - p0. Throws DegenerateQuad.
Polygon2 dual_quad(const Polygon2& p);

struct DualityReport {
  std::vector<double> mixed_areas;
  double max_normalized = 0.0;
  bool pass = true;
};

DualityReport duality_report(const ParallelPair& pair, double tol);

struct DualSeed {
  Index edge = 0;
  double scale = 1.0;
};

struct KoenigsSolve {
  Mesh dual;
  // Relative mismatch of edge scale factors and vertex positions over cycles.
  double closure_residual = 0.0;
  DualSeed seed;
  std::vector<double> edge_scales;
};

// Builds the candidate dual without judging closure. Throws NotQuadMesh,
// DegenerateQuad, NonPlanarFace, NotConnected.
KoenigsSolve solve_christoffel_dual(const Mesh& m, const DualSeed& seed = {});
// As above; additionally throws ClosureViolation when the residual exceeds tol.
KoenigsSolve christoffel_dual(const Mesh& m, const DualSeed& seed = {}, double tol = 1e-9);

struct KoenigsCheck {
  bool koenigs = false;
  double residual = 0.0;
};

KoenigsCheck is_koenigs(const Mesh& m, double tol);

class IncirclePolygon {
 public:
  // Least-squares incircle of P. Throws NoIncircle when the edge lines are not
  // tangent to a common circle or a tangency point leaves its edge.
  static IncirclePolygon fit(const Polygon2& p, double rel_tol = 1e-9);
  // Polygon circumscribed about the circle, touching it at the given angles
  // (strictly increasing, consecutive gaps below pi, total span below 2 pi).
  static IncirclePolygon from_tangent_angles(const Vec2& center, double radius,
                                             const std::vector<double>& angles);

  const Polygon2& polygon() const { return polygon_; }
  const Vec2& center() const { return center_; }
  double radius() const { return radius_; }
  // tangency(i) lies on the edge from vertex i-1 to vertex i.
  const std::vector<Vec2>& tangency_points() const { return tangency_; }
  // |p_i - q_i| = |p_i - q_{i+1}|
  double tangent_length(std::size_t i) const;

 private:
  IncirclePolygon(Polygon2 p, Vec2 center, double radius, std::vector<Vec2> tangency);

  Polygon2 polygon_;
  Vec2 center_;
  double radius_;
  std::vector<Vec2> tangency_;
};

// Dual polygon with the same incircle radius, centered at the origin, with
// edges parallel to P. Throws OddVertexCount.
Polygon2 incircle_dual(const IncirclePolygon& p);

// Kites (z, q_i, p_i, q_{i+1}) of P and the matching kites of the dual.
std::vector<Polygon2> incircle_kites(const IncirclePolygon& p);
std::vector<Polygon2> incircle_dual_kites(const IncirclePolygon& p);

// s split into one polygon per face together with the dual of every face.
struct FacewiseDual {
  Mesh gauss;
  Mesh minimal;
};

// Throws NoIncircle, OddVertexCount, NonPlanarFace.
FacewiseDual facewise_incircle_dual(const Mesh& s, double rel_tol = 1e-9);

struct IncircleAssembly {
  Mesh minimal;
  double closure_residual = 0.0;
};

// Glues the face duals on the combinatorics of s, allowing one scale factor
// per face. Throws ClosureViolation when no consistent choice exists.
IncircleAssembly assemble_incircle_dual(const Mesh& s, double tol = 1e-9);

struct MinimalCheck {
  double max_abs_H = 0.0;
  double max_normalized_mixed = 0.0;
  // max |k1 + k2| / max(|k1|, |k2|); infinity if some face lacks real roots.
  double max_principal_asymmetry = 0.0;
  bool pass = false;
};

// Throws NoIncircle, OddVertexCount and pair validation errors.
MinimalCheck s_isothermic_minimal_check(const Mesh& s, const Mesh& m, double tol);

struct CmcDualReport {
  Mesh gauss;
  double max_distance_deviation = 0.0;
  double max_unit_deviation = 0.0;
  double max_H_deviation = 0.0;
  bool pass = false;
};

// s = H0 (m* - m). Throws CombinatoricsMismatch, NotParallel,
// DistanceNotConstant, ZeroMeanCurvature.
CmcDualReport cmc_dual_check(const Mesh& m, const Mesh& m_star, double H0, double tol);

}  // namespace mixcurv
