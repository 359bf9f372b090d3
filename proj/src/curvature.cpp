#include "mixcurv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixcurv/error.hpp"

namespace mixcurv {

namespace {

double max_edge_length_sq(const Polygon2& p) {
  double l2 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) l2 = std::max(l2, (p.at(static_cast<std::ptrdiff_t>(k) + 1) - p[k]).squaredNorm());
  return l2;
}

void require_area(double area_m, const Polygon2& m, Index f) {
  if (!(std::abs(area_m) > 1e-12 * max_edge_length_sq(m)))
    fail(ErrorKind::VanishingFaceArea, "face " + std::to_string(f) + " of m has vanishing area");
}

// Least-squares fit s_k - s_mean = lambda (m_k - m_mean); similar when the
// fit is exact up to rounding.
bool homothetic(const Polygon2& m, const Polygon2& s) {
  Vec2 cm = Vec2::Zero(), cs = Vec2::Zero();
  for (std::size_t k = 0; k < m.size(); ++k) {
    cm += m[k];
    cs += s[k];
  }
  cm /= static_cast<double>(m.size());
  cs /= static_cast<double>(s.size());
  double num = 0.0, den = 0.0, s_scale = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    num += (m[k] - cm).dot(s[k] - cs);
    den += (m[k] - cm).squaredNorm();
    s_scale = std::max(s_scale, (s[k] - cs).norm());
  }
  if (den == 0.0) return false;
  const double lambda = num / den;
  double residual = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k)
    residual = std::max(residual, ((s[k] - cs) - lambda * (m[k] - cm)).norm());
  return residual <= 1e-9 * s_scale;
}

double side_curvature(const Vec3& ma, const Vec3& mb, const Vec3& sa, const Vec3& sb) {
  const Vec3 dm = mb - ma;
  const double len2 = dm.squaredNorm();
  if (!(len2 > 0.0)) fail(ErrorKind::ZeroMeshEdge, "edge of m has zero length");
  return -(sb - sa).dot(dm) / len2;
}

}  // namespace

std::optional<PrincipalCurvatures> principal_curvatures(double H, double K) {
  double disc = H * H - K;
  if (disc < 0.0 && disc >= -1e-12 * std::max(H * H, std::abs(K))) disc = 0.0;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  return PrincipalCurvatures{H - root, H + root};
}

FacePolygons face_polygons(const ParallelPair& pair, Index f) {
  const FacePlane& chart = pair.chart(f);
  std::vector<Vec2> pm, ps;
  for (Index v : pair.m().combinatorics().face(f)) {
    pm.push_back(chart.project(pair.m().position(v)));
    ps.push_back(chart.project(pair.s().position(v)));
  }
  return {Polygon2(std::move(pm)), Polygon2(std::move(ps))};
}

FaceAreas face_areas(const ParallelPair& pair, Index f) {
  const FacePolygons polys = face_polygons(pair, f);
  return {area(polys.m), area(polys.s), mixed_area(polys.m, polys.s)};
}

FaceCurvatureReport face_curvatures(const ParallelPair& pair, Index f) {
  const FacePolygons polys = face_polygons(pair, f);
  FaceCurvatureReport r;
  r.face = f;
  r.area_m = area(polys.m);
  r.area_s = area(polys.s);
  r.mixed = mixed_area(polys.m, polys.s);
  require_area(r.area_m, polys.m, f);
  r.H = -r.mixed / r.area_m;
  r.K = r.area_s / r.area_m;
  r.principal = principal_curvatures(r.H, r.K);
  r.similar = homothetic(polys.m, polys.s);
  r.planarity_residual = pair.chart(f).residual;
  return r;
}

SteinerCheck steiner_area(const ParallelPair& pair, Index f, double t) {
  const FaceCurvatureReport fc = face_curvatures(pair, f);
  const FacePolygons polys = face_polygons(pair, f);
  SteinerCheck c;
  c.area = area(combine(1.0, polys.m, t, polys.s));
  c.predicted = (1.0 - 2.0 * fc.H * t + fc.K * t * t) * fc.area_m;
  c.relative_error = std::abs(c.area - c.predicted) / (std::abs(fc.area_m) * std::max(1.0, t * t));
  return c;
}

std::vector<EdgeCurvature> edge_curvatures(const ParallelPair& pair) {
  const Mesh& m = pair.m();
  const Mesh& s = pair.s();
  std::vector<EdgeCurvature> out;
  const auto& edges = m.combinatorics().edges();
  for (Index e = 0; e < edges.size(); ++e) {
    const Index i = edges[e].i, j = edges[e].j;
    EdgeCurvature ec;
    ec.edge = e;
    ec.i = i;
    ec.j = j;
    ec.kappa = side_curvature(m.position(i), m.position(j), s.position(i), s.position(j));
    const double len = (m.position(j) - m.position(i)).norm();
    const double s_scale = std::max(s.position(i).norm(), s.position(j).norm());
    if (ec.kappa != 0.0 && std::abs(ec.kappa) * len > 1e-12 * s_scale)
      ec.center = m.position(i) + s.position(i) / ec.kappa;
    out.push_back(ec);
  }
  return out;
}

std::array<double, 4> face_edge_curvatures(const ParallelPair& pair, Index f) {
  const auto cycle = pair.m().combinatorics().face(f);
  if (cycle.size() != 4) fail(ErrorKind::NotQuadMesh, "face " + std::to_string(f) + " is not a quad");
  std::array<double, 4> k{};
  for (std::size_t c = 0; c < 4; ++c) {
    const Index a = cycle[c], b = cycle[(c + 1) % 4];
    k[c] = side_curvature(pair.m().position(a), pair.m().position(b), pair.s().position(a), pair.s().position(b));
  }
  return k;
}

MeanGauss face_from_edge_curvatures(double k01, double k12, double k23, double k30, double tol) {
  const double den = k01 + k23 - k12 - k30;
  const double scale = std::max({std::abs(k01), std::abs(k12), std::abs(k23), std::abs(k30)});
  if (!(std::abs(den) >= tol * scale) || scale == 0.0)
    fail(ErrorKind::SingularDenominator, "edge curvatures leave the face curvature undetermined");
  return {(k01 * k23 - k12 * k30) / den, (k01 * k23 * (k30 + k12) - k12 * k30 * (k23 + k01)) / den};
}

MeanGauss parallel_family_curvatures(double H, double K, double t) {
  const double den = 1.0 - 2.0 * H * t + K * t * t;
  if (std::abs(den) <= 1e-12 * (1.0 + std::abs(2.0 * H * t) + std::abs(K * t * t)))
    fail(ErrorKind::DegenerateOffsetFace, "offset face at t = " + std::to_string(t) + " has vanishing area");
  return {(H - K * t) / den, K / den};
}

WeingartenCoefficients weingarten_coefficients(double H0, double t) {
  if (H0 == 0.0 || !std::isfinite(H0)) fail(ErrorKind::ZeroMeanCurvature, "mean curvature must be nonzero");
  return {1.0 / H0 - 2.0 * t, t / H0 - t * t};
}

ConstantCurvatureReport constant_curvature_check(const ParallelPair& pair,
                                                 const CurvatureTarget& target, double tol) {
  if (target.kind == CurvatureKind::constant_mean && target.value == 0.0)
    fail(ErrorKind::ZeroMeanCurvature, "cmc target needs H0 != 0");
  ConstantCurvatureReport r;
  r.target = target;
  if (target.kind == CurvatureKind::constant_mean) r.dual_residual = 0.0;
  for (Index f = 0; f < pair.m().face_count(); ++f) {
    const FaceCurvatureReport fc = face_curvatures(pair, f);
    double dev = 0.0;
    switch (target.kind) {
      case CurvatureKind::minimal: dev = std::abs(fc.H); break;
      case CurvatureKind::constant_mean: dev = std::abs(fc.H - target.value); break;
      case CurvatureKind::constant_gaussian: dev = std::abs(fc.K - target.value); break;
    }
    if (!r.worst_face || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_face = f;
    }
    if (target.kind == CurvatureKind::constant_mean) {
      const FacePolygons polys = face_polygons(pair, f);
      const Polygon2 dual = combine(1.0, polys.m, 1.0 / target.value, polys.s);
      r.dual_residual = std::max(*r.dual_residual, std::abs(mixed_area(polys.m, dual)) / std::abs(fc.area_m));
    }
  }
  r.pass = r.max_deviation <= tol && (!r.dual_residual || *r.dual_residual <= tol);
  return r;
}

}  // namespace mixcurv
