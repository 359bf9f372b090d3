#include "mixcurv/duality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "mixcurv/curvature.hpp"
#include "mixcurv/error.hpp"

namespace mixcurv {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double sine_between(const Vec2& a, const Vec2& b) {
  const double la = a.norm(), lb = b.norm();
  if (la == 0.0 || lb == 0.0) return 0.0;
  return std::abs(cross2(a, b)) / (la * lb);
}

double diameter(const Polygon2& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, (p[i] - p[j]).norm());
  return d;
}

// Intersection a + x u = b + y v; returns x. Throws DegenerateQuad when the
// lines are (nearly) parallel.
double line_param(const Vec2& a, const Vec2& u, const Vec2& b, const Vec2& v) {
  const double den = cross2(u, v);
  if (std::abs(den) <= 1e-12 * u.norm() * v.norm())
    fail(ErrorKind::DegenerateQuad, "dual quad construction is singular");
  return cross2(b - a, v) / den;
}

// Per-face dual edge factors: dual side k = ratio[k] * (p_{k+1} - p_k).
std::vector<double> dual_quad_ratios(const Polygon2& p) {
  const Polygon2 q = dual_quad(p);
  std::vector<double> r(4);
  for (std::size_t k = 0; k < 4; ++k) {
    const Vec2 e = p.at(static_cast<std::ptrdiff_t>(k) + 1) - p[k];
    const Vec2 d = q.at(static_cast<std::ptrdiff_t>(k) + 1) - q[k];
    r[k] = d.dot(e) / e.squaredNorm();
  }
  return r;
}

struct ScaleField {
  std::vector<double> edge_scale;
  double residual = 0.0;
};

// Breadth-first over faces: face f receives a factor lambda_f and edge e of
// side k gets lambda_f * ratios[f][k]; faces met again are compared.
ScaleField propagate_face_scales(const MeshCombinatorics& comb,
                                 const std::vector<std::vector<double>>& ratios,
                                 const DualSeed& seed) {
  ScaleField out;
  const std::size_t nf = comb.face_count();
  if (nf == 0) return out;
  if (seed.edge >= comb.edge_count()) fail(ErrorKind::InvalidIndex, "seed edge out of range");
  if (seed.scale == 0.0 || !std::isfinite(seed.scale))
    fail(ErrorKind::InvalidArgument, "seed scale must be finite and nonzero");

  auto side_of = [&](Index f, Index e) {
    const auto cycle = comb.face(f);
    for (std::size_t k = 0; k < cycle.size(); ++k)
      if (comb.face_side_edge(f, k) == e) return k;
    return cycle.size();
  };

  std::vector<double> lambda(nf, 0.0);
  std::vector<bool> visited(nf, false);
  std::vector<bool> set(comb.edge_count(), false);
  out.edge_scale.assign(comb.edge_count(), 0.0);

  const Index f0 = comb.edge_faces(seed.edge)[0];
  const double r0 = ratios[f0][side_of(f0, seed.edge)];
  if (r0 == 0.0) fail(ErrorKind::DegenerateQuad, "seed edge has a vanishing dual edge");
  lambda[f0] = seed.scale / r0;
  visited[f0] = true;
  std::deque<Index> queue{f0};
  while (!queue.empty()) {
    const Index f = queue.front();
    queue.pop_front();
    const auto cycle = comb.face(f);
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Index e = comb.face_side_edge(f, k);
      const double mine = lambda[f] * ratios[f][k];
      if (!set[e]) {
        out.edge_scale[e] = mine;
        set[e] = true;
      } else {
        const double ref = std::max(std::abs(mine), std::abs(out.edge_scale[e]));
        if (ref > 0.0) out.residual = std::max(out.residual, std::abs(mine - out.edge_scale[e]) / ref);
      }
      for (Index g : comb.edge_faces(e)) {
        if (visited[g]) continue;
        const double rg = ratios[g][side_of(g, e)];
        if (rg == 0.0) fail(ErrorKind::DegenerateQuad, "face " + std::to_string(g) + " has a vanishing dual edge");
        lambda[g] = out.edge_scale[e] / rg;
        visited[g] = true;
        queue.push_back(g);
      }
    }
  }
  if (std::find(visited.begin(), visited.end(), false) != visited.end())
    fail(ErrorKind::NotConnected, "face adjacency graph is not connected");
  return out;
}

// Integrates s_j - s_i = mu_e (m_j - m_i) from the first vertex of the seed
// edge; returns positions and the relative edge mismatch.
std::pair<std::vector<Vec3>, double> integrate_edges(const Mesh& m, const std::vector<double>& mu,
                                                     Index start) {
  const auto& comb = m.combinatorics();
  const std::size_t n = m.vertex_count();
  std::vector<Vec3> out(n, Vec3::Zero());
  std::vector<bool> placed(n, false);
  if (n == 0) return {out, 0.0};
  placed[start] = true;
  std::deque<Index> queue{start};
  while (!queue.empty()) {
    const Index i = queue.front();
    queue.pop_front();
    for (Index j : comb.vertex_neighbors(i)) {
      if (placed[j]) continue;
      const Index e = *comb.find_edge(i, j);
      out[j] = out[i] + mu[e] * (m.position(j) - m.position(i));
      placed[j] = true;
      queue.push_back(j);
    }
  }
  if (std::find(placed.begin(), placed.end(), false) != placed.end())
    fail(ErrorKind::NotConnected, "vertex graph is not connected");
  double residual = 0.0;
  const auto& edges = comb.edges();
  for (Index e = 0; e < edges.size(); ++e) {
    const Vec3 want = mu[e] * (m.position(edges[e].j) - m.position(edges[e].i));
    const Vec3 got = out[edges[e].j] - out[edges[e].i];
    const double ref = std::max(want.norm(), got.norm());
    if (ref > 0.0) residual = std::max(residual, (want - got).norm() / ref);
  }
  return {out, residual};
}

Polygon2 project_face(const FacePlane& plane, const std::vector<Vec3>& pts) {
  std::vector<Vec2> out;
  for (const auto& p : pts) out.push_back(plane.project(p));
  return Polygon2(std::move(out));
}

std::vector<double> edge_ratios(const Polygon2& p, const Polygon2& q) {
  std::vector<double> r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vec2 e = p.at(static_cast<std::ptrdiff_t>(k) + 1) - p[k];
    r[k] = (q.at(static_cast<std::ptrdiff_t>(k) + 1) - q[k]).dot(e) / e.squaredNorm();
  }
  return r;
}

}  // namespace

DualQuadDiagnostics is_dual_quads(const Polygon2& p, const Polygon2& q, double area_tol,
                                  double angle_tol) {
  if (p.size() != 4 || q.size() != 4) fail(ErrorKind::InvalidArgument, "quads expected");
  for (std::size_t k = 0; k < 4; ++k) {
    const Vec2 ep = p.at(static_cast<std::ptrdiff_t>(k) + 1) - p[k];
    const Vec2 eq = q.at(static_cast<std::ptrdiff_t>(k) + 1) - q[k];
    const double lp = ep.norm();
    if (lp > 0.0 && std::abs(cross2(ep, eq)) > 1e-9 * lp * std::max(1.0, eq.norm()))
      fail(ErrorKind::NotParallel, "side " + std::to_string(k) + " of the quads is not parallel");
  }
  DualQuadDiagnostics d;
  d.mixed_area = mixed_area(p, q);
  const double scale = diameter(p) * diameter(q);
  d.normalized_mixed_area = scale > 0.0 ? std::abs(d.mixed_area) / scale : 0.0;
  d.diagonal_sine_02 = sine_between(p[2] - p[0], q[3] - q[1]);
  d.diagonal_sine_13 = sine_between(p[3] - p[1], q[2] - q[0]);
  d.mixed_area_vanishes = std::abs(d.mixed_area) <= area_tol * scale;
  d.diagonals_parallel = d.diagonal_sine_02 <= angle_tol && d.diagonal_sine_13 <= angle_tol;
  d.criteria_agree = d.mixed_area_vanishes == d.diagonals_parallel;
  return d;
}

Polygon2 dual_quad(const Polygon2& p) {
  if (p.size() != 4) fail(ErrorKind::NotQuadMesh, "dual quad needs four vertices");
  const Vec2 e0 = p[1] - p[0], e1 = p[2] - p[1], e3 = p[0] - p[3];
  const Vec2 q0 = Vec2::Zero();
  const Vec2 q1 = e0;
  // q2 on q1 + x e1 and on the line through q0 along p3 - p1.
  const Vec2 q2 = q1 + line_param(q1, e1, q0, p[3] - p[1]) * e1;
  // q3 on q1 + x (p2 - p0) and on the line through q0 along e3.
  const Vec2 q3 = q1 + line_param(q1, p[2] - p[0], q0, e3) * (p[2] - p[0]);
  const Polygon2 q({q0, q1, q2, q3});
  const Vec2 e2 = p[3] - p[2];
  const Vec2 d2 = q3 - q2;
  if (std::abs(cross2(e2, d2)) > 1e-8 * e2.norm() * std::max(d2.norm(), e0.norm()))
    fail(ErrorKind::DegenerateQuad, "dual quad does not close");
  return q;
}

DualityReport duality_report(const ParallelPair& pair, double tol) {
  DualityReport r;
  for (Index f = 0; f < pair.m().face_count(); ++f) {
    const FaceAreas a = face_areas(pair, f);
    r.mixed_areas.push_back(a.mixed);
    double den = std::sqrt(std::abs(a.area_m * a.area_s));
    if (den == 0.0) den = std::abs(a.area_m);
    const double normalized = den > 0.0 ? std::abs(a.mixed) / den : std::abs(a.mixed);
    r.max_normalized = std::max(r.max_normalized, normalized);
  }
  r.pass = r.max_normalized <= tol;
  return r;
}

KoenigsSolve solve_christoffel_dual(const Mesh& m, const DualSeed& seed) {
  const auto& comb = m.combinatorics();
  const double plane_tol = default_tolerance(m);
  std::vector<std::vector<double>> ratios;
  for (Index f = 0; f < m.face_count(); ++f) {
    if (comb.face(f).size() != 4) fail(ErrorKind::NotQuadMesh, "face " + std::to_string(f) + " is not a quad");
    const auto pts = m.face_points(f);
    const FacePlane plane = fit_face_plane(pts);
    if (plane.residual > plane_tol)
      fail(ErrorKind::NonPlanarFace, "face " + std::to_string(f) + " is not planar");
    if (plane.zero_area) fail(ErrorKind::DegenerateQuad, "face " + std::to_string(f) + " has zero area");
    ratios.push_back(dual_quad_ratios(project_face(plane, pts)));
  }
  KoenigsSolve out{m, 0.0, seed, {}};
  if (m.face_count() == 0) return out;
  ScaleField field = propagate_face_scales(comb, ratios, seed);
  auto [pos, vertex_residual] = integrate_edges(m, field.edge_scale, comb.edge(seed.edge).i);
  out.dual = Mesh(m.shared_combinatorics(), std::move(pos));
  out.closure_residual = std::max(field.residual, vertex_residual);
  out.edge_scales = std::move(field.edge_scale);
  return out;
}

KoenigsSolve christoffel_dual(const Mesh& m, const DualSeed& seed, double tol) {
  KoenigsSolve out = solve_christoffel_dual(m, seed);
  if (out.closure_residual > tol)
    fail(ErrorKind::ClosureViolation, "mesh is not a Koenigs net, closure residual " +
                                          std::to_string(out.closure_residual));
  return out;
}

KoenigsCheck is_koenigs(const Mesh& m, double tol) {
  const KoenigsSolve s = solve_christoffel_dual(m);
  return {s.closure_residual <= tol, s.closure_residual};
}

IncirclePolygon::IncirclePolygon(Polygon2 p, Vec2 center, double radius, std::vector<Vec2> tangency)
    : polygon_(std::move(p)), center_(std::move(center)), radius_(radius), tangency_(std::move(tangency)) {}

IncirclePolygon IncirclePolygon::fit(const Polygon2& p, double rel_tol) {
  const std::size_t n = p.size();
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  std::vector<Vec2> normals;
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e = p.at(static_cast<std::ptrdiff_t>(k) + 1) - p[k];
    if (e.norm() == 0.0) fail(ErrorKind::NoIncircle, "polygon has a zero-length edge");
    const Vec2 nrm = Vec2(-e.y(), e.x()).normalized();
    normals.push_back(nrm);
    a.row(static_cast<Eigen::Index>(k)) << nrm.x(), nrm.y(), -1.0;
    b(static_cast<Eigen::Index>(k)) = nrm.dot(p[k]);
    scale = std::max(scale, e.norm());
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  const Vec2 z(sol(0), sol(1));
  const double rho = sol(2);
  const double residual = (a * sol - b).cwiseAbs().maxCoeff();
  if (!(std::abs(rho) > rel_tol * scale) || residual > rel_tol * scale)
    fail(ErrorKind::NoIncircle, "edge lines are not tangent to a common circle (residual " +
                                    std::to_string(residual) + ")");
  std::vector<Vec2> tangency(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e = p.at(static_cast<std::ptrdiff_t>(k) + 1) - p[k];
    const double x = (z - p[k]).dot(e) / e.squaredNorm();
    if (x < -rel_tol || x > 1.0 + rel_tol)
      fail(ErrorKind::NoIncircle, "incircle touches the line of edge " + std::to_string(k) + " outside the edge");
    tangency[(k + 1) % n] = p[k] + x * e;
  }
  return IncirclePolygon(p, z, std::abs(rho), std::move(tangency));
}

IncirclePolygon IncirclePolygon::from_tangent_angles(const Vec2& center, double radius,
                                                     const std::vector<double>& angles) {
  const std::size_t n = angles.size();
  if (n < 3) fail(ErrorKind::InvalidArgument, "at least three tangent angles required");
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "radius must be positive");
  constexpr double pi = std::numbers::pi;
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = (k + 1 < n) ? angles[k + 1] - angles[k] : angles[0] + 2.0 * pi - angles[k];
    if (!(gap > 0.0) || !(gap < pi)) fail(ErrorKind::InvalidArgument, "tangent angle gaps must lie in (0, pi)");
  }
  std::vector<Vec2> verts, tangency;
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = (k + 1 < n) ? angles[k + 1] - angles[k] : angles[0] + 2.0 * pi - angles[k];
    const double mid = angles[k] + 0.5 * gap;
    verts.push_back(center + radius / std::cos(0.5 * gap) * Vec2(std::cos(mid), std::sin(mid)));
    tangency.push_back(center + radius * Vec2(std::cos(angles[k]), std::sin(angles[k])));
  }
  return IncirclePolygon(Polygon2(std::move(verts)), center, radius, std::move(tangency));
}

double IncirclePolygon::tangent_length(std::size_t i) const { return (polygon_[i] - tangency_[i]).norm(); }

Polygon2 incircle_dual(const IncirclePolygon& p) {
  const std::size_t n = p.polygon().size();
  if (n % 2 != 0) fail(ErrorKind::OddVertexCount, "incircle duality needs an even vertex count");
  const double rho2 = p.radius() * p.radius();
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = (i % 2 == 0) ? 1.0 : -1.0;
    const Vec2& q = p.tangency_points()[i];
    const double t = p.tangent_length(i);
    const Vec2 q_star = eps * (q - p.center());
    out.push_back(q_star - eps * rho2 * (p.polygon()[i] - q) / (t * t));
  }
  return Polygon2(std::move(out));
}

std::vector<Polygon2> incircle_kites(const IncirclePolygon& p) {
  const std::size_t n = p.polygon().size();
  const auto& q = p.tangency_points();
  std::vector<Polygon2> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::vector<Vec2>{p.center(), q[i], p.polygon()[i], q[(i + 1) % n]});
  return out;
}

std::vector<Polygon2> incircle_dual_kites(const IncirclePolygon& p) {
  const Polygon2 dual = incircle_dual(p);
  const std::size_t n = dual.size();
  const auto& q = p.tangency_points();
  auto q_star = [&](std::size_t i) { return ((i % 2 == 0) ? 1.0 : -1.0) * (q[i % n] - p.center()); };
  std::vector<Polygon2> out;
  for (std::size_t i = 0; i < n; ++i)
    out.emplace_back(std::vector<Vec2>{Vec2::Zero(), q_star(i), dual[i], q_star(i + 1)});
  return out;
}

FacewiseDual facewise_incircle_dual(const Mesh& s, double rel_tol) {
  std::vector<std::vector<Index>> faces;
  std::vector<Vec3> gauss_pts, minimal_pts;
  for (Index f = 0; f < s.face_count(); ++f) {
    const auto pts = s.face_points(f);
    const FacePlane plane = fit_face_plane(pts);
    const IncirclePolygon ip = IncirclePolygon::fit(project_face(plane, pts), rel_tol);
    const Polygon2 dual = incircle_dual(ip);
    std::vector<Index> cycle;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      cycle.push_back(gauss_pts.size());
      gauss_pts.push_back(pts[k]);
      minimal_pts.push_back(plane.lift(dual[k]));
    }
    faces.push_back(std::move(cycle));
  }
  auto comb = build_combinatorics(gauss_pts.size(), std::move(faces));
  return {Mesh(comb, std::move(gauss_pts)), Mesh(comb, std::move(minimal_pts))};
}

IncircleAssembly assemble_incircle_dual(const Mesh& s, double tol) {
  const auto& comb = s.combinatorics();
  std::vector<std::vector<double>> ratios;
  for (Index f = 0; f < s.face_count(); ++f) {
    const auto pts = s.face_points(f);
    const FacePlane plane = fit_face_plane(pts);
    const Polygon2 poly = project_face(plane, pts);
    ratios.push_back(edge_ratios(poly, incircle_dual(IncirclePolygon::fit(poly))));
  }
  if (s.face_count() == 0) return {s, 0.0};
  const ScaleField field = propagate_face_scales(comb, ratios, DualSeed{});
  auto [pos, vertex_residual] = integrate_edges(s, field.edge_scale, comb.edge(0).i);
  const double residual = std::max(field.residual, vertex_residual);
  if (residual > tol)
    fail(ErrorKind::ClosureViolation, "face duals cannot be glued consistently, residual " +
                                          std::to_string(residual));
  return {Mesh(s.shared_combinatorics(), std::move(pos)), residual};
}

MinimalCheck s_isothermic_minimal_check(const Mesh& s, const Mesh& m, double tol) {
  for (Index f = 0; f < s.face_count(); ++f) {
    const auto pts = s.face_points(f);
    if (pts.size() % 2 != 0) fail(ErrorKind::OddVertexCount, "face " + std::to_string(f) + " has odd vertex count");
    IncirclePolygon::fit(project_face(fit_face_plane(pts), pts));
  }
  const ParallelPair pair(m, s);
  MinimalCheck r;
  for (Index f = 0; f < m.face_count(); ++f) {
    const FaceCurvatureReport fc = face_curvatures(pair, f);
    r.max_abs_H = std::max(r.max_abs_H, std::abs(fc.H));
    const double den = std::sqrt(std::abs(fc.area_m * fc.area_s));
    r.max_normalized_mixed = std::max(r.max_normalized_mixed, den > 0.0 ? std::abs(fc.mixed) / den : std::abs(fc.mixed));
    if (!fc.principal) {
      r.max_principal_asymmetry = std::numeric_limits<double>::infinity();
      continue;
    }
    const double k1 = fc.principal->kappa1, k2 = fc.principal->kappa2;
    const double ref = std::max(std::abs(k1), std::abs(k2));
    if (ref > 0.0) r.max_principal_asymmetry = std::max(r.max_principal_asymmetry, std::abs(k1 + k2) / ref);
  }
  r.pass = r.max_normalized_mixed <= tol && r.max_principal_asymmetry <= tol;
  return r;
}

CmcDualReport cmc_dual_check(const Mesh& m, const Mesh& m_star, double H0, double tol) {
  if (!same_combinatorics(m, m_star))
    fail(ErrorKind::CombinatoricsMismatch, "m and m* do not share combinatorics");
  if (H0 == 0.0 || !std::isfinite(H0)) fail(ErrorKind::ZeroMeanCurvature, "H0 must be nonzero");
  const ParallelCheck par = check_parallel(m, m_star, default_tolerance(m));
  if (!par.pass)
    fail(ErrorKind::NotParallel, "m and m* are not parallel at edge " + std::to_string(*par.first_failing_edge));
  const double dist = 1.0 / std::abs(H0);
  double dist_dev = 0.0;
  std::vector<Vec3> g(m.vertex_count());
  for (Index v = 0; v < m.vertex_count(); ++v) {
    const Vec3 d = m_star.position(v) - m.position(v);
    dist_dev = std::max(dist_dev, std::abs(d.norm() - dist));
    g[v] = H0 * d;
  }
  if (dist_dev > tol)
    fail(ErrorKind::DistanceNotConstant, "|m* - m| deviates from 1/|H0| by " + std::to_string(dist_dev));
  CmcDualReport r{Mesh(m.shared_combinatorics(), std::move(g)), dist_dev, 0.0, 0.0, false};
  for (const auto& p : r.gauss.positions()) r.max_unit_deviation = std::max(r.max_unit_deviation, std::abs(p.norm() - 1.0));
  const ParallelPair pair(m, r.gauss);
  for (Index f = 0; f < m.face_count(); ++f)
    r.max_H_deviation = std::max(r.max_H_deviation, std::abs(face_curvatures(pair, f).H - H0));
  r.pass = r.max_unit_deviation <= tol && r.max_H_deviation <= tol;
  return r;
}

}  // namespace mixcurv
