#include "mixcurv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mixcurv/error.hpp"

namespace mixcurv {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
}

}  // namespace

MeshCombinatorics::MeshCombinatorics(std::size_t vertex_count,
                                     std::vector<std::vector<Index>> faces)
    : vertex_count_(vertex_count), faces_(std::move(faces)) {
  std::vector<std::uint64_t> keys;
  for (Index f = 0; f < faces_.size(); ++f) {
    const auto& cycle = faces_[f];
    if (cycle.size() < 3)
      fail(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " has fewer than 3 vertices");
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Index a = cycle[k];
      const Index b = cycle[(k + 1) % cycle.size()];
      if (a >= vertex_count_ || b >= vertex_count_)
        fail(ErrorKind::InvalidIndex, "face " + std::to_string(f) + " references vertex " +
                                          std::to_string(std::max(a, b)) + " of " +
                                          std::to_string(vertex_count_));
      if (a == b)
        fail(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " repeats vertex " +
                                            std::to_string(a));
      keys.push_back(edge_key(a, b));
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  edges_.reserve(keys.size());
  for (std::size_t e = 0; e < keys.size(); ++e) {
    edges_.push_back({static_cast<Index>(keys[e] >> 32), static_cast<Index>(keys[e] & 0xffffffffu)});
    edge_lookup_.emplace(keys[e], e);
  }

  edge_faces_.assign(edges_.size(), {});
  face_sides_.resize(faces_.size());
  vertex_faces_.assign(vertex_count_, {});
  for (Index f = 0; f < faces_.size(); ++f) {
    const auto& cycle = faces_[f];
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Index e = edge_lookup_.at(edge_key(cycle[k], cycle[(k + 1) % cycle.size()]));
      face_sides_[f].push_back(e);
      edge_faces_[e].push_back(f);
      if (edge_faces_[e].size() > 2)
        fail(ErrorKind::NonManifoldEdge, "edge " + edge_name(edges_[e]) + " belongs to more than two faces");
      auto& vf = vertex_faces_[cycle[k]];
      if (std::find(vf.begin(), vf.end(), f) == vf.end()) vf.push_back(f);
    }
  }

  neighbors_.assign(vertex_count_, {});
  for (const auto& e : edges_) {
    neighbors_[e.i].push_back(e.j);
    neighbors_[e.j].push_back(e.i);
  }
  for (auto& n : neighbors_) std::sort(n.begin(), n.end());
}

std::optional<Index> MeshCombinatorics::find_edge(Index a, Index b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

bool MeshCombinatorics::is_consistently_oriented() const {
  std::vector<int> direction_sum(edges_.size(), 0);
  for (Index f = 0; f < faces_.size(); ++f) {
    const auto& cycle = faces_[f];
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Index e = face_sides_[f][k];
      direction_sum[e] += (cycle[k] == edges_[e].i) ? 1 : -1;
    }
  }
  for (Index e = 0; e < edges_.size(); ++e)
    if (edge_faces_[e].size() == 2 && direction_sum[e] != 0) return false;
  return true;
}

std::shared_ptr<const MeshCombinatorics> build_combinatorics(
    std::vector<std::vector<Index>> face_cycles) {
  std::size_t n = 0;
  for (const auto& c : face_cycles)
    for (Index v : c) n = std::max<std::size_t>(n, v + 1);
  return build_combinatorics(n, std::move(face_cycles));
}

std::shared_ptr<const MeshCombinatorics> build_combinatorics(
    std::size_t vertex_count, std::vector<std::vector<Index>> face_cycles) {
  return std::make_shared<const MeshCombinatorics>(vertex_count, std::move(face_cycles));
}

Mesh::Mesh(std::shared_ptr<const MeshCombinatorics> combinatorics, std::vector<Vec3> positions)
    : combinatorics_(std::move(combinatorics)), positions_(std::move(positions)) {
  if (!combinatorics_) fail(ErrorKind::InvalidArgument, "mesh without combinatorics");
  if (positions_.size() != combinatorics_->vertex_count())
    fail(ErrorKind::LengthMismatch, std::to_string(positions_.size()) + " positions for " +
                                        std::to_string(combinatorics_->vertex_count()) + " vertices");
  for (std::size_t v = 0; v < positions_.size(); ++v)
    if (!positions_[v].allFinite())
      fail(ErrorKind::NonFinite, "vertex " + std::to_string(v) + " has a non-finite coordinate");
}

std::vector<Vec3> Mesh::face_points(Index f) const {
  std::vector<Vec3> pts;
  for (Index v : combinatorics_->face(f)) pts.push_back(positions_[v]);
  return pts;
}

double Mesh::bounding_box_diagonal() const {
  if (positions_.empty()) return 0.0;
  Vec3 lo = positions_.front(), hi = positions_.front();
  for (const auto& p : positions_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

bool same_combinatorics(const Mesh& a, const Mesh& b) {
  return a.shared_combinatorics() == b.shared_combinatorics() ||
         a.combinatorics() == b.combinatorics();
}

double default_tolerance(const Mesh& m) {
  const double d = m.bounding_box_diagonal();
  return 1e-9 * (d > 0.0 ? d : 1.0);
}

ParallelCheck check_parallel(const Mesh& m, const Mesh& s, double tol) {
  if (!same_combinatorics(m, s))
    fail(ErrorKind::CombinatoricsMismatch, "meshes do not share combinatorics");
  ParallelCheck report;
  const auto& edges = m.combinatorics().edges();
  report.edge_deviation.reserve(edges.size());
  for (Index e = 0; e < edges.size(); ++e) {
    const Vec3 dm = m.position(edges[e].j) - m.position(edges[e].i);
    const Vec3 ds = s.position(edges[e].j) - s.position(edges[e].i);
    const double len = dm.norm();
    const double dev = len > 0.0 ? dm.cross(ds).norm() / (len * std::max(1.0, ds.norm())) : 0.0;
    report.edge_deviation.push_back(dev);
    if (!report.worst_edge || dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_edge = e;
    }
    if (dev > tol && !report.first_failing_edge) report.first_failing_edge = e;
  }
  report.pass = !report.first_failing_edge.has_value();
  return report;
}

FacePlane fit_face_plane(std::span<const Vec3> points) {
  FacePlane plane;
  const std::size_t n = points.size();
  if (n == 0) {
    plane.zero_area = true;
    return plane;
  }
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p;
  c /= static_cast<double>(n);
  plane.base = c;

  Vec3 newell = Vec3::Zero();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 a = points[k] - c;
    const Vec3 b = points[(k + 1) % n] - c;
    newell += a.cross(b);
    cov += a * a.transpose();
    scale = std::max(scale, a.norm());
  }
  if (scale == 0.0) {
    plane.zero_area = true;
    return plane;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Vec3 normal = eig.eigenvectors().col(0).normalized();
  plane.zero_area = newell.norm() <= 1e-12 * scale * scale;
  if (!plane.zero_area && normal.dot(newell) < 0.0) normal = -normal;
  plane.normal = normal;

  for (const auto& p : points) plane.residual = std::max(plane.residual, std::abs((p - c).dot(normal)));

  Vec3 e1 = Vec3::Zero();
  for (std::size_t k = 0; k < n && e1.norm() <= 1e-12 * scale; ++k) {
    const Vec3 d = points[(k + 1) % n] - points[k];
    e1 = d - d.dot(normal) * normal;
  }
  if (e1.norm() <= 1e-12 * scale) e1 = normal.unitOrthogonal();
  plane.e1 = e1.normalized();
  plane.e2 = normal.cross(plane.e1);
  return plane;
}

PlanarityReport face_planarity(const Mesh& m, double tol) {
  PlanarityReport report;
  for (Index f = 0; f < m.face_count(); ++f) {
    const auto pts = m.face_points(f);
    FacePlane plane = fit_face_plane(pts);
    plane.face = f;
    report.max_residual = std::max(report.max_residual, plane.residual);
    if (plane.residual > tol && !report.first_failing_face) report.first_failing_face = f;
    report.faces.push_back(plane);
  }
  report.pass = !report.first_failing_face.has_value();
  return report;
}

ParallelPair::ParallelPair(Mesh m, Mesh s, std::optional<double> tol)
    : m_(std::move(m)), s_(std::move(s)), tol_(tol.value_or(default_tolerance(m_))) {
  if (!same_combinatorics(m_, s_))
    fail(ErrorKind::CombinatoricsMismatch, "m and s do not share combinatorics");
  const auto& edges = m_.combinatorics().edges();
  for (Index e = 0; e < edges.size(); ++e)
    if ((m_.position(edges[e].j) - m_.position(edges[e].i)).norm() <= tol_)
      fail(ErrorKind::ZeroMeshEdge, "edge " + std::to_string(e) + " " + edge_name(edges[e]) +
                                        " of m has zero length");
  const ParallelCheck par = check_parallel(m_, s_, tol_);
  if (!par.pass) {
    const Index e = *par.first_failing_edge;
    fail(ErrorKind::NotParallel, "edge " + std::to_string(e) + " " + edge_name(edges[e]) +
                                     " deviates by " + std::to_string(par.edge_deviation[e]));
  }
  PlanarityReport planes = face_planarity(m_, tol_);
  if (!planes.pass) {
    const Index f = *planes.first_failing_face;
    fail(ErrorKind::NonPlanarFace, "face " + std::to_string(f) + " has planarity residual " +
                                       std::to_string(planes.faces[f].residual));
  }
  charts_ = std::move(planes.faces);
}

Mesh offset(const ParallelPair& pair, double t) {
  std::vector<Vec3> pts(pair.m().positions());
  for (std::size_t v = 0; v < pts.size(); ++v) pts[v] += t * pair.s().position(v);
  return Mesh(pair.m().shared_combinatorics(), std::move(pts));
}

ParallelPair offset_pair(const ParallelPair& pair, double t) {
  return ParallelPair(offset(pair, t), pair.s(), pair.tol());
}

Mesh gauss_image_from_offset(const Mesh& m, const Mesh& m_offset, double d) {
  if (!same_combinatorics(m, m_offset))
    fail(ErrorKind::CombinatoricsMismatch, "offset mesh has different combinatorics");
  if (d == 0.0 || !std::isfinite(d)) fail(ErrorKind::InvalidArgument, "offset distance must be nonzero");
  std::vector<Vec3> pts(m.vertex_count());
  for (std::size_t v = 0; v < pts.size(); ++v) pts[v] = (m_offset.position(v) - m.position(v)) / d;
  return Mesh(m.shared_combinatorics(), std::move(pts));
}

OffsetClassification classify_offset_type(const ParallelPair& pair, double tol) {
  const Mesh& m = pair.m();
  const Mesh& s = pair.s();
  OffsetClassification c;
  for (const auto& p : s.positions()) c.vertex_residual = std::max(c.vertex_residual, std::abs(p.norm() - 1.0));
  for (const auto& e : m.combinatorics().edges()) {
    const Vec3 u = (m.position(e.j) - m.position(e.i)).normalized();
    for (Index v : {e.i, e.j})
      c.edge_residual = std::max(c.edge_residual, std::abs(s.position(v).cross(u).norm() - 1.0));
  }
  for (Index f = 0; f < m.face_count(); ++f) {
    const Vec3& n = pair.chart(f).normal;
    for (Index v : m.combinatorics().face(f))
      c.face_residual = std::max(c.face_residual, std::abs(std::abs(s.position(v).dot(n)) - 1.0));
  }
  c.vertex = c.vertex_residual <= tol;
  c.edge = c.edge_residual <= tol;
  c.face = c.face_residual <= tol;
  return c;
}

CircularityReport is_circular(const Mesh& m, double tol) {
  CircularityReport report;
  for (Index f = 0; f < m.face_count(); ++f) {
    const auto pts = m.face_points(f);
    const FacePlane plane = fit_face_plane(pts);
    if (plane.zero_area) fail(ErrorKind::ZeroAreaFace, "face " + std::to_string(f) + " has zero area");
    Eigen::MatrixXd a(pts.size(), 3);
    Eigen::VectorXd b(pts.size());
    std::vector<Vec2> local;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2 q = plane.project(pts[k]);
      local.push_back(q);
      a.row(static_cast<Eigen::Index>(k)) << q.x(), q.y(), 1.0;
      b(static_cast<Eigen::Index>(k)) = -q.squaredNorm();
    }
    const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
    const Vec2 center(-0.5 * sol(0), -0.5 * sol(1));
    double radius = 0.0;
    for (const auto& q : local) radius += (q - center).norm();
    radius /= static_cast<double>(local.size());
    double residual = plane.residual;
    for (const auto& q : local) residual = std::max(residual, std::abs((q - center).norm() - radius));
    FaceCircle circle{f, plane.lift(center), radius, residual, residual <= tol};
    report.max_residual = std::max(report.max_residual, residual);
    report.pass = report.pass && circle.pass;
    report.faces.push_back(circle);
  }
  return report;
}

Line3::Line3(const Vec3& p, const Vec3& d) : point(p), direction(d) {
  const double len = d.norm();
  if (!(len > 0.0) || !std::isfinite(len) || !p.allFinite())
    fail(ErrorKind::InvalidArgument, "line needs a finite point and a nonzero direction");
  direction /= len;
}

LineCongruence LineCongruence::from_pair(const Mesh& m, const Mesh& s) {
  if (m.vertex_count() != s.vertex_count()) fail(ErrorKind::LengthMismatch, "vertex counts differ");
  LineCongruence lc;
  for (std::size_t v = 0; v < m.vertex_count(); ++v) lc.lines.emplace_back(m.position(v), s.position(v));
  return lc;
}

double LineCongruence::max_coplanarity_defect(const MeshCombinatorics& comb) const {
  double worst = 0.0;
  for (const auto& e : comb.edges()) {
    const Line3& a = lines.at(e.i);
    const Line3& b = lines.at(e.j);
    worst = std::max(worst, std::abs((b.point - a.point).dot(a.direction.cross(b.direction))));
  }
  return worst;
}

CongruencePropagation propagate_from_congruence(const Mesh& m, const LineCongruence& lines,
                                                const CongruenceSeed& seed, double tol) {
  const auto& comb = m.combinatorics();
  const std::size_t n = m.vertex_count();
  if (lines.lines.size() != n) fail(ErrorKind::LengthMismatch, "one line per vertex required");
  if (n == 0) return {m, 0.0};
  if (seed.vertex >= n) fail(ErrorKind::InvalidIndex, "seed vertex out of range");
  const Line3& seed_line = lines.lines[seed.vertex];
  if ((seed.point - seed_line.point).cross(seed_line.direction).norm() > tol)
    fail(ErrorKind::InvalidArgument, "seed point is not on the seed vertex line");

  std::vector<Vec3> out(n, Vec3::Zero());
  std::vector<bool> placed(n, false);
  out[seed.vertex] = seed.point;
  placed[seed.vertex] = true;
  std::deque<Index> queue{seed.vertex};
  while (!queue.empty()) {
    const Index i = queue.front();
    queue.pop_front();
    for (Index j : comb.vertex_neighbors(i)) {
      if (placed[j]) continue;
      const Vec3 w = (m.position(i) - m.position(j)).normalized();
      const Line3& lj = lines.lines[j];
      const double b = w.dot(lj.direction);
      const double sin2 = 1.0 - b * b;
      if (sin2 < 1e-16)
        fail(ErrorKind::NonTransversal, "line of vertex " + std::to_string(j) +
                                            " is parallel to edge direction from vertex " + std::to_string(i));
      const Vec3 r = out[i] - lj.point;
      const double mu = (b * lj.direction.dot(r) - w.dot(r)) / sin2;
      const double lambda = lj.direction.dot(r) + b * mu;
      out[j] = lj.point + lambda * lj.direction;
      placed[j] = true;
      queue.push_back(j);
    }
  }
  if (std::find(placed.begin(), placed.end(), false) != placed.end())
    fail(ErrorKind::NotConnected, "vertex graph is not connected to the seed");

  double residual = 0.0;
  for (const auto& e : comb.edges()) {
    const Vec3 u = (m.position(e.i) - m.position(e.j)).normalized();
    residual = std::max(residual, (out[e.i] - out[e.j]).cross(u).norm());
  }
  if (residual > tol)
    fail(ErrorKind::ClosureViolation, "congruence does not close, residual " + std::to_string(residual));
  return {Mesh(m.shared_combinatorics(), std::move(out)), residual};
}

ConicalGaussImage canonical_gauss_conical(const Mesh& m, double tol) {
  const auto& comb = m.combinatorics();
  if (!comb.is_consistently_oriented())
    fail(ErrorKind::OrientationInconsistent, "face cycles are not consistently oriented");
  std::vector<Vec3> normals;
  for (Index f = 0; f < m.face_count(); ++f) {
    const auto pts = m.face_points(f);
    const FacePlane plane = fit_face_plane(pts);
    if (plane.zero_area) fail(ErrorKind::ZeroAreaFace, "face " + std::to_string(f) + " has zero area");
    normals.push_back(plane.normal);
  }
  std::vector<Vec3> pts(m.vertex_count(), Vec3::Zero());
  double residual = 0.0;
  for (Index v = 0; v < m.vertex_count(); ++v) {
    const auto faces = comb.vertex_faces(v);
    Eigen::MatrixXd a(faces.size(), 3);
    for (std::size_t k = 0; k < faces.size(); ++k) a.row(static_cast<Eigen::Index>(k)) = normals[faces[k]].transpose();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(faces.size()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (faces.size() < 3 || sv(2) <= 1e-9 * sv(0))
      fail(ErrorKind::NotConical, "vertex " + std::to_string(v) + " has fewer than three independent face planes");
    pts[v] = svd.solve(ones);
    residual = std::max(residual, (a * pts[v] - ones).cwiseAbs().maxCoeff());
    if (residual > tol)
      fail(ErrorKind::NotConical, "face planes at vertex " + std::to_string(v) +
                                      " are not concurrent, residual " + std::to_string(residual));
  }
  return {Mesh(m.shared_combinatorics(), std::move(pts)), residual};
}

}  // namespace mixcurv
