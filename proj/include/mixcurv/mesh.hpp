#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace mixcurv {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Index = std::size_t;

// Unordered vertex pair, stored with i < j.
struct Edge {
  Index i = 0;
  Index j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class MeshCombinatorics {
 public:
  // Throws DegenerateFace, InvalidIndex or NonManifoldEdge.
  MeshCombinatorics(std::size_t vertex_count, std::vector<std::vector<Index>> faces);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t face_count() const { return faces_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<std::vector<Index>>& faces() const { return faces_; }
  std::span<const Index> face(Index f) const { return faces_.at(f); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(Index e) const { return edges_.at(e); }

  std::optional<Index> find_edge(Index a, Index b) const;
  // Edge id of the side from corner k to corner k+1 of face f.
  Index face_side_edge(Index f, std::size_t k) const { return face_sides_.at(f).at(k); }
  // One or two incident faces.
  std::span<const Index> edge_faces(Index e) const { return edge_faces_.at(e); }
  std::span<const Index> vertex_neighbors(Index v) const { return neighbors_.at(v); }
  std::span<const Index> vertex_faces(Index v) const { return vertex_faces_.at(v); }
  bool is_boundary_edge(Index e) const { return edge_faces_.at(e).size() < 2; }

  // Every interior edge is traversed in opposite directions by its two faces.
  bool is_consistently_oriented() const;

  friend bool operator==(const MeshCombinatorics& a, const MeshCombinatorics& b) {
    return a.vertex_count_ == b.vertex_count_ && a.faces_ == b.faces_;
  }

 private:
  std::size_t vertex_count_;
  std::vector<std::vector<Index>> faces_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> edge_faces_;
  std::vector<std::vector<Index>> face_sides_;
  std::vector<std::vector<Index>> neighbors_;
  std::vector<std::vector<Index>> vertex_faces_;
  std::unordered_map<std::uint64_t, Index> edge_lookup_;
};

std::shared_ptr<const MeshCombinatorics> build_combinatorics(
    std::vector<std::vector<Index>> face_cycles);
std::shared_ptr<const MeshCombinatorics> build_combinatorics(
    std::size_t vertex_count, std::vector<std::vector<Index>> face_cycles);

class Mesh {
 public:
  // Throws LengthMismatch or NonFinite.
  Mesh(std::shared_ptr<const MeshCombinatorics> combinatorics, std::vector<Vec3> positions);

  const MeshCombinatorics& combinatorics() const { return *combinatorics_; }
  const std::shared_ptr<const MeshCombinatorics>& shared_combinatorics() const {
    return combinatorics_;
  }
  const std::vector<Vec3>& positions() const { return positions_; }
  const Vec3& position(Index v) const { return positions_.at(v); }
  std::size_t vertex_count() const { return positions_.size(); }
  std::size_t face_count() const { return combinatorics_->face_count(); }

  std::vector<Vec3> face_points(Index f) const;
  double bounding_box_diagonal() const;

 private:
  std::shared_ptr<const MeshCombinatorics> combinatorics_;
  std::vector<Vec3> positions_;
};

bool same_combinatorics(const Mesh& a, const Mesh& b);

// 1e-9 times the bounding-box diagonal (1e-9 for a degenerate box).
double default_tolerance(const Mesh& m);

struct ParallelCheck {
  bool pass = true;
  double max_deviation = 0.0;
  std::optional<Index> worst_edge;
  std::optional<Index> first_failing_edge;
  std::vector<double> edge_deviation;
};

// Per edge: |dm x ds| / (|dm| max(1, |ds|)). Throws CombinatoricsMismatch.
ParallelCheck check_parallel(const Mesh& m, const Mesh& s, double tol);

struct FacePlane {
  Index face = 0;
  Vec3 normal = Vec3::UnitZ();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();
  Vec3 base = Vec3::Zero();
  double residual = 0.0;
  bool zero_area = false;

  Vec2 project(const Vec3& p) const { return {(p - base).dot(e1), (p - base).dot(e2)}; }
  Vec3 lift(const Vec2& q) const { return base + q.x() * e1 + q.y() * e2; }
};

// Least-squares plane through the points, normal oriented along the Newell
// vector of the cycle.
FacePlane fit_face_plane(std::span<const Vec3> points);

struct PlanarityReport {
  std::vector<FacePlane> faces;
  double max_residual = 0.0;
  bool pass = true;
  std::optional<Index> first_failing_face;
};

PlanarityReport face_planarity(const Mesh& m, double tol);

// A Gauss image s together with the base mesh m it was validated against.
class ParallelPair {
 public:
  // Throws CombinatoricsMismatch, ZeroMeshEdge, NotParallel or NonPlanarFace;
  // the message names the first offending edge or face.
  ParallelPair(Mesh m, Mesh s, std::optional<double> tol = std::nullopt);

  const Mesh& m() const { return m_; }
  const Mesh& s() const { return s_; }
  double tol() const { return tol_; }
  const FacePlane& chart(Index f) const { return charts_.at(f); }
  const std::vector<FacePlane>& charts() const { return charts_; }

 private:
  Mesh m_;
  Mesh s_;
  double tol_;
  std::vector<FacePlane> charts_;
};

Mesh offset(const ParallelPair& pair, double t);
// (m + t s, s), validated with the pair's tolerance.
ParallelPair offset_pair(const ParallelPair& pair, double t);
// (m' - m) / d.
Mesh gauss_image_from_offset(const Mesh& m, const Mesh& m_offset, double d);

struct OffsetClassification {
  bool vertex = false;
  bool edge = false;
  bool face = false;
  double vertex_residual = 0.0;
  double edge_residual = 0.0;
  double face_residual = 0.0;

  bool none() const { return !vertex && !edge && !face; }
};

OffsetClassification classify_offset_type(const ParallelPair& pair, double tol);

struct FaceCircle {
  Index face = 0;
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  double residual = 0.0;
  bool pass = false;
};

struct CircularityReport {
  std::vector<FaceCircle> faces;
  double max_residual = 0.0;
  bool pass = true;
};

// Throws ZeroAreaFace.
CircularityReport is_circular(const Mesh& m, double tol);

struct Line3 {
  Line3(const Vec3& point, const Vec3& direction);  // throws on a zero direction
  Vec3 point;
  Vec3 direction;  // unit
};

struct LineCongruence {
  std::vector<Line3> lines;

  // L_i through m_i and m_i + s_i.
  static LineCongruence from_pair(const Mesh& m, const Mesh& s);
  // Largest |<p_j - p_i, u_i x u_j>| over edges; zero when adjacent lines are coplanar.
  double max_coplanarity_defect(const MeshCombinatorics& comb) const;
};

struct CongruenceSeed {
  Index vertex = 0;
  Vec3 point = Vec3::Zero();
};

struct CongruencePropagation {
  Mesh mesh;
  double closure_residual = 0.0;
};

// Throws NonTransversal, ClosureViolation, NotConnected, InvalidArgument.
CongruencePropagation propagate_from_congruence(const Mesh& m, const LineCongruence& lines,
                                                const CongruenceSeed& seed, double tol);

struct ConicalGaussImage {
  Mesh gauss;
  double concurrency_residual = 0.0;
};

// Throws NotConical or OrientationInconsistent.
ConicalGaussImage canonical_gauss_conical(const Mesh& m, double tol);

}  // namespace mixcurv
