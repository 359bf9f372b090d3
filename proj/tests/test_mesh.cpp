#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "mixcurv/curvature.hpp"
#include "mixcurv/error.hpp"
#include "mixcurv/mesh.hpp"
#include "support/random_geometry.hpp"

using namespace mixcurv;
using namespace testsupport;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no mixcurv::Error thrown";
  return ErrorKind::IoError;
}

Mesh transformed(const Mesh& m, const Eigen::Matrix3d& a, const Vec3& v) {
  std::vector<Vec3> p;
  for (const auto& x : m.positions()) p.push_back(a * x + v);
  return Mesh(m.shared_combinatorics(), p);
}

Mesh scaled(const Mesh& m, double c) { return transformed(m, c * Eigen::Matrix3d::Identity(), Vec3::Zero()); }

// Independent plane fit: smallest singular direction of the centered points.
double svd_plane_residual(const std::vector<Vec3>& pts) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  Eigen::MatrixXd a(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = (pts[i] - c).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Vec3 n = svd.matrixV().col(2);
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, std::abs((p - c).dot(n)));
  return r;
}

}  // namespace

TEST(Combinatorics, SingleQuadHasFourEdges) {
  const auto c = build_combinatorics({{0, 1, 2, 3}});
  EXPECT_EQ(c->edge_count(), 4u);
  EXPECT_EQ(c->face_count(), 1u);
  EXPECT_EQ(c->vertex_count(), 4u);
}

TEST(Combinatorics, TwoQuadsSharingAnEdgeHaveSevenEdges) {
  const auto c = build_combinatorics({{0, 1, 2, 3}, {1, 4, 5, 2}});
  EXPECT_EQ(c->edge_count(), 7u);
  const auto e = c->find_edge(2, 1);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(c->edge_faces(*e).size(), 2u);
  EXPECT_FALSE(c->is_boundary_edge(*e));
  EXPECT_TRUE(c->is_consistently_oriented());
}

TEST(Combinatorics, EdgeOnThreeFacesIsRejected) {
  EXPECT_EQ(kind_of([] { build_combinatorics({{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}); }), ErrorKind::NonManifoldEdge);
}

TEST(Combinatorics, InvalidFacesAreRejected) {
  EXPECT_EQ(kind_of([] { build_combinatorics({{0, 1}}); }), ErrorKind::DegenerateFace);
  EXPECT_EQ(kind_of([] { build_combinatorics({{0, 1, 1, 2}}); }), ErrorKind::DegenerateFace);
  EXPECT_EQ(kind_of([] { build_combinatorics(3, {{0, 1, 5}}); }), ErrorKind::InvalidIndex);
}

TEST(Combinatorics, FlippedFaceIsNotConsistentlyOriented) {
  EXPECT_FALSE(build_combinatorics({{0, 1, 2, 3}, {2, 5, 4, 1}})->is_consistently_oriented());
}

TEST(Combinatorics, BoxEulerCharacteristic) {
  const Mesh b = box(1, 2, 3);
  const auto& c = b.combinatorics();
  EXPECT_EQ(static_cast<long>(c.vertex_count()) - static_cast<long>(c.edge_count()) + static_cast<long>(c.face_count()), 2);
  EXPECT_TRUE(c.is_consistently_oriented());
  for (Index v = 0; v < 8; ++v) EXPECT_EQ(c.vertex_neighbors(v).size(), 3u);
}

TEST(MeshTest, RejectsMismatchedOrNonFinitePositions) {
  const auto c = build_combinatorics({{0, 1, 2}});
  EXPECT_EQ(kind_of([&] { Mesh(c, {Vec3::Zero(), Vec3::Zero()}); }), ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([&] { Mesh(c, {Vec3::Zero(), Vec3::UnitX(), Vec3(NAN, 0, 0)}); }), ErrorKind::NonFinite);
}

TEST(CheckParallel, ScaledTranslatePasses) {
  const Mesh m = box(1, 2, 3);
  const Mesh s = transformed(m, 2.0 * Eigen::Matrix3d::Identity(), Vec3(1, -2, 0.5));
  const ParallelCheck pc = check_parallel(m, s, 1e-12);
  EXPECT_TRUE(pc.pass);
  EXPECT_LE(pc.max_deviation, 1e-15);
}

TEST(CheckParallel, RotatedCopyFails) {
  const Mesh m = box(1, 2, 3);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(10.0 * std::numbers::pi / 180.0, Vec3::UnitZ()).toRotationMatrix();
  const ParallelCheck pc = check_parallel(m, transformed(m, rot, Vec3::Zero()), 1e-9);
  EXPECT_FALSE(pc.pass);
  ASSERT_TRUE(pc.first_failing_edge.has_value());
  // Edges along z stay parallel; the horizontal ones turn by 10 degrees.
  const Edge e = m.combinatorics().edge(*pc.first_failing_edge);
  EXPECT_GT((m.position(e.i) - m.position(e.j)).head<2>().norm(), 0.0);
  EXPECT_NEAR(pc.max_deviation, std::sin(10.0 * std::numbers::pi / 180.0), 1e-12);
}

TEST(CheckParallel, ConstantGaussImagePasses) {
  const Mesh m = box(1, 2, 3);
  const Mesh s(m.shared_combinatorics(), std::vector<Vec3>(8, Vec3(0.3, 0.1, -2)));
  EXPECT_TRUE(check_parallel(m, s, 0.0).pass);
}

TEST(ParallelPairTest, ValidationNamesTheOffendingElement) {
  const Mesh m = box(1, 1, 1);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.2, Vec3::UnitX()).toRotationMatrix();
  try {
    ParallelPair(m, transformed(m, rot, Vec3::Zero()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotParallel);
    EXPECT_NE(std::string(e.what()).find("edge"), std::string::npos);
  }
  std::vector<Vec3> p = m.positions();
  p[1] = p[0];
  EXPECT_EQ(kind_of([&] { ParallelPair(Mesh(m.shared_combinatorics(), p), m); }), ErrorKind::ZeroMeshEdge);
  EXPECT_EQ(kind_of([&] { ParallelPair(m, make_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}})); }),
            ErrorKind::CombinatoricsMismatch);
  const Mesh bent = make_mesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0.2}, {0, 1, 0}}, {{0, 1, 2, 3}});
  try {
    ParallelPair(bent, bent);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPlanarFace);
    EXPECT_NE(std::string(e.what()).find("face 0"), std::string::npos);
  }
}

TEST(Offset, ZeroOffsetIsIdentity) {
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const ParallelPair pair(m, canonical_gauss_conical(m, 1e-9).gauss);
  EXPECT_EQ(offset(pair, 0.0).positions(), m.positions());
}

TEST(Offset, ConstantGaussImageTranslates) {
  const Mesh m = box(2, 3, 4);
  const Vec3 v(0.5, -1, 2);
  const ParallelPair pair(m, Mesh(m.shared_combinatorics(), std::vector<Vec3>(8, v)));
  const Mesh o = offset(pair, 1.0);
  for (Index i = 0; i < 8; ++i) EXPECT_LE((o.position(i) - m.position(i) - v).norm(), 1e-15);
}

TEST(Offset, OffsetsCompose) {
  Rng rng(7);
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const ParallelPair pair(m, canonical_gauss_conical(m, 1e-9).gauss);
  for (int k = 0; k < 20; ++k) {
    const double a = rng.uniform(-0.9, 0.9), b = rng.uniform(-0.9, 0.9);
    const Mesh twice = offset(offset_pair(pair, a), b);
    const Mesh once = offset(pair, a + b);
    for (Index i = 0; i < 8; ++i) EXPECT_LE((twice.position(i) - once.position(i)).norm(), 1e-14);
    EXPECT_TRUE(check_parallel(offset(pair, a), m, 1e-12).pass);
  }
}

TEST(Offset, GaussImageFromOffsetInvertsOffset) {
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const ParallelPair pair(m, canonical_gauss_conical(m, 1e-9).gauss);
  const Mesh back = gauss_image_from_offset(m, offset(pair, 0.25), 0.25);
  for (Index i = 0; i < 8; ++i) EXPECT_LE((back.position(i) - pair.s().position(i)).norm(), 1e-14);
}

TEST(Planarity, PlanarQuadHasZeroResidual) {
  const Mesh q = make_mesh({{0, 0, 1}, {2, 0, 1}, {2, 1, 1}, {0, 1, 1}}, {{0, 1, 2, 3}});
  const PlanarityReport r = face_planarity(q, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_residual, 1e-15);
  EXPECT_NEAR(std::abs(r.faces[0].normal.z()), 1.0, 1e-15);
  EXPECT_GT(r.faces[0].normal.z(), 0.0);
}

TEST(Planarity, LiftedVertexMatchesPlaneFitOracle) {
  for (double h : {1e-3, 0.1, 0.5}) {
    const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {1, 1, h}, {0, 1, 0}};
    const Mesh q = make_mesh(pts, {{0, 1, 2, 3}});
    const PlanarityReport r = face_planarity(q, 1e-9);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.first_failing_face, Index{0});
    EXPECT_NEAR(r.max_residual, svd_plane_residual(pts), 1e-14);
    EXPECT_GT(r.max_residual, 0.2 * h);
  }
}

TEST(Planarity, TrianglesAreAlwaysPlanar) {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const Mesh t = make_mesh({rng.unit3() * 3, rng.unit3(), rng.unit3() * 2}, {{0, 1, 2}});
    EXPECT_LE(face_planarity(t, 0.0).max_residual, 1e-14);
  }
}

TEST(ClassifyOffset, CubeScalings) {
  const Mesh m = centered_cube();
  const ParallelPair vertex(m, scaled(m, 1.0 / std::sqrt(3.0)));
  const ParallelPair face(m, m);
  const ParallelPair edge(m, scaled(m, 1.0 / std::sqrt(2.0)));
  const auto v = classify_offset_type(vertex, 1e-12);
  const auto f = classify_offset_type(face, 1e-12);
  const auto e = classify_offset_type(edge, 1e-12);
  EXPECT_TRUE(v.vertex);
  EXPECT_FALSE(v.edge);
  EXPECT_FALSE(v.face);
  EXPECT_TRUE(f.face);
  EXPECT_FALSE(f.vertex);
  EXPECT_FALSE(f.edge);
  EXPECT_TRUE(e.edge);
  EXPECT_FALSE(e.vertex);
  EXPECT_FALSE(e.face);
  EXPECT_TRUE(classify_offset_type(ParallelPair(m, scaled(m, 0.3)), 1e-12).none());
}

TEST(ClassifyOffset, ConicalOffsetsAreFaceOffsets) {
  Rng rng(12);
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const Mesh s = canonical_gauss_conical(m, 1e-9).gauss;
  for (int k = 0; k < 10; ++k) {
    const double d = rng.uniform(0.1, 5.0);
    const ParallelPair pair(m, s);
    const ParallelPair shifted(m, offset(pair, d));
    const auto c = classify_offset_type(ParallelPair(m, gauss_image_from_offset(m, shifted.s(), d)), 1e-12);
    EXPECT_TRUE(c.face) << d;
  }
}

TEST(Circularity, SquareAndRectanglePassTrapezoidFails) {
  const Mesh sq = make_mesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2, 3}});
  const Mesh rect = make_mesh({{0, 0, 0}, {4, 0, 0}, {4, 2, 0}, {0, 2, 0}}, {{0, 1, 2, 3}});
  EXPECT_TRUE(is_circular(sq, 1e-12).pass);
  const CircularityReport rr = is_circular(rect, 1e-12);
  EXPECT_TRUE(rr.pass);
  EXPECT_NEAR(rr.faces[0].radius, std::sqrt(5.0), 1e-14);
  EXPECT_LE((rr.faces[0].center - Vec3(2, 1, 0)).norm(), 1e-14);

  // Circumcircle of the first three vertices misses the fourth.
  const std::vector<Vec2> t{{0, 0}, {4, 0}, {3, 1}, {0.5, 1}};
  const Vec2 a = t[0], b = t[1], c = t[2];
  const double d = 2 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) + c.x() * (a.y() - b.y()));
  const Vec2 center((a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) + c.squaredNorm() * (a.y() - b.y())) / d,
                    (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) + c.squaredNorm() * (b.x() - a.x())) / d);
  const double miss = std::abs((t[3] - center).norm() - (a - center).norm());
  ASSERT_GT(miss, 1e-3);
  const Mesh trap = make_mesh({{0, 0, 0}, {4, 0, 0}, {3, 1, 0}, {0.5, 1, 0}}, {{0, 1, 2, 3}});
  const CircularityReport tr = is_circular(trap, 1e-9);
  EXPECT_FALSE(tr.pass);
  EXPECT_GT(tr.max_residual, 1e-4);
}

TEST(Congruence, VerticalLinesTranslate) {
  Rng rng(1);
  const Mesh m = perturbed_planar_grid(4, 3, 0.0, rng);
  LineCongruence lc;
  for (const auto& p : m.positions()) lc.lines.emplace_back(p, Vec3::UnitZ());
  const auto r = propagate_from_congruence(m, lc, {0, m.position(0) + Vec3::UnitZ()}, 1e-12);
  for (Index i = 0; i < m.vertex_count(); ++i)
    EXPECT_LE((r.mesh.position(i) - m.position(i) - Vec3::UnitZ()).norm(), 1e-14);
}

TEST(Congruence, LinesThroughOriginDilate) {
  const Mesh m = box(1, 2, 3, Vec3(1, 1, 1));
  LineCongruence lc;
  for (const auto& p : m.positions()) lc.lines.emplace_back(Vec3::Zero(), p);
  const auto r = propagate_from_congruence(m, lc, {0, 2.0 * m.position(0)}, 1e-12);
  for (Index i = 0; i < 8; ++i) EXPECT_LE((r.mesh.position(i) - 2.0 * m.position(i)).norm(), 1e-13);
  EXPECT_LE(lc.max_coplanarity_defect(m.combinatorics()), 1e-13);
}

TEST(Congruence, BrokenLineGivesClosureViolation) {
  const Mesh m = box(1, 2, 3, Vec3(1, 1, 1));
  LineCongruence lc;
  for (const auto& p : m.positions()) lc.lines.emplace_back(Vec3::Zero(), p);
  lc.lines[6] = Line3(Vec3(0.1, -0.05, 0.02), m.position(6));
  EXPECT_EQ(kind_of([&] { propagate_from_congruence(m, lc, {0, 2.0 * m.position(0)}, 1e-9); }),
            ErrorKind::ClosureViolation);
}

TEST(Congruence, RoundTripFromPair) {
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const Mesh s = canonical_gauss_conical(m, 1e-9).gauss;
  const LineCongruence lc = LineCongruence::from_pair(m, s);
  const auto r = propagate_from_congruence(m, lc, {0, m.position(0) + s.position(0)}, 1e-12);
  for (Index i = 0; i < 8; ++i) EXPECT_LE((r.mesh.position(i) - m.position(i) - s.position(i)).norm(), 1e-13);
}

TEST(Congruence, SeedMustLieOnItsLine) {
  Rng rng(2);
  const Mesh m = perturbed_planar_grid(3, 3, 0.1, rng);
  LineCongruence lc;
  for (const auto& p : m.positions()) lc.lines.emplace_back(p, Vec3::UnitZ());
  EXPECT_EQ(kind_of([&] { propagate_from_congruence(m, lc, {0, Vec3(5, 5, 5)}, 1e-12); }), ErrorKind::InvalidArgument);
}

TEST(Conical, BoxGivesUnitCube) {
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const ConicalGaussImage g = canonical_gauss_conical(m, 1e-9);
  for (Index i = 0; i < 8; ++i) {
    const Vec3 expect(m.position(i).x() > 0 ? 1 : -1, m.position(i).y() > 0 ? 1 : -1, m.position(i).z() > 0 ? 1 : -1);
    EXPECT_LE((g.gauss.position(i) - expect).norm(), 1e-14);
  }
  EXPECT_LE(g.concurrency_residual, 1e-14);
}

TEST(Conical, BoxTopFaceCurvature) {
  const Mesh m = box(4, 6, 8, Vec3(-2, -3, -4));
  const ParallelPair pair(m, canonical_gauss_conical(m, 1e-9).gauss);
  const FaceCurvatureReport fc = face_curvatures(pair, 1);  // z = +4 face
  EXPECT_NEAR(fc.area_m, 24.0, 1e-13);
  EXPECT_NEAR(fc.area_s, 4.0, 1e-13);
  EXPECT_NEAR(fc.mixed, 10.0, 1e-13);
  EXPECT_NEAR(fc.H, -5.0 / 12.0, 1e-15);
  EXPECT_NEAR(fc.K, 1.0 / 6.0, 1e-15);
}

TEST(Conical, IdempotentOnItsOwnOutput) {
  const Mesh m = box(2, 3, 4, Vec3(-1, -1.5, -2));
  const Mesh s = canonical_gauss_conical(m, 1e-9).gauss;
  const Mesh ss = canonical_gauss_conical(s, 1e-9).gauss;
  for (Index i = 0; i < 8; ++i) EXPECT_LE((ss.position(i) - s.position(i)).norm(), 1e-14);
}

TEST(Conical, PerturbedVertexIsNotConical) {
  // An octahedron vertex has valence 4; moving it off its cone breaks the
  // common tangent cone of its four faces.
  std::vector<Vec3> p{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0.05, 0.03, 1.2}, {0, 0, -1}};
  const Mesh oct = make_mesh(p, octahedron().combinatorics().faces());
  EXPECT_NO_THROW(canonical_gauss_conical(octahedron(), 1e-9));
  EXPECT_EQ(kind_of([&] { canonical_gauss_conical(oct, 1e-9); }), ErrorKind::NotConical);
}
