#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "mixcurv/billiard.hpp"
#include "mixcurv/curvature.hpp"
#include "mixcurv/error.hpp"
#include "mixcurv/rotational.hpp"
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

std::vector<Vec3> flat(const std::vector<Vec2>& p, double z = 0.0) {
  std::vector<Vec3> out;
  for (const auto& v : p) out.emplace_back(v.x(), v.y(), z);
  return out;
}

ParallelPair face_pair(const std::vector<Vec2>& m, const std::vector<Vec2>& s) {
  auto [mm, ss] = single_face_pair(flat(m), flat(s, 0.7));
  return ParallelPair(mm, ss);
}

const std::vector<Vec2> kSquare2{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
const std::vector<Vec2> kRect24{{0, 0}, {2, 0}, {2, 4}, {0, 4}};

std::vector<double> heights(std::size_t n, double hmax) {
  std::vector<double> h;
  for (std::size_t i = 0; i < n; ++i)
    h.push_back(-hmax + 2.0 * hmax * static_cast<double>(i) / static_cast<double>(n - 1));
  return h;
}

}  // namespace

TEST(FaceCurvature, TranslateGivesUnitSphereValues) {
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto m = random_face_quad(rng);
    const Vec2 v(rng.uniform(-3, 3), rng.uniform(-3, 3));
    std::vector<Vec2> s;
    for (const auto& p : m) s.push_back(p + v);
    const FaceCurvatureReport fc = face_curvatures(face_pair(m, s), 0);
    EXPECT_NEAR(fc.H, -1.0, 1e-12);
    EXPECT_NEAR(fc.K, 1.0, 1e-12);
    EXPECT_TRUE(fc.similar);
  }
}

TEST(FaceCurvature, ScaledCopy) {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const auto m = random_face_quad(rng);
    const double c = rng.uniform(-3, 3);
    std::vector<Vec2> s;
    for (const auto& p : m) s.push_back(c * p);
    const FaceCurvatureReport fc = face_curvatures(face_pair(m, s), 0);
    EXPECT_NEAR(fc.H, -c, 1e-12);
    EXPECT_NEAR(fc.K, c * c, 1e-12);
    ASSERT_TRUE(fc.principal.has_value());
    EXPECT_NEAR(fc.principal->kappa1, -c, 1e-7);
    EXPECT_NEAR(fc.principal->kappa2, -c, 1e-7);
  }
}

TEST(FaceCurvature, SquareAndRectangle) {
  const FaceCurvatureReport fc = face_curvatures(face_pair(kSquare2, kRect24), 0);
  EXPECT_DOUBLE_EQ(fc.area_m, 4.0);
  EXPECT_DOUBLE_EQ(fc.area_s, 8.0);
  EXPECT_DOUBLE_EQ(fc.mixed, 6.0);
  EXPECT_DOUBLE_EQ(fc.H, -1.5);
  EXPECT_DOUBLE_EQ(fc.K, 2.0);
  ASSERT_TRUE(fc.principal.has_value());
  EXPECT_DOUBLE_EQ(fc.principal->kappa1, -2.0);
  EXPECT_DOUBLE_EQ(fc.principal->kappa2, -1.0);
  EXPECT_FALSE(fc.similar);
}

TEST(FaceCurvature, VanishingAreaIsReported) {
  const std::vector<Vec2> bow{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  // Crossed quad: the two lobes cancel to zero signed area.
  EXPECT_EQ(kind_of([&] { face_curvatures(face_pair(bow, bow), 0); }), ErrorKind::VanishingFaceArea);
}

TEST(FaceCurvature, InvariantUnderRigidMotionsAndChartChoice) {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const ParallelQuad q = parallel_quad(rng, random_face_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    auto [m, s] = single_face_pair(q.m3, q.s3);
    const FaceCurvatureReport a = face_curvatures(ParallelPair(m, s), 0);
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(rng.uniform(0, 6), rng.unit3()).toRotationMatrix();
    const Vec3 shift(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    std::vector<Vec3> m2, s2;
    for (const auto& p : q.m3) m2.push_back(rot * p + shift);
    for (const auto& p : q.s3) s2.push_back(rot * p);
    // Starting the cycle elsewhere changes the chart's in-plane axes.
    std::rotate(m2.begin(), m2.begin() + 1, m2.end());
    std::rotate(s2.begin(), s2.begin() + 1, s2.end());
    auto [mr, sr] = single_face_pair(m2, s2);
    const FaceCurvatureReport b = face_curvatures(ParallelPair(mr, sr), 0);
    EXPECT_NEAR(a.H, b.H, 1e-12 * std::max(1.0, std::abs(a.H)));
    EXPECT_NEAR(a.K, b.K, 1e-12 * std::max(1.0, std::abs(a.K)));
  }
}

TEST(FaceCurvature, ReversingTheFaceCycleKeepsHAndK) {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const ParallelQuad q = parallel_quad(rng, random_face_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    auto [m, s] = single_face_pair(q.m3, q.s3);
    auto mr = q.m3, sr = q.s3;
    std::reverse(mr.begin(), mr.end());
    std::reverse(sr.begin(), sr.end());
    auto [m2, s2] = single_face_pair(mr, sr);
    const FaceCurvatureReport a = face_curvatures(ParallelPair(m, s), 0);
    const FaceCurvatureReport b = face_curvatures(ParallelPair(m2, s2), 0);
    // The chart normal follows the cycle, so even the areas are unchanged.
    EXPECT_NEAR(a.area_m, b.area_m, 1e-13);
    EXPECT_NEAR(a.H, b.H, 1e-12 * std::max(1.0, std::abs(a.H)));
    EXPECT_NEAR(a.K, b.K, 1e-12 * std::max(1.0, std::abs(a.K)));
  }
}

TEST(Steiner, Examples) {
  const ParallelPair pair = face_pair(kSquare2, kRect24);
  EXPECT_DOUBLE_EQ(steiner_area(pair, 0, 0.0).area, 4.0);
  const SteinerCheck c = steiner_area(pair, 0, 1.0);
  EXPECT_DOUBLE_EQ(c.area, 24.0);
  EXPECT_DOUBLE_EQ(c.predicted, 24.0);
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto m = random_face_quad(rng);
    const double c2 = rng.uniform(-2, 2), t = rng.uniform(-3, 3);
    std::vector<Vec2> s;
    for (const auto& p : m) s.push_back(c2 * p);
    // Areas are taken in the face chart, whose normal makes A(m) positive.
    const SteinerCheck sc = steiner_area(face_pair(m, s), 0, t);
    EXPECT_NEAR(sc.area, (1 + c2 * t) * (1 + c2 * t) * std::abs(shoelace(m)), 1e-12 * std::max(1.0, t * t) * 8);
  }
}

TEST(Steiner, RandomPairsAndOffsets) {
  Rng rng(6);
  for (int k = 0; k < 200; ++k) {
    const ParallelQuad q = parallel_quad(rng, random_face_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    auto [m, s] = single_face_pair(q.m3, q.s3);
    const ParallelPair pair(m, s);
    const FaceCurvatureReport fc = face_curvatures(pair, 0);
    const double t = rng.uniform(-3, 3);
    std::vector<Vec2> mt;
    for (std::size_t i = 0; i < 4; ++i) mt.push_back(q.m2[i] + t * q.s2[i]);
    const double predicted = (1 - 2 * fc.H * t + fc.K * t * t) * shoelace(q.m2);
    EXPECT_NEAR(shoelace(mt), predicted, 1e-10 * std::abs(shoelace(q.m2)) * std::max(1.0, t * t));
  }
}

TEST(Principal, Examples) {
  const auto a = principal_curvatures(-1.5, 2.0);
  ASSERT_TRUE(a.has_value());
  EXPECT_DOUBLE_EQ(a->kappa1, -2.0);
  EXPECT_DOUBLE_EQ(a->kappa2, -1.0);
  const auto b = principal_curvatures(-0.7, 0.49);
  ASSERT_TRUE(b.has_value());
  EXPECT_DOUBLE_EQ(b->kappa1, -0.7);
  EXPECT_DOUBLE_EQ(b->kappa2, -0.7);
  EXPECT_FALSE(principal_curvatures(0.0, 1.0).has_value());
}

TEST(Principal, RealRootsExactlyForConvexPosition) {
  Rng rng(7);
  int convex = 0, checked = 0;
  for (int k = 0; k < 500; ++k) {
    const ParallelQuad q = parallel_quad(rng, random_face_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    auto [m, s] = single_face_pair(q.m3, q.s3);
    const FaceCurvatureReport fc = face_curvatures(ParallelPair(m, s), 0);
    if (std::abs(fc.H * fc.H - fc.K) < 1e-8 * std::max(fc.H * fc.H, std::abs(fc.K))) continue;
    const bool in_convex = brute_convex_position(q.m2);
    EXPECT_EQ(fc.principal.has_value(), in_convex);
    // Parallel quads share the area form, hence the convexity class.
    EXPECT_EQ(brute_convex_position(q.s2), in_convex);
    convex += in_convex ? 1 : 0;
    ++checked;
  }
  EXPECT_GT(convex, 50);
  EXPECT_LT(convex, checked - 50);
}

TEST(EdgeCurvature, SimilarityGivesConstantKappa) {
  const Mesh m = box(2, 3, 4);
  for (double c : {-2.0, 0.5, 3.0}) {
    std::vector<Vec3> s;
    for (const auto& p : m.positions()) s.push_back(c * p + Vec3(1, 2, 3));
    for (const EdgeCurvature& e : edge_curvatures(ParallelPair(m, Mesh(m.shared_combinatorics(), s))))
      EXPECT_NEAR(e.kappa, -c, 1e-14);
  }
}

TEST(EdgeCurvature, SquareRectangleValues) {
  const ParallelPair pair = face_pair(kSquare2, kRect24);
  const auto k = face_edge_curvatures(pair, 0);
  EXPECT_DOUBLE_EQ(k[0], -1.0);
  EXPECT_DOUBLE_EQ(k[1], -2.0);
  EXPECT_DOUBLE_EQ(k[2], -1.0);
  EXPECT_DOUBLE_EQ(k[3], -2.0);
  const MeanGauss mg = face_from_edge_curvatures(k[0], k[1], k[2], k[3]);
  EXPECT_DOUBLE_EQ(mg.H, -1.5);
  EXPECT_DOUBLE_EQ(mg.K, 2.0);
}

TEST(EdgeCurvature, CenterTrianglesAreSimilar) {
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const ParallelQuad q = parallel_quad(rng, random_face_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    auto [m, s] = single_face_pair(q.m3, q.s3);
    for (const EdgeCurvature& e : edge_curvatures(ParallelPair(m, s))) {
      if (!e.center || std::abs(e.kappa) < 1e-3) continue;
      // (0, s_i, s_j) and (c_e, m_i, m_j) differ by the factor 1/kappa.
      const Vec3 &mi = m.position(e.i), &mj = m.position(e.j), &si = s.position(e.i), &sj = s.position(e.j);
      const double r = 1.0 / std::abs(e.kappa);
      EXPECT_NEAR((mi - *e.center).norm(), r * si.norm(), 1e-9 * std::max(1.0, r * si.norm()));
      EXPECT_NEAR((mj - *e.center).norm(), r * sj.norm(), 1e-9 * std::max(1.0, r * sj.norm()));
      EXPECT_NEAR((mi - mj).norm(), r * (si - sj).norm(), 1e-9 * std::max(1.0, (mi - mj).norm()));
    }
  }
}

TEST(EdgeToFace, SingularDenominator) {
  EXPECT_EQ(kind_of([] { face_from_edge_curvatures(0.7, 0.7, 0.7, 0.7); }), ErrorKind::SingularDenominator);
}

TEST(EdgeToFace, AgreesWithMixedAreasOnRandomQuads) {
  Rng rng(9);
  int done = 0;
  while (done < 500) {
    const ParallelQuad q = parallel_quad(rng, random_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const auto& k = q.kappa;
    const double kmax = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2]), std::abs(k[3])});
    if (std::abs(k[0] + k[2] - k[1] - k[3]) < 0.1 * kmax) continue;
    auto [m, s] = single_face_pair(q.m3, q.s3);
    const ParallelPair pair(m, s);
    const FaceCurvatureReport fc = face_curvatures(pair, 0);
    const auto measured = face_edge_curvatures(pair, 0);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(measured[i], k[i], 1e-9 * std::max(1.0, std::abs(k[i])));
    const MeanGauss mg = face_from_edge_curvatures(k[0], k[1], k[2], k[3]);
    EXPECT_NEAR(mg.H, fc.H, 1e-10 * std::max(1.0, std::abs(fc.H)));
    EXPECT_NEAR(mg.K, fc.K, 1e-10 * std::max(1.0, std::abs(fc.K)));
    ++done;
  }
}

TEST(ParallelFamily, Examples) {
  const MeanGauss z = parallel_family_curvatures(0.3, -2.0, 0.0);
  EXPECT_DOUBLE_EQ(z.H, 0.3);
  EXPECT_DOUBLE_EQ(z.K, -2.0);
  for (double t : {-0.5, 0.25, 2.0, 7.0}) {
    const MeanGauss s = parallel_family_curvatures(-1.0, 1.0, t);
    EXPECT_NEAR(s.H, -1.0 / (1.0 + t), 1e-15);
    EXPECT_NEAR(s.K, 1.0 / ((1.0 + t) * (1.0 + t)), 1e-15);
  }
  EXPECT_EQ(kind_of([] { parallel_family_curvatures(-1.0, 1.0, -1.0); }), ErrorKind::DegenerateOffsetFace);
}

TEST(ParallelFamily, AgreesWithDirectOffsets) {
  Rng rng(10);
  for (int k = 0; k < 200; ++k) {
    const ParallelQuad q = parallel_quad(rng, random_face_quad(rng), rng.uniform(-2, 2), rng.uniform(-2, 2));
    auto [m, s] = single_face_pair(q.m3, q.s3);
    const ParallelPair pair(m, s);
    const FaceCurvatureReport fc = face_curvatures(pair, 0);
    const double t = rng.uniform(-1, 1);
    const double den = 1 - 2 * fc.H * t + fc.K * t * t;
    if (std::abs(den) < 0.05) continue;
    const MeanGauss mg = parallel_family_curvatures(fc.H, fc.K, t);
    const FaceCurvatureReport ft = face_curvatures(offset_pair(pair, t), 0);
    EXPECT_NEAR(mg.H, ft.H, 1e-9 * std::max(1.0, std::abs(ft.H)));
    EXPECT_NEAR(mg.K, ft.K, 1e-9 * std::max(1.0, std::abs(ft.K)));
  }
}

TEST(Weingarten, Examples) {
  const WeingartenCoefficients a = weingarten_coefficients(0.25, 0.0);
  EXPECT_DOUBLE_EQ(a.alpha, 4.0);
  EXPECT_DOUBLE_EQ(a.beta, 0.0);
  const WeingartenCoefficients b = weingarten_coefficients(0.5, 1.0);
  EXPECT_DOUBLE_EQ(b.alpha, 0.0);
  EXPECT_DOUBLE_EQ(b.beta, 1.0);
  EXPECT_EQ(kind_of([] { weingarten_coefficients(0.0, 1.0); }), ErrorKind::ZeroMeanCurvature);
}

TEST(Weingarten, RelationHoldsOnOffsetsOfAConstantHFace) {
  Rng rng(11);
  int done = 0;
  while (done < 200) {
    const double H0 = rng.uniform(0.2, 2.0), K = rng.uniform(-3, 3), t = rng.uniform(-1, 1);
    if (std::abs(1 - 2 * H0 * t + K * t * t) < 0.1) continue;
    const MeanGauss mg = parallel_family_curvatures(H0, K, t);
    const WeingartenCoefficients w = weingarten_coefficients(H0, t);
    EXPECT_NEAR(w.alpha * mg.H + w.beta * mg.K, 1.0, 1e-12 * std::max(1.0, std::abs(w.alpha * mg.H)));
    ++done;
  }
}

TEST(ConstantCurvature, GeneratedSurfacesPass) {
  const GaussMeridian g = spherical_gauss_meridian(heights(20, 0.8));
  const ParallelPair cat = rot_surface(gen_prescribed_H(g.r_star, g.h_star, {0.0}, 1.0, 0.0), std::numbers::pi / 10, 10);
  EXPECT_TRUE(constant_curvature_check(cat, CurvatureTarget::minimal(), 1e-12).pass);
  EXPECT_FALSE(constant_curvature_check(cat, CurvatureTarget::cmc(0.1), 1e-6).pass);

  const ParallelPair ps = rot_surface(gen_prescribed_K(g.r_star, g.h_star, 1.0, 1.0, 0.0), std::numbers::pi / 10, 10);
  EXPECT_TRUE(constant_curvature_check(ps, CurvatureTarget::constant_K(1.0), 1e-12).pass);

  const Ellipse e(2.0, std::sqrt(3.0));
  const RolledTraces tr = roll_to_line(billiard_trajectory(e, ConfocalMode{3.0, 0.3, 24}), e);
  const DelaunayPair dp = delaunay_pair(tr, std::numbers::pi / 12, 12);
  const ConstantCurvatureReport r = constant_curvature_check(dp.m, CurvatureTarget::cmc(1.0 / tr.l), 1e-9);
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.dual_residual.has_value());
  EXPECT_LE(*r.dual_residual, 1e-9);
}

TEST(ConstantCurvature, MidSurfaceOfCmcPairHasConstantK) {
  const double H0 = 0.25;
  const GaussMeridian g = spherical_gauss_meridian(heights(30, 0.9));
  const ParallelPair cmc = rot_surface(gen_prescribed_H(g.r_star, g.h_star, {H0}, 1.0, 0.0), std::numbers::pi / 12, 12);
  const ParallelPair mid = offset_pair(cmc, 1.0 / (2.0 * H0));
  EXPECT_TRUE(constant_curvature_check(mid, CurvatureTarget::constant_K(4 * H0 * H0), 1e-10).pass);
}
