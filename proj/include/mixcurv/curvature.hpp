#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mixcurv/mesh.hpp"
#include "mixcurv/polygon_area.hpp"

namespace mixcurv {

struct PrincipalCurvatures {
  double kappa1 = 0.0;  // kappa1 <= kappa2
  double kappa2 = 0.0;
};

// Roots of x^2 - 2 H x + K, ascending; nullopt when H^2 < K.
std::optional<PrincipalCurvatures> principal_curvatures(double H, double K);

// m(f) and s(f) expressed in the chart of m(f).
struct FacePolygons {
  Polygon2 m;
  Polygon2 s;
};

FacePolygons face_polygons(const ParallelPair& pair, Index f);

struct FaceAreas {
  double area_m = 0.0;
  double area_s = 0.0;
  double mixed = 0.0;
};

FaceAreas face_areas(const ParallelPair& pair, Index f);

struct FaceCurvatureReport {
  Index face = 0;
  double H = 0.0;
  double K = 0.0;
  double area_m = 0.0;
  double area_s = 0.0;
  double mixed = 0.0;
  std::optional<PrincipalCurvatures> principal;
  // s(f) is a scaled translate of m(f).
  bool similar = false;
  double planarity_residual = 0.0;
};

// H = -A(m,s)/A(m), K = A(s)/A(m). Throws VanishingFaceArea.
FaceCurvatureReport face_curvatures(const ParallelPair& pair, Index f);

struct SteinerCheck {
  double area = 0.0;       // A(m(f) + t s(f)) evaluated directly
  double predicted = 0.0;  // (1 - 2 H t + K t^2) A(m(f))
  double relative_error = 0.0;
};

SteinerCheck steiner_area(const ParallelPair& pair, Index f, double t);

struct EdgeCurvature {
  Index edge = 0;
  Index i = 0;
  Index j = 0;
  double kappa = 0.0;
  // Intersection of the lines m_i + R s_i and m_j + R s_j.
  std::optional<Vec3> center;
};

// s_j - s_i = kappa (m_i - m_j) along each edge.
std::vector<EdgeCurvature> edge_curvatures(const ParallelPair& pair);

// Edge curvatures of the four sides of quad face f in cycle order.
std::array<double, 4> face_edge_curvatures(const ParallelPair& pair, Index f);

struct MeanGauss {
  double H = 0.0;
  double K = 0.0;
};

// (H, K) of a quad from its side curvatures k01, k12, k23, k30. Throws
// SingularDenominator when |k01 + k23 - k12 - k30| < tol max|k|.
MeanGauss face_from_edge_curvatures(double k01, double k12, double k23, double k30,
                                    double tol = 1e-10);

// Curvatures of the face of m + t s. Throws DegenerateOffsetFace.
MeanGauss parallel_family_curvatures(double H, double K, double t);

struct WeingartenCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

// alpha H_t + beta K_t = 1 on the offsets of a pair with constant H0.
// Throws ZeroMeanCurvature.
WeingartenCoefficients weingarten_coefficients(double H0, double t);

enum class CurvatureKind { minimal, constant_mean, constant_gaussian };

struct CurvatureTarget {
  CurvatureKind kind = CurvatureKind::minimal;
  double value = 0.0;

  static CurvatureTarget minimal() { return {CurvatureKind::minimal, 0.0}; }
  static CurvatureTarget cmc(double H0) { return {CurvatureKind::constant_mean, H0}; }
  static CurvatureTarget constant_K(double K0) { return {CurvatureKind::constant_gaussian, K0}; }
};

struct ConstantCurvatureReport {
  CurvatureTarget target;
  double max_deviation = 0.0;
  std::optional<Index> worst_face;
  // cmc only: max |A(m, m + s/H0)| / |A(m)|.
  std::optional<double> dual_residual;
  bool pass = true;
};

// Throws VanishingFaceArea.
ConstantCurvatureReport constant_curvature_check(const ParallelPair& pair,
                                                 const CurvatureTarget& target, double tol);

}  // namespace mixcurv
