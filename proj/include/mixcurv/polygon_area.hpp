#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mixcurv/mesh.hpp"

namespace mixcurv {

// Closed planar polygon in a face chart.
class Polygon2 {
 public:
  // Throws InvalidArgument (fewer than 3 vertices) or NonFinite.
  explicit Polygon2(std::vector<Vec2> vertices);

  std::size_t size() const { return vertices_.size(); }
  const Vec2& operator[](std::size_t k) const { return vertices_[k]; }
  // Cyclic access.
  const Vec2& at(std::ptrdiff_t k) const;
  const std::vector<Vec2>& vertices() const { return vertices_; }

  Polygon2 translated(const Vec2& v) const;
  Polygon2 reversed() const;
  // Same vertex sequence started at corner k.
  Polygon2 rotated(std::size_t k) const;

 private:
  std::vector<Vec2> vertices_;
};

// a P + b Q, vertexwise. Throws LengthMismatch.
Polygon2 combine(double a, const Polygon2& p, double b, const Polygon2& q);

// Signed area, positive for counter-clockwise cycles.
double area(const Polygon2& p);
// Symmetric bilinear form with mixed_area(P, P) = area(P). Throws LengthMismatch.
double mixed_area(const Polygon2& p, const Polygon2& q);

// P1[start_first + t] == P2[start_second - t] for t = 0..edge_count.
struct SharedChain {
  std::size_t start_first = 0;
  std::size_t start_second = 0;
  std::size_t edge_count = 1;
};

// Glues two polygons along a common boundary chain traversed in opposite
// directions. Throws EdgesDoNotCancel.
Polygon2 concat(const Polygon2& first, const Polygon2& second, const SharedChain& chain,
                double rel_tol = 1e-12);

enum class SignatureClass { indefinite, positive_definite, negative_definite, semidefinite, degenerate };

const char* to_string(SignatureClass c);

struct SignatureReport {
  SignatureClass classification = SignatureClass::degenerate;
  // (1 - s - t) / (s t) in the normal form (0,1), (0,0), (1,0), (s,t).
  double determinant = 0.0;
  bool convex_position = false;
  double s = 0.0;
  double t = 0.0;
  // Cyclic shift applied before normalizing.
  std::size_t frame_offset = 0;
};

// Area form on quads parallel to P modulo translation. Throws InvalidArgument
// (not a quad) or DegenerateBeyondTriangle.
SignatureReport quad_signature(const Polygon2& p);

// All four vertices strictly extremal in their convex hull; collinear ties
// count as not extremal.
bool quad_in_convex_position(const Polygon2& p, double rel_tol = 1e-12);

struct AreaPolynomial {
  double a = 0.0;  // A(P)
  double b = 0.0;  // A(P, Q)
  double c = 0.0;  // A(Q)
  double discriminant = 0.0;  // b^2 - a c
  // Real roots of a x^2 + 2 b x + c, ascending; empty when complex.
  std::vector<double> roots;
  bool is_square = false;
};

// Throws BothAreasZero or LengthMismatch.
AreaPolynomial area_polynomial_roots(const Polygon2& p, const Polygon2& q);

}  // namespace mixcurv
