#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mixcurv/mesh.hpp"

namespace mixcurv {

class Ellipse {
 public:
  // Throws InvalidArgument unless a >= b > 0.
  Ellipse(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double focal_distance() const;
  Vec2 focus_a() const { return {-focal_distance(), 0.0}; }
  Vec2 focus_b() const { return {focal_distance(), 0.0}; }
  Vec2 point(double phi) const;
  // | support distance - distance of the line from the center |, for the line
  // through p with direction d.
  double tangency_residual(const Vec2& p, const Vec2& d) const;
  // Point where the tangent line through p with direction d touches.
  Vec2 touching_point(const Vec2& p, const Vec2& d) const;

 private:
  double a_;
  double b_;
};

// Reflection billiard in the confocal ellipse with semi-major axis a_prime,
// starting on it at parameter start_param.
struct ConfocalMode {
  double a_prime = 0.0;
  double start_param = 0.0;
  std::size_t bounces = 0;
};

// P_i = intersection of the tangents at consecutive parameters.
struct FreeMode {
  std::vector<double> tangent_params;
};

using BilliardMode = std::variant<ConfocalMode, FreeMode>;

struct BilliardTrajectory {
  std::vector<Vec2> vertices;
  // One per segment [P_i, P_{i+1}].
  std::vector<Vec2> tangency_points;
  std::optional<double> confocal_a_prime;
  double max_tangency_residual = 0.0;
};

// Throws TangencyLost, CollinearTriple, InvalidArgument.
BilliardTrajectory billiard_trajectory(const Ellipse& e, const BilliardMode& mode, double tol = 1e-9);

struct RolledTraces {
  // Positions of P_i along the line.
  std::vector<double> axis_positions;
  // One trace point per segment; b_trace on y > 0, a_trace on y < 0.
  std::vector<Vec2> b_trace;
  std::vector<Vec2> a_trace;
  std::vector<double> r;        // dist(B_i, line)
  std::vector<double> r_prime;  // dist(A_i, line)
  double l = 0.0;               // mean |A_i B_i|
  double l_spread = 0.0;
  // |A P_i| + |B P_i|
  std::vector<double> focal_sums;
  std::optional<double> d;  // 2 a' for confocal trajectories
};

// Throws ReflectionAmbiguity.
RolledTraces roll_to_line(const BilliardTrajectory& t, const Ellipse& e);

struct DelaunayReport {
  double l = 0.0;
  std::vector<double> H_m;
  std::vector<double> H_mt;
  double max_H_deviation = 0.0;  // against 1/l, both surfaces
  std::optional<double> d;
  std::vector<double> edge_products;  // |A_i A_{i+1}| |B_i B_{i+1}|
  std::vector<double> cross_ratios_m;
  std::vector<double> cross_ratios_mt;
  double cross_ratio_spread = 0.0;
};

struct DelaunayPair {
  ParallelPair m;   // (m, s)
  ParallelPair mt;  // (m~, -s)
  DelaunayReport report;
};

// Gauss image s = (m~ - m) / l, which gives H = 1/l on both surfaces.
DelaunayPair delaunay_pair(const RolledTraces& traces, double alpha, std::size_t copies);

// Real cross-ratio (p0-p1)(p2-p3) / ((p1-p2)(p3-p0)) in the face chart.
// Throws NotConcyclic when the imaginary part exceeds rel_tol |cr|.
double face_cross_ratio(std::span<const Vec3> quad, double rel_tol = 1e-9);

}  // namespace mixcurv
