#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "mixcurv/curvature.hpp"
#include "mixcurv/mesh.hpp"

namespace mixcurv {

// Meridian (r_i, 0, h_i) of a surface of revolution about the z axis and the
// matching Gauss meridian (r*_i, 0, h*_i).
struct MeridianSpec {
  std::vector<double> r;
  std::vector<double> h;
  std::vector<double> r_star;
  std::vector<double> h_star;
  // Steps i -> i+1 whose Gauss edge is horizontal; their height step was
  // chosen by the generator, not forced by parallelity.
  std::vector<std::size_t> free_height_steps;

  std::size_t size() const { return r.size(); }
  // max |(r_{i+1}-r_i)(h*_{i+1}-h*_i) - (r*_{i+1}-r*_i)(h_{i+1}-h_i)|
  double parallelity_defect() const;
};

// Throws ParallelityViolated, LengthMismatch, InvalidArgument. The band
// closes up when copies * 2 alpha == 2 pi; otherwise copies + 1 meridians are
// placed and the strip stays open.
ParallelPair rot_surface(const MeridianSpec& ms, double alpha, std::size_t copies);

// General form: meridian k is mapped by the linear map maps[k] of the (x, y)
// plane (the z axis stays fixed). With closed = true meridian maps.size()
// coincides with meridian 0.
ParallelPair rot_surface(const MeridianSpec& ms, const std::vector<Eigen::Matrix2d>& maps,
                         bool closed);

struct RotFaceCurvatures {
  double H = 0.0;
  double K = 0.0;
  // Rotational principal values; their sum is -2H.
  double kappa1_rot = 0.0;
  double kappa2_rot = 0.0;

  // The same pair in the convention of principal_curvatures(): the roots of
  // x^2 - 2Hx + K are -kappa_rot. Ascending.
  PrincipalCurvatures principal() const;
};

// Throws EqualRadii.
RotFaceCurvatures rot_face_curvatures(double r0, double r1, double rs0, double rs1);

// Solves r_i r*_i - r_{i+1} r*_{i+1} = H_i (r_{i+1}^2 - r_i^2) step by step.
// H holds one value per step or a single value. Throws NoPositiveRoot,
// InvalidArgument, LengthMismatch.
MeridianSpec gen_prescribed_H(const std::vector<double>& r_star, const std::vector<double>& h_star,
                              const std::vector<double>& H, double r0, double h0);

// K (r_{i+1}^2 - r_i^2) = r*_{i+1}^2 - r*_i^2. Throws NegativeRadicand.
MeridianSpec gen_prescribed_K(const std::vector<double>& r_star, const std::vector<double>& h_star,
                              double K, double r0, double h0);

struct GaussMeridian {
  std::vector<double> r_star;
  std::vector<double> h_star;
};

// r*_i = sqrt(1 - h*_i^2). Throws OutOfRange.
GaussMeridian spherical_gauss_meridian(const std::vector<double>& h_star);

}  // namespace mixcurv
