#pragma once

#include <array>
#include <string>

namespace dpm {

enum class ModelCase { dynamic_bc, linear_coupling, nonlinear_coupling };

enum class WhichField { u, v };

/// Value and first/second derivatives of a manufactured field at one point.
struct PointValues {
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
};

/// Manufactured exact solutions and the forcing terms they induce.  All
/// built-in solutions carry a common e^t factor, so the exact time
/// derivative of every field equals its value.
class TestCase {
 public:
  /// Known ids: d1, d2 (dynamic boundary condition), lin1 (linear bulk-
  /// surface coupling), nl1, nl2 (nonlinear coupling).  Throws on others.
  static TestCase by_id(const std::string& id);

  const std::string& id() const { return id_; }
  ModelCase model() const { return model_; }
  double radius() const { return radius_; }
  int harmonics_per_term() const { return harmonics_; }
  bool has_surface_field() const { return model_ != ModelCase::dynamic_bc; }

  PointValues eval(WhichField which, double x, double y, double z,
                   double t) const;

  double value(WhichField which, double x, double y, double z, double t) const;
  double time_derivative(WhichField which, double x, double y, double z,
                         double t) const;
  double laplacian(WhichField which, double x, double y, double z,
                   double t) const;
  /// d/dr along x/|x|; undefined at the origin.
  double radial_derivative(WhichField which, double x, double y, double z,
                           double t) const;
  /// Second radial derivative x^T H x / |x|^2.
  double second_radial_derivative(WhichField which, double x, double y,
                                  double z, double t) const;
  /// Surface Laplacian via the sphere identity
  /// lap_surf = lap - u_rr - (2/R) u_r; the point must lie on the sphere.
  double surface_laplacian(WhichField which, double x, double y, double z,
                           double t) const;

  /// Bulk source f = u_t - lap u.
  double forcing_f(double x, double y, double z, double t) const;
  /// Surface source g.  Dynamic case: g = u_t + u + u_r - lap_surf u.
  /// Coupling cases: g = v_t - lap_surf v - h(u, v).
  double forcing_g(double x, double y, double z, double t) const;
  /// Flux correction for the nonlinear coupling: w = -u_r - u*v on the
  /// sphere, so -u_r = u*v + w holds exactly.
  double forcing_w(double x, double y, double z, double t) const;
  /// Coupling function h(u, v): u - v (linear) or u*v (nonlinear).
  double coupling_h(double u, double v) const;

 private:
  enum class Form { quadratic, trig, gauss, gauss_surface };

  static PointValues eval_form(Form form, double x, double y, double z,
                               double t);

  std::string id_;
  ModelCase model_ = ModelCase::dynamic_bc;
  double radius_ = 0.0;
  int harmonics_ = 0;
  Form u_form_ = Form::quadratic;
  Form v_form_ = Form::quadratic;
};

/// Cartesian point on the sphere of radius R at angles (theta, phi).
std::array<double, 3> sphere_point(double radius, double theta, double phi);

}  // namespace dpm
