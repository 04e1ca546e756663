#include "dpm/mms.hpp"

#include <cmath>
#include <stdexcept>

namespace dpm {

TestCase TestCase::by_id(const std::string& id) {
  TestCase tc;
  tc.id_ = id;
  if (id == "d1") {
    tc.model_ = ModelCase::dynamic_bc;
    tc.radius_ = 0.5;
    tc.harmonics_ = 9;
    tc.u_form_ = Form::quadratic;
  } else if (id == "d2") {
    tc.model_ = ModelCase::dynamic_bc;
    tc.radius_ = 0.5;
    tc.harmonics_ = 400;
    tc.u_form_ = Form::trig;
  } else if (id == "lin1" || id == "nl1") {
    tc.model_ = (id == "lin1") ? ModelCase::linear_coupling
                               : ModelCase::nonlinear_coupling;
    tc.radius_ = 1.0;
    tc.harmonics_ = 529;
    tc.u_form_ = Form::gauss;
    tc.v_form_ = Form::gauss_surface;
  } else if (id == "nl2") {
    tc.model_ = ModelCase::nonlinear_coupling;
    tc.radius_ = 1.0;
    tc.harmonics_ = 400;
    tc.u_form_ = Form::trig;
    tc.v_form_ = Form::trig;
  } else {
    throw std::invalid_argument("unknown test case: " + id);
  }
  return tc;
}

PointValues TestCase::eval_form(Form form, double x, double y, double z,
                                double t) {
  PointValues p;
  const double et = std::exp(t);
  switch (form) {
    case Form::quadratic: {
      p.value = et * (x * x + 2.0 * y * y + 3.0 * z * z);
      p.grad = {et * 2.0 * x, et * 4.0 * y, et * 6.0 * z};
      p.hess[0][0] = 2.0 * et;
      p.hess[1][1] = 4.0 * et;
      p.hess[2][2] = 6.0 * et;
      break;
    }
    case Form::trig: {
      const double sx = std::sin(x), cx = std::cos(x);
      const double sy = std::sin(2.0 * y), cy = std::cos(2.0 * y);
      const double sz = std::sin(3.0 * z), cz = std::cos(3.0 * z);
      p.value = et * sx * sy * sz;
      p.grad = {et * cx * sy * sz, 2.0 * et * sx * cy * sz,
                3.0 * et * sx * sy * cz};
      p.hess[0][0] = -p.value;
      p.hess[1][1] = -4.0 * p.value;
      p.hess[2][2] = -9.0 * p.value;
      p.hess[0][1] = p.hess[1][0] = 2.0 * et * cx * cy * sz;
      p.hess[0][2] = p.hess[2][0] = 3.0 * et * cx * sy * cz;
      p.hess[1][2] = p.hess[2][1] = 6.0 * et * sx * cy * cz;
      break;
    }
    case Form::gauss: {
      // e^t exp(-x(x-1) - y(y-1))
      const double ax = 1.0 - 2.0 * x;
      const double ay = 1.0 - 2.0 * y;
      const double e = et * std::exp(-x * (x - 1.0) - y * (y - 1.0));
      p.value = e;
      p.grad = {ax * e, ay * e, 0.0};
      p.hess[0][0] = (ax * ax - 2.0) * e;
      p.hess[1][1] = (ay * ay - 2.0) * e;
      p.hess[0][1] = p.hess[1][0] = ax * ay * e;
      break;
    }
    case Form::gauss_surface: {
      // e^t exp(-x(x-1) - y(y-1)) * (1 + x(1-2x) + y(1-2y))
      const double ax = 1.0 - 2.0 * x;
      const double ay = 1.0 - 2.0 * y;
      const double e = et * std::exp(-x * (x - 1.0) - y * (y - 1.0));
      const double q = 1.0 + x * ax + y * ay;
      const double qx = 1.0 - 4.0 * x;
      const double qy = 1.0 - 4.0 * y;
      p.value = e * q;
      p.grad = {e * (ax * q + qx), e * (ay * q + qy), 0.0};
      p.hess[0][0] = e * ((ax * ax - 2.0) * q + 2.0 * ax * qx - 4.0);
      p.hess[1][1] = e * ((ay * ay - 2.0) * q + 2.0 * ay * qy - 4.0);
      p.hess[0][1] = p.hess[1][0] = e * (ax * ay * q + ax * qy + ay * qx);
      break;
    }
  }
  return p;
}

PointValues TestCase::eval(WhichField which, double x, double y, double z,
                           double t) const {
  if (which == WhichField::v && !has_surface_field())
    throw std::invalid_argument("test case " + id_ + " has no surface field");
  return eval_form(which == WhichField::u ? u_form_ : v_form_, x, y, z, t);
}

double TestCase::value(WhichField which, double x, double y, double z,
                       double t) const {
  return eval(which, x, y, z, t).value;
}

double TestCase::time_derivative(WhichField which, double x, double y,
                                 double z, double t) const {
  // All built-in solutions are e^t times a spatial profile.
  return eval(which, x, y, z, t).value;
}

double TestCase::laplacian(WhichField which, double x, double y, double z,
                           double t) const {
  const PointValues p = eval(which, x, y, z, t);
  return p.hess[0][0] + p.hess[1][1] + p.hess[2][2];
}

double TestCase::radial_derivative(WhichField which, double x, double y,
                                   double z, double t) const {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r == 0.0) throw std::domain_error("radial derivative at the origin");
  const PointValues p = eval(which, x, y, z, t);
  return (p.grad[0] * x + p.grad[1] * y + p.grad[2] * z) / r;
}

double TestCase::second_radial_derivative(WhichField which, double x,
                                          double y, double z, double t) const {
  const double r2 = x * x + y * y + z * z;
  if (r2 == 0.0) throw std::domain_error("radial derivative at the origin");
  const PointValues p = eval(which, x, y, z, t);
  const std::array<double, 3> n{x, y, z};
  double acc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) acc += n[a] * p.hess[a][b] * n[b];
  return acc / r2;
}

double TestCase::surface_laplacian(WhichField which, double x, double y,
                                   double z, double t) const {
  return laplacian(which, x, y, z, t) -
         second_radial_derivative(which, x, y, z, t) -
         (2.0 / radius_) * radial_derivative(which, x, y, z, t);
}

double TestCase::forcing_f(double x, double y, double z, double t) const {
  return time_derivative(WhichField::u, x, y, z, t) -
         laplacian(WhichField::u, x, y, z, t);
}

double TestCase::forcing_g(double x, double y, double z, double t) const {
  if (model_ == ModelCase::dynamic_bc) {
    return time_derivative(WhichField::u, x, y, z, t) +
           value(WhichField::u, x, y, z, t) +
           radial_derivative(WhichField::u, x, y, z, t) -
           surface_laplacian(WhichField::u, x, y, z, t);
  }
  const double u = value(WhichField::u, x, y, z, t);
  const double v = value(WhichField::v, x, y, z, t);
  return time_derivative(WhichField::v, x, y, z, t) -
         surface_laplacian(WhichField::v, x, y, z, t) - coupling_h(u, v);
}

double TestCase::forcing_w(double x, double y, double z, double t) const {
  if (model_ != ModelCase::nonlinear_coupling)
    throw std::invalid_argument("flux correction only for nonlinear coupling");
  return -radial_derivative(WhichField::u, x, y, z, t) -
         value(WhichField::u, x, y, z, t) * value(WhichField::v, x, y, z, t);
}

double TestCase::coupling_h(double u, double v) const {
  switch (model_) {
    case ModelCase::linear_coupling:
      return u - v;
    case ModelCase::nonlinear_coupling:
      return u * v;
    case ModelCase::dynamic_bc:
      break;
  }
  throw std::invalid_argument("no coupling function for the dynamic case");
}

std::array<double, 3> sphere_point(double radius, double theta, double phi) {
  const double s = std::sin(theta);
  return {radius * s * std::cos(phi), radius * s * std::sin(phi),
          radius * std::cos(theta)};
}

}  // namespace dpm
