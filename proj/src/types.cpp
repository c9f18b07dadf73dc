#include "twist/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace twist {

Vec3 BlochDirection::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

BlochDirection BlochDirection::from_vector(const Vec3& v) {
  const double r = v.norm();
  if (r == 0.0) return {};
  double phi = std::atan2(v.y(), v.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {std::acos(std::clamp(v.z() / r, -1.0, 1.0)), phi};
}

namespace {
constexpr int index_of(int k, int l) {
  if (k == l) return k;
  const int a = k < l ? k : l;
  const int b = k < l ? l : k;
  if (a == 0 && b == 1) return 3;
  if (a == 0 && b == 2) return 4;
  return 5;
}
}  // namespace

TwistingTensor::TwistingTensor(const Mat3& chi, const Vec3& omega) : omega_(omega) {
  c_ = {chi(0, 0), chi(1, 1), chi(2, 2), 0.5 * (chi(0, 1) + chi(1, 0)),
        0.5 * (chi(0, 2) + chi(2, 0)), 0.5 * (chi(1, 2) + chi(2, 1))};
}

TwistingTensor TwistingTensor::diagonal(double chi_x, double chi_y, double chi_z,
                                        const Vec3& omega) {
  return from_components({chi_x, chi_y, chi_z, 0.0, 0.0, 0.0}, omega);
}

TwistingTensor TwistingTensor::from_components(const std::array<double, 6>& c,
                                               const Vec3& omega) {
  TwistingTensor t;
  t.c_ = c;
  t.omega_ = omega;
  return t;
}

double TwistingTensor::chi(int k, int l) const { return c_[index_of(k, l)]; }

Mat3 TwistingTensor::chi_matrix() const {
  Mat3 m;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) m(k, l) = chi(k, l);
  return m;
}

TwistingTensor TwistingTensor::with_omega(const Vec3& omega) const {
  TwistingTensor t = *this;
  t.omega_ = omega;
  return t;
}

TwistingTensor TwistingTensor::trace_shifted(double c) const {
  TwistingTensor t = *this;
  for (int k = 0; k < 3; ++k) t.c_[k] += c;
  return t;
}

TwistingTensor TwistingTensor::operator+(const TwistingTensor& other) const {
  TwistingTensor t = *this;
  for (int i = 0; i < 6; ++i) t.c_[i] += other.c_[i];
  t.omega_ += other.omega_;
  return t;
}

bool TwistingTensor::is_diagonal() const { return c_[3] == 0.0 && c_[4] == 0.0 && c_[5] == 0.0; }

}  // namespace twist
