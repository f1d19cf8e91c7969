#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace corrlab {

/// Space-time or momentum-energy four-vector stored as raw components.
/// Two quadratic forms are exposed: the Lorentz square with metric
/// (1,-1,-1,-1) and the plain Euclidean square.
struct FourVector {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr FourVector() = default;
  constexpr FourVector(double t_, double x_, double y_, double z_) : t(t_), x(x_), y(y_), z(z_) {}

  constexpr double& operator[](int i) { return i == 0 ? t : i == 1 ? x : i == 2 ? y : z; }
  constexpr double operator[](int i) const { return i == 0 ? t : i == 1 ? x : i == 2 ? y : z; }

  constexpr FourVector& operator+=(const FourVector& o) {
    t += o.t; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr FourVector& operator-=(const FourVector& o) {
    t -= o.t; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr FourVector& operator*=(double s) {
    t *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  constexpr std::array<double, 3> spatial() const { return {x, y, z}; }

  friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

constexpr FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
constexpr FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
constexpr FourVector operator-(const FourVector& a) { return {-a.t, -a.x, -a.y, -a.z}; }
constexpr FourVector operator*(double s, FourVector a) { return a *= s; }
constexpr FourVector operator*(FourVector a, double s) { return a *= s; }

constexpr double lorentz_dot(const FourVector& a, const FourVector& b) {
  return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}
constexpr double lorentz_square(const FourVector& a) { return lorentz_dot(a, a); }

constexpr double euclidean_dot(const FourVector& a, const FourVector& b) {
  return a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr double euclidean_square(const FourVector& a) { return euclidean_dot(a, a); }
inline double euclidean_norm(const FourVector& a) { return std::sqrt(euclidean_square(a)); }

constexpr double spatial_square(const FourVector& a) { return a.x * a.x + a.y * a.y + a.z * a.z; }
inline double spatial_norm(const FourVector& a) { return std::sqrt(spatial_square(a)); }

/// On-shell four-momentum with positive energy for the given spatial momentum.
inline FourVector on_shell(double mass, double px, double py, double pz) {
  return {std::sqrt(mass * mass + px * px + py * py + pz * pz), px, py, pz};
}

inline std::ostream& operator<<(std::ostream& os, const FourVector& v) {
  return os << '(' << v.t << ", " << v.x << ", " << v.y << ", " << v.z << ')';
}

}  // namespace corrlab
