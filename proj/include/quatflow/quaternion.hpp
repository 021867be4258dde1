#pragma once

#include <cmath>
#include <ostream>

namespace quatflow {

/// Element w + x i + y j + z k of the Hamilton algebra.
///
/// Plain value record; component order (w, x, y, z) is also the on-disk
/// component order of field snapshots.
template <typename Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  constexpr Quaternion() = default;
  constexpr Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion identity() { return {Scalar(1), Scalar(0), Scalar(0), Scalar(0)}; }
  static constexpr Quaternion i() { return {Scalar(0), Scalar(1), Scalar(0), Scalar(0)}; }
  static constexpr Quaternion j() { return {Scalar(0), Scalar(0), Scalar(1), Scalar(0)}; }
  static constexpr Quaternion k() { return {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}; }

  constexpr Scalar operator[](int c) const { return c == 0 ? w : c == 1 ? x : c == 2 ? y : z; }
  constexpr Scalar& operator[](int c) { return c == 0 ? w : c == 1 ? x : c == 2 ? y : z; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(Scalar s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

using Quat = Quaternion<double>;

/// Hamilton product, i^2 = j^2 = k^2 = ijk = -1.
template <typename Scalar>
constexpr Quaternion<Scalar> hamilton_mul(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <typename Scalar>
constexpr Quaternion<Scalar> conjugate(const Quaternion<Scalar>& q) {
  return {q.w, -q.x, -q.y, -q.z};
}

template <typename Scalar>
constexpr Scalar norm_sq(const Quaternion<Scalar>& q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

template <typename Scalar>
Scalar magnitude(const Quaternion<Scalar>& q) {
  return std::sqrt(norm_sq(q));
}

template <typename Scalar>
constexpr Quaternion<Scalar> operator*(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
  return hamilton_mul(a, b);
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator+(Quaternion<Scalar> a, const Quaternion<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator-(Quaternion<Scalar> a, const Quaternion<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator-(const Quaternion<Scalar>& a) {
  return {-a.w, -a.x, -a.y, -a.z};
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Scalar s, Quaternion<Scalar> q) {
  return q *= s;
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Quaternion<Scalar> q, Scalar s) {
  return q *= s;
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Quaternion<Scalar>& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

}  // namespace quatflow
