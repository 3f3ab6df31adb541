#pragma once

#include <array>
#include <cmath>

namespace valcalc {

/// Quaternion w + x i + y j + z k over a field T, stored as (w, x, y, z).
template <class T>
struct Quaternion {
  std::array<T, 4> c{};

  Quaternion() = default;
  Quaternion(T w, T x, T y, T z) : c{w, x, y, z} {}

  T& operator[](int i) { return c[i]; }
  const T& operator[](int i) const { return c[i]; }

  Quaternion conj() const { return {c[0], -c[1], -c[2], -c[3]}; }
  T norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }

  friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
            p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
            p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
  }
  friend Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]};
  }
  friend bool operator==(const Quaternion& p, const Quaternion& q) { return p.c == q.c; }

  /// Row-major matrix of x -> q x.
  std::array<T, 16> left_matrix() const {
    std::array<T, 16> m{};
    for (int j = 0; j < 4; ++j) {
      Quaternion e;
      e[j] = T(1);
      const Quaternion r = *this * e;
      for (int i = 0; i < 4; ++i) m[i * 4 + j] = r[i];
    }
    return m;
  }
  /// Row-major matrix of x -> x q.
  std::array<T, 16> right_matrix() const {
    std::array<T, 16> m{};
    for (int j = 0; j < 4; ++j) {
      Quaternion e;
      e[j] = T(1);
      const Quaternion r = e * *this;
      for (int i = 0; i < 4; ++i) m[i * 4 + j] = r[i];
    }
    return m;
  }
};

using QuaternionD = Quaternion<double>;

}  // namespace valcalc
