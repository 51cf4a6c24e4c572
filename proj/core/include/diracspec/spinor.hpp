#pragma once

#include <cmath>

namespace dirac {

/// Two-component real solution value (y1, y2) at a point.
struct Spinor {
    double y1 = 0.0;
    double y2 = 0.0;

    constexpr Spinor& operator+=(const Spinor& o) { y1 += o.y1; y2 += o.y2; return *this; }
    constexpr Spinor& operator-=(const Spinor& o) { y1 -= o.y1; y2 -= o.y2; return *this; }
    constexpr Spinor& operator*=(double s) { y1 *= s; y2 *= s; return *this; }

    friend constexpr Spinor operator+(Spinor a, const Spinor& b) { return a += b; }
    friend constexpr Spinor operator-(Spinor a, const Spinor& b) { return a -= b; }
    friend constexpr Spinor operator*(double s, Spinor a) { return a *= s; }
    friend constexpr Spinor operator*(Spinor a, double s) { return a *= s; }
    friend constexpr Spinor operator-(const Spinor& a) { return {-a.y1, -a.y2}; }
    friend constexpr bool operator==(const Spinor&, const Spinor&) = default;

    double norm() const { return std::hypot(y1, y2); }
};

constexpr double dot(const Spinor& a, const Spinor& b) { return a.y1 * b.y1 + a.y2 * b.y2; }

/// u1 v2 - u2 v1
constexpr double cross(const Spinor& u, const Spinor& v) { return u.y1 * v.y2 - u.y2 * v.y1; }

/// Row-major 2x2 real matrix.
struct Mat2 {
    double m11 = 0.0, m12 = 0.0;
    double m21 = 0.0, m22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 outer(const Spinor& u, const Spinor& v) {
        return {u.y1 * v.y1, u.y1 * v.y2, u.y2 * v.y1, u.y2 * v.y2};
    }

    constexpr double det() const { return m11 * m22 - m12 * m21; }
    constexpr Mat2 transpose() const { return {m11, m21, m12, m22}; }
    constexpr Mat2 inverse() const {
        const double d = det();
        return {m22 / d, -m12 / d, -m21 / d, m11 / d};
    }
    double max_abs() const {
        return std::fmax(std::fmax(std::fabs(m11), std::fabs(m12)),
                         std::fmax(std::fabs(m21), std::fabs(m22)));
    }

    friend constexpr Spinor operator*(const Mat2& m, const Spinor& y) {
        return {m.m11 * y.y1 + m.m12 * y.y2, m.m21 * y.y1 + m.m22 * y.y2};
    }
    friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& a) {
        return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
    }
    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace dirac
