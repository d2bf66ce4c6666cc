#pragma once

// Fixed-size 2D vector/matrix arithmetic. Everything here is a plain value
// type; matrices are row-major [a b; c d].

#include <array>
#include <cmath>

#include "contattn/errors.hpp"

namespace contattn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double operator[](int i) const { return i == 0 ? x : y; }
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // [a b; c d]

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double u, double v) { return {u, 0.0, 0.0, v}; }
    static Mat2 outer(const Vec2& u, const Vec2& v) {
        return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y};
    }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    bool symmetric(double tol = 1e-12) const { return std::abs(b - c) <= tol * (1.0 + std::abs(b)); }

    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0) throw SingularSystemError("2x2 matrix is singular");
        const double s = 1.0 / dt;
        return {d * s, -b * s, -c * s, a * s};
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Eigenvalues of a symmetric 2x2, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
    const double mean = 0.5 * (m.a + m.d);
    const double off = 0.5 * (m.b + m.c);
    const double delta = std::sqrt(0.25 * (m.a - m.d) * (m.a - m.d) + off * off);
    return {mean - delta, mean + delta};
}

inline bool is_spd(const Mat2& m, double min_eig = 0.0) {
    if (!m.symmetric()) return false;
    return sym_eigenvalues(m)[0] > min_eig;
}

inline void require_spd(const Mat2& m, const char* what, double min_eig = 0.0) {
    if (!is_spd(m, min_eig)) throw NotSpdError(what);
}

// Symmetric (spectral) square root of an SPD matrix.
inline Mat2 sym_sqrt(const Mat2& m) {
    require_spd(m, "sym_sqrt: matrix not SPD");
    const double off = 0.5 * (m.b + m.c);
    if (std::abs(off) < 1e-300) {
        return Mat2::diag(std::sqrt(m.a), std::sqrt(m.d));
    }
    const auto ev = sym_eigenvalues(m);
    // eigenvector for ev[0]: (off, ev[0]-a) or (ev[0]-d, off), pick the stabler
    double vx, vy;
    if (std::abs(ev[0] - m.a) > std::abs(ev[0] - m.d)) {
        vx = off;
        vy = ev[0] - m.a;
    } else {
        vx = ev[0] - m.d;
        vy = off;
    }
    const double n = std::hypot(vx, vy);
    vx /= n;
    vy /= n;
    const double s0 = std::sqrt(ev[0]), s1 = std::sqrt(ev[1]);
    // V diag(s) V' with V = [v, v_perp], v_perp = (-vy, vx)
    return {s0 * vx * vx + s1 * vy * vy, (s0 - s1) * vx * vy,
            (s0 - s1) * vx * vy, s0 * vy * vy + s1 * vx * vx};
}

}  // namespace contattn
