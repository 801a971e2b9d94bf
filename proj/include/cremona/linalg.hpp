#pragma once

#include <array>

#include "cremona/rational.hpp"

namespace cremona {

using Vec3 = std::array<Rat, 3>;

inline bool vec_is_zero(const Vec3& v) { return v[0] == 0 && v[1] == 0 && v[2] == 0; }

/// Canonical representative of a projective point: integer coprime
/// coordinates, first nonzero one positive.
inline Vec3 normalize_point(const Vec3& v) {
    if (vec_is_zero(v)) fail(errc::invalid_input, "zero vector is not a projective point");
    Int l = 1;
    for (const auto& x : v) l = l / int_gcd(l, rat_den(x)) * rat_den(x);
    std::array<Int, 3> w;
    for (int i = 0; i < 3; ++i) w[i] = rat_num(v[i]) * (l / rat_den(v[i]));
    Int g = int_gcd(int_gcd(int_abs(w[0]), int_abs(w[1])), int_abs(w[2]));
    for (auto& x : w) x /= g;
    int s = 0;
    for (const auto& x : w)
        if (x != 0) {
            s = x.sign();
            break;
        }
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = Rat(s < 0 ? -w[i] : w[i]);
    return out;
}

inline bool same_point(const Vec3& a, const Vec3& b) {
    // cross product zero <=> proportional
    return a[1] * b[2] - a[2] * b[1] == 0 && a[2] * b[0] - a[0] * b[2] == 0 &&
           a[0] * b[1] - a[1] * b[0] == 0;
}

/// Row-major 3x3 rational matrix.
struct Mat3 {
    std::array<Rat, 9> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0] = r.m[4] = r.m[8] = 1;
        return r;
    }

    Rat& at(int r, int c) { return m[r * 3 + c]; }
    const Rat& at(int r, int c) const { return m[r * 3 + c]; }

    static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 r;
        for (int i = 0; i < 3; ++i) {
            r.at(i, 0) = c0[i];
            r.at(i, 1) = c1[i];
            r.at(i, 2) = c2[i];
        }
        return r;
    }

    Rat det() const {
        return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
               at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
               at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Rat s = 0;
                for (int k = 0; k < 3; ++k) s += at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    Vec3 apply(const Vec3& v) const {
        Vec3 r;
        for (int i = 0; i < 3; ++i) r[i] = at(i, 0) * v[0] + at(i, 1) * v[1] + at(i, 2) * v[2];
        return r;
    }

    /// Exact inverse via the adjugate; throws on singular input.
    Mat3 inverse() const {
        Rat d = det();
        if (d == 0) fail(errc::invalid_input, "singular matrix");
        Mat3 r;
        r.at(0, 0) = (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) / d;
        r.at(0, 1) = (at(0, 2) * at(2, 1) - at(0, 1) * at(2, 2)) / d;
        r.at(0, 2) = (at(0, 1) * at(1, 2) - at(0, 2) * at(1, 1)) / d;
        r.at(1, 0) = (at(1, 2) * at(2, 0) - at(1, 0) * at(2, 2)) / d;
        r.at(1, 1) = (at(0, 0) * at(2, 2) - at(0, 2) * at(2, 0)) / d;
        r.at(1, 2) = (at(0, 2) * at(1, 0) - at(0, 0) * at(1, 2)) / d;
        r.at(2, 0) = (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0)) / d;
        r.at(2, 1) = (at(0, 1) * at(2, 0) - at(0, 0) * at(2, 1)) / d;
        r.at(2, 2) = (at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0)) / d;
        return r;
    }
};

/// det(a b c) as columns; zero iff the three points are collinear.
inline Rat triple_det(const Vec3& a, const Vec3& b, const Vec3& c) {
    return Mat3::from_columns(a, b, c).det();
}

} // namespace cremona
