#pragma once

#include <cmath>

namespace spdc {

// Transverse 2-vector (x is the in-principal-plane axis by default convention).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
};

// Which transverse axis lies in the optic-axis/z plane.
enum class PrincipalAxis { x, y };

}  // namespace spdc
