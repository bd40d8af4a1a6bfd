#pragma once

// Lorentz-Minkowski plane L^2 = (R^2, g = -dx^2 + dy^2): metric, causal
// classification, Frenet data, pseudopolar and null coordinates, boosts,
// and finite-difference curvature extraction from sampled curves.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace l2curves {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

enum class CausalSign : int { Spacelike = +1, Timelike = -1 };

inline double sign_of(CausalSign e) { return e == CausalSign::Spacelike ? 1.0 : -1.0; }
inline CausalSign flip(CausalSign e) {
    return e == CausalSign::Spacelike ? CausalSign::Timelike : CausalSign::Spacelike;
}

enum class CausalCharacter { Spacelike, Timelike, Lightlike };

// g(a, b) = -a.x b.x + a.y b.y
double metric(Vec2 a, Vec2 b);

// Classification of a nonzero vector; tolerance scales with the vector so
// near-null directions are reported Lightlike instead of feeding 1/sqrt(0)
// into downstream formulas.
CausalCharacter causal_character(Vec2 w, double tol_light = 1e-10);

// sqrt(|g(p, p)|): Lorentzian pseudodistance from the origin.
double pseudodistance_origin(Vec2 p);
// sqrt(|g(q-p, q-p)|)
double pseudodistance(Vec2 p, Vec2 q);

// Frenet frame of a unit-speed curve: T = (xd, yd), N = (yd, xd).
struct FrenetFrame {
    Vec2 tangent;
    Vec2 normal;
    CausalSign epsilon;
};

FrenetFrame frenet_frame(Vec2 tangent, CausalSign epsilon, double tol = 1e-6);

// Signed curvature eps*(xdd*yd - xd*ydd) from a 2-jet of a unit-speed curve.
// Throws std::invalid_argument when (xd, yd) is not unit for the given eps.
double signed_curvature_from_jet(double xd, double yd, double xdd, double ydd,
                                 CausalSign epsilon, double tol = 1e-6);

// nu-orthochrone Lorentz transformation (hyperbolic rotation / boost).
Vec2 orthochrone(double nu, Vec2 p);

// Null coordinates u = y + x, v = y - x.
struct UV {
    double u;
    double v;
};
UV uv_coords(Vec2 p);
Vec2 xy_from_uv(double u, double v);

// Pseudopolar coordinates. Four branches:
//   Plus  (-x^2+y^2 >= 0): x = +-rho sinh nu, y = +-rho cosh nu,
//   Minus (-x^2+y^2 <= 0): x = +-rho cosh nu, y = +-rho sinh nu,
// with Pos/Neg the sign of the dominant coordinate (y for Plus, x for Minus).
enum class PolarBranch { Plus, Minus };
enum class PolarSign { Pos, Neg };

struct PseudopolarPoint {
    double rho = 0.0;
    double nu = 0.0;
    PolarBranch branch = PolarBranch::Plus;
    PolarSign sign = PolarSign::Pos;
    // Set for light-cone inputs, where rho = 0 and nu is meaningless.
    bool nu_indeterminate = false;
};

PseudopolarPoint to_pseudopolar(Vec2 p, double tol_light = 1e-10);
Vec2 from_pseudopolar(const PseudopolarPoint& q);

// Sampled unit-speed curve: strictly increasing arc length, positions, the
// causal sign, and optionally the curvature along the curve.
struct CurveSamples {
    std::vector<double> s;
    std::vector<Vec2> points;
    CausalSign epsilon = CausalSign::Spacelike;
    std::optional<std::vector<double>> kappa;

    std::size_t size() const { return s.size(); }
    double u(std::size_t i) const { return points[i].y + points[i].x; }
    double v(std::size_t i) const { return points[i].y - points[i].x; }
};

// Throws std::invalid_argument unless s is strictly increasing, sizes agree
// and the sample count is at least `min_count`.
void validate_samples(const CurveSamples& cs, std::size_t min_count = 5);

// Finite-difference weights on five arbitrary nodes (Fornberg) for the
// m-th derivative at x0; m <= 2.
std::array<double, 5> fd_weights_5(const double* nodes, double x0, int m);

// First derivatives of the sample positions, O(h^4) five-point stencils
// (one-sided at the ends).
std::vector<Vec2> sample_velocity(const CurveSamples& cs);

// Curvature eps*(xdd*yd - xd*ydd) estimated by five-point stencils.
std::vector<double> numeric_curvature(const CurveSamples& cs);

// Convenience transforms; each returns a new sample set.
CurveSamples orthochrone(double nu, const CurveSamples& cs);
CurveSamples swap_xy(const CurveSamples& cs);     // (x,y) -> (y,x), flips epsilon
CurveSamples negate_u(const CurveSamples& cs);    // (u,v) -> (-u,v), flips epsilon

}  // namespace l2curves
