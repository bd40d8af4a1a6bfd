#include "l2curves/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace l2curves {

double metric(Vec2 a, Vec2 b) { return -a.x * b.x + a.y * b.y; }

CausalCharacter causal_character(Vec2 w, double tol_light) {
    const double n2 = w.x * w.x + w.y * w.y;
    if (n2 == 0.0) throw std::invalid_argument("causal_character: zero vector");
    const double g = metric(w, w);
    const double tol = tol_light * (1.0 + n2);
    if (g > tol) return CausalCharacter::Spacelike;
    if (g < -tol) return CausalCharacter::Timelike;
    return CausalCharacter::Lightlike;
}

double pseudodistance_origin(Vec2 p) { return std::sqrt(std::fabs(metric(p, p))); }

double pseudodistance(Vec2 p, Vec2 q) { return pseudodistance_origin(q - p); }

FrenetFrame frenet_frame(Vec2 tangent, CausalSign epsilon, double tol) {
    const double g = metric(tangent, tangent);
    if (std::fabs(g - sign_of(epsilon)) > tol)
        throw std::invalid_argument("frenet_frame: tangent is not unit for the given causal sign");
    return {tangent, Vec2{tangent.y, tangent.x}, epsilon};
}

double signed_curvature_from_jet(double xd, double yd, double xdd, double ydd,
                                 CausalSign epsilon, double tol) {
    const double g = metric({xd, yd}, {xd, yd});
    if (std::fabs(g - sign_of(epsilon)) > tol)
        throw std::invalid_argument("signed_curvature_from_jet: jet is not unit-speed");
    return sign_of(epsilon) * (xdd * yd - xd * ydd);
}

Vec2 orthochrone(double nu, Vec2 p) {
    const double ch = std::cosh(nu), sh = std::sinh(nu);
    return {ch * p.x + sh * p.y, sh * p.x + ch * p.y};
}

UV uv_coords(Vec2 p) { return {p.y + p.x, p.y - p.x}; }

Vec2 xy_from_uv(double u, double v) { return {(u - v) / 2.0, (u + v) / 2.0}; }

PseudopolarPoint to_pseudopolar(Vec2 p, double tol_light) {
    const double d = metric(p, p);
    const double n2 = p.x * p.x + p.y * p.y;
    PseudopolarPoint q;
    if (std::fabs(d) <= tol_light * (1.0 + n2)) {
        // On the light cone rho vanishes and no branch determines nu.
        q.rho = 0.0;
        q.nu = 0.0;
        q.nu_indeterminate = true;
        q.branch = d >= 0.0 ? PolarBranch::Plus : PolarBranch::Minus;
        q.sign = (p.x + p.y >= 0.0) ? PolarSign::Pos : PolarSign::Neg;
        return q;
    }
    q.rho = std::sqrt(std::fabs(d));
    if (d > 0.0) {
        q.branch = PolarBranch::Plus;
        q.sign = p.y >= 0.0 ? PolarSign::Pos : PolarSign::Neg;
        const double sgn = q.sign == PolarSign::Pos ? 1.0 : -1.0;
        q.nu = std::asinh(sgn * p.x / q.rho);
    } else {
        q.branch = PolarBranch::Minus;
        q.sign = p.x >= 0.0 ? PolarSign::Pos : PolarSign::Neg;
        const double sgn = q.sign == PolarSign::Pos ? 1.0 : -1.0;
        q.nu = std::asinh(sgn * p.y / q.rho);
    }
    return q;
}

Vec2 from_pseudopolar(const PseudopolarPoint& q) {
    if (q.rho < 0.0) throw std::invalid_argument("from_pseudopolar: rho < 0");
    const double sgn = q.sign == PolarSign::Pos ? 1.0 : -1.0;
    const double sh = std::sinh(q.nu), ch = std::cosh(q.nu);
    if (q.branch == PolarBranch::Plus) return {sgn * q.rho * sh, sgn * q.rho * ch};
    return {sgn * q.rho * ch, sgn * q.rho * sh};
}

void validate_samples(const CurveSamples& cs, std::size_t min_count) {
    if (cs.s.size() != cs.points.size())
        throw std::invalid_argument("samples: s/points size mismatch");
    if (cs.kappa && cs.kappa->size() != cs.s.size())
        throw std::invalid_argument("samples: kappa size mismatch");
    if (cs.s.size() < min_count)
        throw std::invalid_argument("samples: need at least " + std::to_string(min_count) +
                                    " samples");
    for (std::size_t i = 1; i < cs.s.size(); ++i)
        if (!(cs.s[i] > cs.s[i - 1]))
            throw std::invalid_argument("samples: s must be strictly increasing");
}

std::array<double, 5> fd_weights_5(const double* nodes, double x0, int m) {
    // Fornberg's recursion, specialized to 5 nodes and derivative order m <= 2.
    constexpr int n = 5;
    double c[n][3] = {};
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::array<double, 5> w{};
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

namespace {

// Index of the first node of the 5-point window centered as much as possible
// around sample i.
std::size_t window_start(std::size_t i, std::size_t n) {
    if (i < 2) return 0;
    if (i + 2 >= n) return n - 5;
    return i - 2;
}

}  // namespace

std::vector<Vec2> sample_velocity(const CurveSamples& cs) {
    validate_samples(cs);
    const std::size_t n = cs.size();
    std::vector<Vec2> vel(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = window_start(i, n);
        const auto w = fd_weights_5(cs.s.data() + j0, cs.s[i], 1);
        Vec2 d{0, 0};
        for (int k = 0; k < 5; ++k) d = d + w[k] * cs.points[j0 + k];
        vel[i] = d;
    }
    return vel;
}

std::vector<double> numeric_curvature(const CurveSamples& cs) {
    validate_samples(cs);
    const std::size_t n = cs.size();
    const double eps = sign_of(cs.epsilon);
    std::vector<double> kap(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = window_start(i, n);
        const auto w1 = fd_weights_5(cs.s.data() + j0, cs.s[i], 1);
        const auto w2 = fd_weights_5(cs.s.data() + j0, cs.s[i], 2);
        Vec2 d1{0, 0}, d2{0, 0};
        for (int k = 0; k < 5; ++k) {
            d1 = d1 + w1[k] * cs.points[j0 + k];
            d2 = d2 + w2[k] * cs.points[j0 + k];
        }
        kap[i] = eps * (d2.x * d1.y - d1.x * d2.y);
    }
    return kap;
}

CurveSamples orthochrone(double nu, const CurveSamples& cs) {
    CurveSamples out = cs;
    for (auto& p : out.points) p = orthochrone(nu, p);
    return out;
}

CurveSamples swap_xy(const CurveSamples& cs) {
    CurveSamples out = cs;
    for (auto& p : out.points) p = {p.y, p.x};
    out.epsilon = flip(cs.epsilon);
    return out;
}

CurveSamples negate_u(const CurveSamples& cs) {
    CurveSamples out = cs;
    // u = y + x -> -u keeps v = y - x, i.e. (x,y) -> (-y,-x).
    for (auto& p : out.points) p = {-p.y, -p.x};
    out.epsilon = flip(cs.epsilon);
    return out;
}

}  // namespace l2curves
