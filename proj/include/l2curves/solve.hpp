#pragma once

// Reconstruction pipelines for curves with curvature prescribed through a
// geometric momentum: kappa = kappa(rho) via the angular momentum K(rho)
// (rho^2 nu' = K, arc length from rho dr / sqrt(K^2 +- eps rho^2)), and
// kappa = kappa(v) via the linear momentum K(v) (u' = K, ds = eps K dv).

#include <functional>
#include <optional>
#include <vector>

#include "l2curves/core.hpp"
#include "l2curves/quadrature.hpp"

namespace l2curves {

struct MomentumSpec {
    enum class Var { Rho, V };
    Var variable = Var::Rho;
    std::function<double(double)> momentum;  // K as a function of rho or v
    double c = 0.0;                          // integration constant baked into K
    std::function<double(double)> kappa;     // optional prescribed curvature law
};

// Validity window of a solution: a maximal subinterval where the radicand
// (Rho case) stays positive, or K stays finite and of one sign (V case).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_singular = false;
    bool hi_singular = false;
    // A singular endpoint where the radicand has a double zero (or K a pole)
    // cannot be reached at finite arc length / with a convergent integral.
    bool lo_double = false;
    bool hi_double = false;
};

struct SamplingPolicy {
    int count = 512;            // output samples, uniform in arc length
    double s_span = 12.0;       // arc-length budget around the reference point
    double position_cap = 1500.0;  // stop extending once coordinates grow past this
};

struct ScanPolicy {
    double lo = 0.0;   // Rho default: (0, 50]; V default: [-50, 50]
    double hi = 50.0;
    int probes = 4096;
    double refine_tol = 1e-12;
};

struct SolveRequest {
    MomentumSpec momentum;
    CausalSign epsilon = CausalSign::Spacelike;
    PolarBranch branch = PolarBranch::Plus;  // Rho case composition
    PolarSign sign = PolarSign::Pos;
    std::optional<Interval> domain_hint;     // sub-window in rho or v
    SamplingPolicy sampling;
    std::optional<double> reference;         // anchor: s = nu = u = 0 here
    double tol_int = 1e-10;
    std::function<void(const std::string&)> progress;  // optional, may be called concurrently
};

// Radicand K(rho)^2 + eps rho^2 (Plus composition) or K(rho)^2 - eps rho^2
// (Minus composition), evaluated so that the K^2 - rho^2 form does not lose
// the simple zeros to cancellation.
double radicand(const SolveRequest& req, double rho);

// Maximal validity windows inside the scan window. Endpoints where the
// radicand vanishes (or K degenerates) are flagged singular.
std::vector<Interval> domain_scan(const SolveRequest& req, const ScanPolicy& scan = {});
std::vector<Interval> domain_scan(const SolveRequest& req, double lo, double hi);

// Plain sampled function, nothing assumed about monotonicity.
struct Table {
    std::vector<double> x;
    std::vector<double> y;
};

// Arc length s over an interval from domain_scan as a monotone table whose
// rows can be refined on the underlying integral. Simple-zero endpoints are
// folded in exactly via the rho = rho0 +- t^2 substitution; endpoints that
// sit at infinite arc length (double zeros, poles of K) are approached
// geometrically until the arc-length budget runs out. `aux` accumulates the
// companion quadrature: nu in the Rho case, u in the V case.
struct ArcTable {
    std::vector<double> x;    // rho, or v in the V case
    std::vector<double> s;
    std::vector<double> aux;  // nu (Rho) or u (V), anchored 0 at the reference
    Interval interval;        // working interval after hint clipping
    double reference = 0.0;

    MonotoneTable s_of_x() const;
};

ArcTable arc_from_rho(const SolveRequest& req, const Interval& interval);

// Inversion of a monotone table to target_tol, refining against the exact
// evaluator when the table carries one.
MonotoneTable invert_monotone(const MonotoneTable& table, double target_tol = 1e-10);

// Orthochrone angle as a function of arc length along an arc table, anchored
// to 0 at the reference point. (nu need not be monotone: K may change sign.)
Table nu_from_s(const SolveRequest& req, const ArcTable& arc);

// Full pipelines. Output samples are unit-speed and carry kappa from the
// prescribed law (or from differentiating K when no law was given).
CurveSamples solve_kappa_rho(const SolveRequest& req);
CurveSamples solve_kappa_v(const SolveRequest& req);

// Constant-pseudodistance solutions rho == rho0 of rho kappa(rho) = 1,
// emitted separately because the integral pipeline requires rho non-constant.
std::vector<double> constant_pseudocircle_radii(const std::function<double(double)>& kappa,
                                                double lo = 1e-3, double hi = 50.0,
                                                int probes = 4096);
CurveSamples constant_pseudocircle(double rho0, CausalSign epsilon,
                                   const SamplingPolicy& sampling = {});

// Max |K'(x) - x kappa(x)| (Rho) or |d(-eps/K)/dx - kappa(x)| (V) sampled
// over [lo, hi]; verifies that K is an anti-derivative consistent with kappa.
double momentum_consistency(const MomentumSpec& spec, CausalSign epsilon, double lo,
                            double hi, int n = 64);

}  // namespace l2curves
