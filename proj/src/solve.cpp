#include "l2curves/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace l2curves {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double guarded(const std::function<double(double)>& f, double x) {
    try {
        const double y = f(x);
        return std::isfinite(y) ? y : kNaN;
    } catch (...) {
        return kNaN;
    }
}

// Whether the radicand takes the cancellation-free K^2 + rho^2 form for this
// (composition, causal sign) pair; otherwise it is (K - rho)(K + rho).
bool plus_form(CausalSign eps, PolarBranch branch) {
    return (branch == PolarBranch::Plus) == (eps == CausalSign::Spacelike);
}

struct RhoIntegrands {
    std::function<double(double)> K;
    bool plus;

    double rad(double rho) const {
        const double k = K(rho);
        return plus ? k * k + rho * rho : (k - rho) * (k + rho);
    }
    // ds/drho
    double F(double rho) const {
        const double r = rad(rho);
        return rho / std::sqrt(r);
    }
    // dnu/drho = (dnu/ds)(ds/drho) = K/rho^2 * F
    double G(double rho) const {
        const double r = rad(rho);
        return K(rho) / (rho * std::sqrt(r));
    }
};

struct VIntegrands {
    std::function<double(double)> K;
    double eps;

    double F(double v) const { return eps * K(v); }        // ds/dv
    double G(double v) const { return eps * K(v) * K(v); } // du/dv
};

enum class EndpointKind { Regular, SqrtSingular, Unreachable };

// Growth exponent p of f ~ d^-p toward the endpoint decides how the ladder
// treats it: p ~ 1/2 integrates under rho = e + dir t^2, p >= ~3/4 can only
// be approached.
EndpointKind classify_endpoint(const std::function<double(double)>& f, double e,
                               double dir, double w) {
    double prev = kNaN;
    double p_acc = 0.0;
    int p_n = 0;
    for (int k = 6; k <= 13; ++k) {
        const double d = w * std::ldexp(1.0, -k);
        const double val = guarded(f, e + dir * d);
        if (!std::isfinite(val)) return EndpointKind::Unreachable;
        const double m = std::fabs(val);
        if (std::isfinite(prev) && prev > 0.0 && m > 0.0) {
            p_acc += std::log2(m / prev);  // d halves each step: slope = p
            ++p_n;
        }
        prev = m;
    }
    if (p_n == 0) return EndpointKind::Regular;
    const double p = p_acc / p_n;
    if (p > 0.75) return EndpointKind::Unreachable;
    if (p > 0.25) return EndpointKind::SqrtSingular;
    return EndpointKind::Regular;
}

// One ladder segment [a, b] (sorted); when `subst_end` is set the integrand
// is folded through x = e +- t^2 at that endpoint before quadrature.
struct Segment {
    double a, b;
    int subst_end = 0;  // -1: substitute at a, +1: substitute at b
};

struct Endpoints {
    Interval work;
    EndpointKind lo_kind = EndpointKind::Regular;
    EndpointKind hi_kind = EndpointKind::Regular;

    int subst_flag(double a, double b) const {
        if (lo_kind == EndpointKind::SqrtSingular && a == work.lo) return -1;
        if (hi_kind == EndpointKind::SqrtSingular && b == work.hi) return +1;
        return 0;
    }
};

double integrate_segment(const std::function<double(double)>& f, const Segment& seg,
                         double tol) {
    if (seg.subst_end == 0) return integrate_checked(f, seg.a, seg.b, tol);
    const double w = seg.b - seg.a;
    if (seg.subst_end < 0) {
        auto g = [&](double t) { return 2.0 * t * f(seg.a + t * t); };
        return integrate_checked(g, 0.0, std::sqrt(w), tol);
    }
    auto g = [&](double t) { return 2.0 * t * f(seg.b - t * t); };
    return integrate_checked(g, 0.0, std::sqrt(w), tol);
}

struct LadderPoint {
    double x;
    int subst_end;  // substitution flag for the segment between this row and ref side
};

// March breakpoints from the reference outward to one endpoint, geometric
// into unreachable ends. Substitution flags come from `ends`.
std::vector<Segment> build_segments(double ref, double end, EndpointKind kind,
                                    const Endpoints& ends, int n_base) {
    std::vector<Segment> segs;
    const double width = std::fabs(end - ref);
    if (width <= 0.0) return segs;
    const double dir = end > ref ? 1.0 : -1.0;
    double prev = ref;
    auto push = [&](double x) {
        Segment seg{std::min(prev, x), std::max(prev, x), 0};
        seg.subst_end = ends.subst_flag(seg.a, seg.b);
        segs.push_back(seg);
        prev = x;
    };
    for (int i = 1; i < n_base; ++i) push(ref + dir * width * i / n_base);
    const double w = std::fabs(end - prev);
    if (kind == EndpointKind::Unreachable) {
        // Geometric approach; never reaches `end`.
        for (int k = 1; k <= 60; ++k) {
            const double d = w * std::ldexp(1.0, -k);
            if (d < 1e-14 * (1.0 + std::fabs(end))) break;
            push(end - dir * d);
        }
    } else {
        push(end);
    }
    return segs;  // ordered outward from ref; segment bounds are sorted
}

struct MarchLimits {
    double s_budget;
    double pos_cap;
    std::function<double(double, double)> position_size;  // (x, aux) -> coordinate scale
};

// Accumulate (x, s, aux) rows outward; returns rows ordered away from ref.
struct MarchRows {
    std::vector<double> x, s, aux;
};

MarchRows march(const RhoIntegrands* rho_i, const VIntegrands* v_i, double ref,
                double end, EndpointKind kind, const Endpoints& ends, double tol,
                const MarchLimits& lim, int n_base) {
    auto segs = build_segments(ref, end, kind, ends, n_base);
    MarchRows rows;
    double s = 0.0, aux = 0.0;
    const double dir = end > ref ? 1.0 : -1.0;
    for (const auto& seg : segs) {
        auto F = [&](double x) { return rho_i ? rho_i->F(x) : v_i->F(x); };
        auto G = [&](double x) { return rho_i ? rho_i->G(x) : v_i->G(x); };
        double ds = integrate_segment(F, seg, tol);
        double daux = integrate_segment(G, seg, tol);
        if (dir < 0) {
            ds = -ds;
            daux = -daux;
        }
        s += ds;
        aux += daux;
        const double x_out = dir > 0 ? seg.b : seg.a;
        rows.x.push_back(x_out);
        rows.s.push_back(s);
        rows.aux.push_back(aux);
        if (std::fabs(s) >= lim.s_budget) break;
        if (lim.position_size && lim.position_size(x_out, aux) >= lim.pos_cap) break;
    }
    return rows;
}

Interval clip_to_hint(const Interval& interval, const std::optional<Interval>& hint) {
    if (!hint) return interval;
    Interval w = interval;
    if (hint->lo > w.lo) {
        if (hint->lo >= w.hi) throw NumericError("domain hint outside interval", hint->lo);
        w.lo = hint->lo;
        w.lo_singular = false;
        w.lo_double = false;
    }
    if (hint->hi < w.hi) {
        if (hint->hi <= w.lo) throw NumericError("domain hint outside interval", hint->hi);
        w.hi = hint->hi;
        w.hi_singular = false;
        w.hi_double = false;
    }
    return w;
}

// The anchor may sit at a reachable endpoint (that is how the closed-form
// representatives fix their integration constants), but not past it.
double pick_reference(const SolveRequest& req, const Interval& w, EndpointKind lo_kind,
                      EndpointKind hi_kind) {
    if (req.reference) {
        const double r = *req.reference;
        if (r < w.lo || r > w.hi)
            throw std::invalid_argument("reference point outside the working interval");
        if (r == w.lo && lo_kind == EndpointKind::Unreachable)
            throw std::invalid_argument("reference at an unreachable endpoint");
        if (r == w.hi && hi_kind == EndpointKind::Unreachable)
            throw std::invalid_argument("reference at an unreachable endpoint");
        return r;
    }
    return 0.5 * (w.lo + w.hi);
}

void report(const SolveRequest& req, const std::string& msg) {
    if (req.progress) req.progress(msg);
}

// Shared tail: given an ArcTable plus local evaluators, emit uniform-in-s
// samples with positions supplied by `assemble`.
struct LocalEval {
    // integral of F (resp. G) from row i to x, honoring substitution zones
    std::function<double(std::size_t, double)> s_from_row;
    std::function<double(std::size_t, double)> aux_from_row;
};

CurveSamples emit_samples(const SolveRequest& req, const ArcTable& arc,
                          const LocalEval& ev,
                          const std::function<Vec2(double, double)>& assemble,
                          const std::function<double(double)>& kappa_of_x) {
    const int count = std::max(req.sampling.count, 16);
    const double s_lo = arc.s.front(), s_hi = arc.s.back();
    CurveSamples out;
    out.epsilon = req.epsilon;
    out.s.resize(count);
    out.points.resize(count);
    std::vector<double> kap(count);
    for (int j = 0; j < count; ++j) {
        const double sj = s_lo + (s_hi - s_lo) * j / (count - 1);
        // Bracket sj between rows, refine x on the underlying integral.
        auto it = std::lower_bound(arc.s.begin(), arc.s.end(), sj);
        std::size_t i = it == arc.s.begin() ? 0 : std::size_t(it - arc.s.begin()) - 1;
        i = std::min(i, arc.s.size() - 2);
        double xj;
        if (sj == arc.s[i])
            xj = arc.x[i];
        else if (sj == arc.s[i + 1])
            xj = arc.x[i + 1];
        else {
            auto g = [&](double x) { return ev.s_from_row(i, x) - (sj - arc.s[i]); };
            xj = find_root(g, arc.x[i], arc.x[i + 1], 1e-13);
        }
        const double auxj = arc.aux[i] + ev.aux_from_row(i, xj);
        out.s[j] = sj;
        out.points[j] = assemble(xj, auxj);
        kap[j] = kappa_of_x(xj);
    }
    out.kappa = std::move(kap);
    return out;
}

double fd_derivative(const std::function<double(double)>& f, double x) {
    const double h = 1e-3 * (1.0 + std::fabs(x));
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

double radicand(const SolveRequest& req, double rho) {
    const double k = req.momentum.momentum(rho);
    if (plus_form(req.epsilon, req.branch)) return k * k + rho * rho;
    return (k - rho) * (k + rho);
}

std::vector<Interval> domain_scan(const SolveRequest& req, const ScanPolicy& scan) {
    const bool rho_case = req.momentum.variable == MomentumSpec::Var::Rho;
    const double lo = scan.lo, hi = scan.hi;
    if (!(hi > lo)) throw std::invalid_argument("domain_scan: bad window");
    const int n = std::max(scan.probes, 16);

    // Validity predicate value at probe points: Rho -> radicand, V -> K.
    auto value = [&](double x) {
        if (rho_case) return guarded([&](double r) { return radicand(req, r); }, x);
        return guarded(req.momentum.momentum, x);
    };
    std::vector<double> xs(n + 1), vals(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = lo + (hi - lo) * i / n;
        vals[i] = value(xs[i]);
    }
    auto valid = [&](double v) {
        if (!std::isfinite(v)) return false;
        return rho_case ? v > 0.0 : v != 0.0;
    };

    // Refine a boundary between a valid and an invalid probe.
    auto refine = [&](double a, double b, double va, double vb) {
        if (std::isfinite(va) && std::isfinite(vb) && va * vb < 0.0) {
            auto f = [&](double x) {
                const double v = value(x);
                return std::isfinite(v) ? v : (va > 0 ? -1.0 : 1.0);
            };
            return find_root(f, a, b, scan.refine_tol);
        }
        // Sign information is unusable (NaN side); bisect on validity.
        bool va_valid = valid(va);
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (a + b);
            if (valid(value(m)) == va_valid)
                a = m;
            else
                b = m;
            if (b - a < scan.refine_tol * (1.0 + std::fabs(a))) break;
        }
        return 0.5 * (a + b);
    };

    std::vector<Interval> out;
    int i = 0;
    while (i <= n) {
        if (!valid(vals[i])) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 <= n && valid(vals[j + 1]) &&
               (rho_case || vals[j + 1] * vals[j] > 0.0))
            ++j;
        Interval iv;
        if (i == 0) {
            iv.lo = lo;
            const double v_edge = value(lo);
            iv.lo_singular = !std::isfinite(v_edge) || (rho_case && v_edge <= 0.0) ||
                             (!rho_case && v_edge == 0.0);
        } else {
            iv.lo = refine(xs[i - 1], xs[i], vals[i - 1], vals[i]);
            iv.lo_singular = true;
        }
        if (j == n) {
            iv.hi = hi;
            iv.hi_singular = false;
        } else {
            iv.hi = refine(xs[j], xs[j + 1], vals[j], vals[j + 1]);
            iv.hi_singular = true;
        }
        if (iv.hi > iv.lo) out.push_back(iv);
        i = j + 1;
    }

    // Interior double zeros of the radicand (equilibria): the probe sees a
    // positive dip touching zero instead of a sign change. Split there.
    if (rho_case) {
        std::vector<Interval> split;
        for (const auto& iv : out) {
            std::vector<double> cuts;
            const int m = 512;
            double prev2 = kNaN, prev1 = kNaN;
            for (int k = 0; k <= m; ++k) {
                const double x = iv.lo + (iv.hi - iv.lo) * k / m;
                const double v = value(x);
                if (std::isfinite(prev2) && std::isfinite(prev1) && std::isfinite(v) &&
                    prev1 < prev2 && prev1 < v) {
                    const double scale = 1.0 + std::max(prev2, v);
                    if (prev1 < 0.1 * scale) {
                        const double xmin = minimize_golden(
                            [&](double t) { return value(t); }, x - 2 * (iv.hi - iv.lo) / m,
                            x, 1e-13);
                        if (value(xmin) <= 1e-11 * scale) cuts.push_back(xmin);
                    }
                }
                prev2 = prev1;
                prev1 = v;
            }
            if (cuts.empty()) {
                split.push_back(iv);
                continue;
            }
            double start = iv.lo;
            bool start_sing = iv.lo_singular, start_dbl = iv.lo_double;
            for (double c : cuts) {
                Interval part{start, c, start_sing, true, start_dbl, true};
                split.push_back(part);
                start = c;
                start_sing = true;
                start_dbl = true;
            }
            split.push_back({start, iv.hi, true, iv.hi_singular, true, iv.hi_double});
        }
        out = std::move(split);
    } else {
        // V case: flag pole endpoints as unreachable (arc length diverges).
        for (auto& iv : out) {
            auto absK = [&](double x) { return std::fabs(value(x)); };
            const double w = 0.25 * (iv.hi - iv.lo);
            if (iv.lo_singular &&
                classify_endpoint(absK, iv.lo, +1.0, w) == EndpointKind::Unreachable)
                iv.lo_double = true;
            if (iv.hi_singular &&
                classify_endpoint(absK, iv.hi, -1.0, w) == EndpointKind::Unreachable)
                iv.hi_double = true;
        }
    }
    return out;
}

std::vector<Interval> domain_scan(const SolveRequest& req, double lo, double hi) {
    ScanPolicy p;
    p.lo = lo;
    p.hi = hi;
    return domain_scan(req, p);
}

namespace {

ScanPolicy default_scan(const SolveRequest& req) {
    ScanPolicy p;
    if (req.momentum.variable == MomentumSpec::Var::Rho) {
        p.lo = 0.0;
        p.hi = 50.0;
    } else {
        p.lo = -50.0;
        p.hi = 50.0;
    }
    return p;
}

Interval choose_interval(const std::vector<Interval>& ivs,
                         const std::optional<Interval>& hint,
                         const std::optional<double>& ref) {
    if (ivs.empty()) throw NumericError("no validity window in the scan range");
    if (hint) {
        const Interval* best = nullptr;
        double best_overlap = 0.0;
        for (const auto& iv : ivs) {
            const double ov = std::min(iv.hi, hint->hi) - std::max(iv.lo, hint->lo);
            if (ov > best_overlap) {
                best_overlap = ov;
                best = &iv;
            }
        }
        if (!best) throw NumericError("domain hint does not meet any validity window",
                                      hint->lo);
        return *best;
    }
    if (ref) {
        for (const auto& iv : ivs)
            if (*ref > iv.lo && *ref < iv.hi) return iv;
    }
    const Interval* widest = &ivs.front();
    for (const auto& iv : ivs)
        if (iv.hi - iv.lo > widest->hi - widest->lo) widest = &iv;
    return *widest;
}

struct RhoMachinery {
    RhoIntegrands in;
    Endpoints ends;
    double ref;
};

RhoMachinery setup_rho(const SolveRequest& req, const Interval& interval) {
    if (req.momentum.variable != MomentumSpec::Var::Rho)
        throw std::invalid_argument("solve_kappa_rho: momentum must be a function of rho");
    RhoMachinery m;
    m.in = RhoIntegrands{req.momentum.momentum, plus_form(req.epsilon, req.branch)};
    m.ends.work = clip_to_hint(interval, req.domain_hint);
    auto probe = [&](double x) {
        return std::max(std::fabs(m.in.F(x)), std::fabs(m.in.G(x)));
    };
    const double w = std::min(0.5 * (m.ends.work.hi - m.ends.work.lo), 1.0);
    m.ends.lo_kind = m.ends.work.lo_double
                         ? EndpointKind::Unreachable
                         : classify_endpoint(probe, m.ends.work.lo, +1.0, w);
    m.ends.hi_kind = m.ends.work.hi_double
                         ? EndpointKind::Unreachable
                         : classify_endpoint(probe, m.ends.work.hi, -1.0, w);
    m.ref = pick_reference(req, m.ends.work, m.ends.lo_kind, m.ends.hi_kind);
    return m;
}

// Integral of f over [a, b] within the working interval, applying the
// endpoint substitution when [a, b] touches a sqrt-singular endpoint.
double local_integral(const Endpoints& ends, const std::function<double(double)>& f,
                      double a, double b, double tol) {
    if (a == b) return 0.0;
    Segment seg{std::min(a, b), std::max(a, b), 0};
    seg.subst_end = ends.subst_flag(seg.a, seg.b);
    const double val = integrate_segment(f, seg, tol);
    return a < b ? val : -val;
}

}  // namespace

namespace {

ArcTable assemble_arc(const MarchRows& down, const MarchRows& up, double ref,
                      const Interval& work) {
    ArcTable arc;
    arc.interval = work;
    arc.reference = ref;
    for (std::size_t i = down.x.size(); i-- > 0;) {
        arc.x.push_back(down.x[i]);
        arc.s.push_back(down.s[i]);
        arc.aux.push_back(down.aux[i]);
    }
    arc.x.push_back(ref);
    arc.s.push_back(0.0);
    arc.aux.push_back(0.0);
    for (std::size_t i = 0; i < up.x.size(); ++i) {
        arc.x.push_back(up.x[i]);
        arc.s.push_back(up.s[i]);
        arc.aux.push_back(up.aux[i]);
    }
    if (arc.x.size() < 2) throw NumericError("empty arc table", ref);
    return arc;
}

}  // namespace

ArcTable arc_from_rho(const SolveRequest& req, const Interval& interval) {
    RhoMachinery m = setup_rho(req, interval);
    report(req, "arc_from_rho: integrating s(rho)");
    const Interval& work = m.ends.work;

    const double budget = 0.5 * std::max(req.sampling.s_span, 1e-6);
    MarchLimits lim{budget, req.sampling.position_cap,
                    [&](double rho, double) { return std::fabs(rho); }};
    const int n_base = 48;

    auto up = march(&m.in, nullptr, m.ref, work.hi, m.ends.hi_kind, m.ends, req.tol_int,
                    lim, n_base);
    auto down = march(&m.in, nullptr, m.ref, work.lo, m.ends.lo_kind, m.ends, req.tol_int,
                      lim, n_base);
    // With an effectively unlimited budget, failing to reach an endpoint
    // means its arc length diverges: a non-integrable (double-zero) end.
    if (req.sampling.s_span > 1e8) {
        if (m.ends.hi_kind == EndpointKind::Unreachable && !up.x.empty() &&
            std::fabs(up.s.back()) < budget)
            throw NumericError("endpoint not reachable: non-integrable singularity",
                               work.hi);
        if (m.ends.lo_kind == EndpointKind::Unreachable && !down.x.empty() &&
            std::fabs(down.s.back()) < budget)
            throw NumericError("endpoint not reachable: non-integrable singularity",
                               work.lo);
    }
    return assemble_arc(down, up, m.ref, work);
}

MonotoneTable ArcTable::s_of_x() const {
    MonotoneTable t;
    t.x = x;
    t.y = s;
    return t;
}

MonotoneTable invert_monotone(const MonotoneTable& table, double target_tol) {
    table.validate();
    MonotoneTable inv;
    inv.x = table.y;
    inv.y = table.x;
    if (table.eval) {
        auto fwd = std::make_shared<MonotoneTable>(table);
        const double tol = target_tol;
        inv.eval = [fwd, tol](double yy) { return fwd->invert(yy, tol); };
    }
    if (!inv.x.empty() && inv.x.front() > inv.x.back()) {
        std::reverse(inv.x.begin(), inv.x.end());
        std::reverse(inv.y.begin(), inv.y.end());
    }
    return inv;
}

Table nu_from_s(const SolveRequest& req, const ArcTable& arc) {
    if (req.momentum.variable != MomentumSpec::Var::Rho)
        throw std::invalid_argument("nu_from_s: Rho-case operation");
    for (double r : arc.x)
        if (!(r > 0.0)) throw NumericError("nu_from_s: rho must stay positive", r);
    Table t;
    t.x = arc.s;
    t.y = arc.aux;
    return t;
}

CurveSamples solve_kappa_rho(const SolveRequest& req) {
    const auto ivs = domain_scan(req, default_scan(req));
    const Interval iv = choose_interval(ivs, req.domain_hint, req.reference);
    RhoMachinery m = setup_rho(req, iv);
    ArcTable arc = arc_from_rho(req, iv);
    report(req, "solve_kappa_rho: sampling");

    LocalEval ev;
    ev.s_from_row = [&, arc](std::size_t i, double x) {
        return local_integral(m.ends, [&](double r) { return m.in.F(r); }, arc.x[i], x,
                              req.tol_int);
    };
    ev.aux_from_row = [&, arc](std::size_t i, double x) {
        return local_integral(m.ends, [&](double r) { return m.in.G(r); }, arc.x[i], x,
                              req.tol_int);
    };
    auto assemble = [&](double rho, double nu) {
        return from_pseudopolar({rho, nu, req.branch, req.sign});
    };
    std::function<double(double)> kappa_of;
    if (req.momentum.kappa)
        kappa_of = req.momentum.kappa;
    else
        kappa_of = [&req](double rho) {
            return fd_derivative(req.momentum.momentum, rho) / rho;
        };
    return emit_samples(req, arc, ev, assemble, kappa_of);
}

CurveSamples solve_kappa_v(const SolveRequest& req) {
    if (req.momentum.variable != MomentumSpec::Var::V)
        throw std::invalid_argument("solve_kappa_v: momentum must be a function of v");
    const auto ivs = domain_scan(req, default_scan(req));
    const Interval iv0 = choose_interval(ivs, req.domain_hint, req.reference);
    const Interval work = clip_to_hint(iv0, req.domain_hint);
    const double ref = pick_reference(req, work);
    const double eps = sign_of(req.epsilon);
    VIntegrands in{req.momentum.momentum, eps};

    auto probe = [&](double x) {
        return std::max(std::fabs(in.F(x)), std::fabs(in.G(x)));
    };
    const double w = std::min(0.5 * (work.hi - work.lo), 1.0);
    const EndpointKind lo_kind =
        work.lo_double ? EndpointKind::Unreachable
                       : classify_endpoint(probe, work.lo, +1.0, w);
    const EndpointKind hi_kind =
        work.hi_double ? EndpointKind::Unreachable
                       : classify_endpoint(probe, work.hi, -1.0, w);

    report(req, "solve_kappa_v: integrating s(v), u(v)");
    const double budget = 0.5 * std::max(req.sampling.s_span, 1e-6);
    MarchLimits lim{budget, req.sampling.position_cap, [&](double v, double u) {
                        return std::max(std::fabs(v), std::fabs(u));
                    }};
    auto up = march(nullptr, &in, ref, work.hi, hi_kind, req.tol_int, lim, 48);
    auto down = march(nullptr, &in, ref, work.lo, lo_kind, req.tol_int, lim, 48);

    ArcTable arc;
    arc.interval = work;
    arc.reference = ref;
    for (std::size_t i = down.x.size(); i-- > 0;) {
        arc.x.push_back(down.x[i]);
        arc.s.push_back(down.s[i]);
        arc.aux.push_back(down.aux[i]);
    }
    arc.x.push_back(ref);
    arc.s.push_back(0.0);
    arc.aux.push_back(0.0);
    for (std::size_t i = 0; i < up.x.size(); ++i) {
        arc.x.push_back(up.x[i]);
        arc.s.push_back(up.s[i]);
        arc.aux.push_back(up.aux[i]);
    }
    if (arc.x.size() < 2) throw NumericError("empty arc table", ref);

    // ds = eps K dv may decrease in v; emit_samples needs s increasing.
    if (arc.s.front() > arc.s.back()) {
        std::reverse(arc.x.begin(), arc.x.end());
        std::reverse(arc.s.begin(), arc.s.end());
        std::reverse(arc.aux.begin(), arc.aux.end());
    }
    for (std::size_t i = 1; i < arc.s.size(); ++i)
        if (!(arc.s[i] > arc.s[i - 1]))
            throw NumericError("s(v) is not monotone: K changes sign inside the interval",
                               arc.x[i]);

    LocalEval ev;
    ev.s_from_row = [&, arc](std::size_t i, double x) {
        return integrate_checked([&](double t) { return in.F(t); }, arc.x[i], x,
                                 req.tol_int);
    };
    ev.aux_from_row = [&, arc](std::size_t i, double x) {
        return integrate_checked([&](double t) { return in.G(t); }, arc.x[i], x,
                                 req.tol_int);
    };
    auto assemble = [&](double v, double u) { return xy_from_uv(u, v); };
    std::function<double(double)> kappa_of;
    if (req.momentum.kappa)
        kappa_of = req.momentum.kappa;
    else
        kappa_of = [&req, eps](double v) {
            const double k = req.momentum.momentum(v);
            return eps * fd_derivative(req.momentum.momentum, v) / (k * k);
        };
    return emit_samples(req, arc, ev, assemble, kappa_of);
}

std::vector<double> constant_pseudocircle_radii(const std::function<double(double)>& kappa,
                                                double lo, double hi, int probes) {
    auto f = [&](double rho) { return guarded([&](double r) { return r * kappa(r) - 1.0; }, rho); };
    std::vector<double> roots;
    double prev = f(lo);
    double xprev = lo;
    for (int i = 1; i <= probes; ++i) {
        const double x = lo + (hi - lo) * i / probes;
        const double v = f(x);
        if (std::isfinite(prev) && std::isfinite(v) && prev * v < 0.0)
            roots.push_back(find_root(f, xprev, x, 1e-13));
        xprev = x;
        prev = v;
    }
    return roots;
}

CurveSamples constant_pseudocircle(double rho0, CausalSign epsilon,
                                   const SamplingPolicy& sampling) {
    if (!(rho0 > 0.0)) throw std::invalid_argument("constant_pseudocircle: rho0 must be > 0");
    const int count = std::max(sampling.count, 16);
    const double half = 0.5 * sampling.s_span;
    CurveSamples out;
    out.epsilon = epsilon;
    out.s.resize(count);
    out.points.resize(count);
    std::vector<double> kap(count, 1.0 / rho0);
    for (int j = 0; j < count; ++j) {
        const double s = -half + sampling.s_span * j / (count - 1);
        const double a = s / rho0;
        if (epsilon == CausalSign::Spacelike)
            out.points[j] = {rho0 * std::cosh(a), rho0 * std::sinh(a)};
        else
            out.points[j] = {rho0 * std::sinh(a), rho0 * std::cosh(a)};
        out.s[j] = s;
    }
    out.kappa = std::move(kap);
    return out;
}

double momentum_consistency(const MomentumSpec& spec, CausalSign epsilon, double lo,
                            double hi, int n) {
    if (!spec.kappa) throw std::invalid_argument("momentum_consistency: no kappa law given");
    double worst = 0.0;
    const double eps = sign_of(epsilon);
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        double resid;
        if (spec.variable == MomentumSpec::Var::Rho) {
            resid = fd_derivative(spec.momentum, x) - x * spec.kappa(x);
        } else {
            auto inv = [&](double v) { return -eps / spec.momentum(v); };
            resid = fd_derivative(inv, x) - spec.kappa(x);
        }
        worst = std::max(worst, std::fabs(resid));
    }
    return worst;
}

}  // namespace l2curves
