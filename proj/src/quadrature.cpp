#include "l2curves/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace l2curves {

namespace {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double gauss = kWg[3] * f0;
    double kron = kWgk[7] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fs = f(mid - dx) + f(mid + dx);
        kron += kWgk[i] * fs;
        if (i % 2 == 1) gauss += kWg[i / 2] * fs;
    }
    gauss *= half;
    kron *= half;
    // |K - G| tracks the Gauss error; the Kronrod value is much better, so
    // the sharpened (200 d)^1.5 estimate applies once d is small.
    const double d = std::fabs(kron - gauss);
    double err = std::min(d, std::pow(200.0 * d, 1.5));
    if (!std::isfinite(kron)) err = std::numeric_limits<double>::infinity();
    return {a, b, kron, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_panels) {
    if (a == b) return {0.0, 0.0, true, a};
    const double orient = a < b ? 1.0 : -1.0;
    if (orient < 0) std::swap(a, b);

    std::priority_queue<Panel> heap;
    heap.push(gk15(f, a, b));
    double total_err = heap.top().error;
    double total_val = heap.top().value;
    int panels = 1;
    while (total_err > abs_tol && panels < max_panels) {
        Panel worst = heap.top();
        heap.pop();
        if (!(worst.b > worst.a) ||
            (worst.b - worst.a) < 1e-15 * (1.0 + std::fabs(worst.a))) {
            // Cannot refine further; put it back and stop.
            heap.push(worst);
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total_val += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    QuadResult res;
    res.value = orient * total_val;
    res.error = total_err;
    res.converged = std::isfinite(total_val) && total_err <= abs_tol;
    res.worst_x = heap.empty() ? a : 0.5 * (heap.top().a + heap.top().b);
    return res;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_panels) {
    QuadResult r = integrate(f, a, b, abs_tol, max_panels);
    if (!r.converged)
        throw NumericError("quadrature did not converge (error estimate " +
                               std::to_string(r.error) + ")",
                           r.worst_x);
    return r.value;
}

double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("find_root: endpoints do not bracket");
    // Illinois variant of regula falsi with a periodic bisection safeguard.
    int side = 0;
    double x = a;
    for (int it = 0; it < max_iter; ++it) {
        if (std::fabs(b - a) <= xtol * (1.0 + std::fabs(a) + std::fabs(b))) break;
        const double denom = fb - fa;
        if (denom != 0.0 && it % 8 != 7)
            x = (a * fb - b * fa) / denom;
        else
            x = 0.5 * (a + b);
        if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx * fa < 0.0) {
            b = x;
            fb = fx;
            if (side == 1) fa *= 0.5;
            side = 1;
        } else {
            a = x;
            fa = fx;
            if (side == -1) fb *= 0.5;
            side = -1;
        }
    }
    return std::fabs(fa) < std::fabs(fb) ? a : b;
}

double minimize_golden(const std::function<double(double)>& f, double a, double b,
                       double xtol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (std::fabs(b - a) > xtol * (1.0 + std::fabs(a) + std::fabs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       std::vector<double> breakpoints, double x_ref,
                                       double abs_tol)
    : f_(std::move(f)), tol_(abs_tol) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("CumulativeIntegral: need at least 2 breakpoints");
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    rows_.resize(breakpoints.size());
    for (std::size_t i = 0; i < breakpoints.size(); ++i) rows_[i].x = breakpoints[i];
    // Accumulate segment integrals, then shift so F(x_ref) = 0.
    rows_[0].value = 0.0;
    for (std::size_t i = 1; i < rows_.size(); ++i)
        rows_[i].value =
            rows_[i - 1].value + integrate_checked(f_, rows_[i - 1].x, rows_[i].x, tol_);
    const double ref_val = (*this)(x_ref);
    for (auto& r : rows_) r.value -= ref_val;
    double span = 0.0;
    for (std::size_t i = 1; i < rows_.size(); ++i) span += rows_[i].value - rows_[i - 1].value;
    increasing_ = span >= 0.0;
}

double CumulativeIntegral::operator()(double x) const {
    if (rows_.empty()) throw std::logic_error("CumulativeIntegral: empty");
    auto it = std::lower_bound(rows_.begin(), rows_.end(), x,
                               [](const Row& r, double v) { return r.x < v; });
    std::size_t i = it == rows_.end() ? rows_.size() - 1 : std::size_t(it - rows_.begin());
    if (i > 0 && (i == rows_.size() || std::fabs(rows_[i - 1].x - x) < std::fabs(rows_[i].x - x)))
        --i;
    return rows_[i].value + integrate_checked(f_, rows_[i].x, x, tol_);
}

double CumulativeIntegral::value_min() const {
    return std::min(rows_.front().value, rows_.back().value);
}

double CumulativeIntegral::value_max() const {
    return std::max(rows_.front().value, rows_.back().value);
}

double CumulativeIntegral::invert(double y, double xtol) const {
    const double lo = rows_.front().value, hi = rows_.back().value;
    const double ymin = std::min(lo, hi), ymax = std::max(lo, hi);
    if (y < ymin - 1e-12 || y > ymax + 1e-12)
        throw std::invalid_argument("CumulativeIntegral::invert: target out of range");
    y = std::clamp(y, ymin, ymax);
    // Locate the bracketing rows first, then refine on the integral.
    std::size_t i = 0;
    for (std::size_t k = 1; k < rows_.size(); ++k) {
        const double a = rows_[k - 1].value, b = rows_[k].value;
        if ((y >= std::min(a, b) && y <= std::max(a, b))) {
            i = k - 1;
            break;
        }
        if (k == rows_.size() - 1) i = k - 1;
    }
    const double xa = rows_[i].x, xb = rows_[i + 1].x;
    const double base = rows_[i].value;
    auto g = [&](double x) { return base + integrate_checked(f_, xa, x, tol_) - y; };
    const double ga = rows_[i].value - y, gb = rows_[i + 1].value - y;
    if (ga == 0.0) return xa;
    if (gb == 0.0) return xb;
    return find_root(g, xa, xb, xtol);
}

bool MonotoneTable::increasing() const {
    if (y.size() < 2) return true;
    return y.back() > y.front();
}

void MonotoneTable::validate() const {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("MonotoneTable: bad sizes");
    const bool inc_x = x.back() > x.front();
    const bool inc_y = y.back() > y.front();
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (inc_x ? !(x[i] > x[i - 1]) : !(x[i] < x[i - 1]))
            throw std::invalid_argument("MonotoneTable: x not strictly monotone");
        if (inc_y ? !(y[i] > y[i - 1]) : !(y[i] < y[i - 1]))
            throw std::invalid_argument("MonotoneTable: y not strictly monotone");
    }
}

double MonotoneTable::invert(double target, double xtol) const {
    validate();
    std::size_t lo = 0;
    bool found = false;
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double a = y[k - 1], b = y[k];
        if (target >= std::min(a, b) && target <= std::max(a, b)) {
            lo = k - 1;
            found = true;
            break;
        }
    }
    if (!found) throw std::invalid_argument("MonotoneTable::invert: target out of range");
    const double xa = std::min(x[lo], x[lo + 1]), xb = std::max(x[lo], x[lo + 1]);
    if (eval) {
        auto g = [&](double xx) { return eval(xx) - target; };
        return find_root(g, xa, xb, xtol);
    }
    // Linear fallback between the bracketing rows.
    const double a = y[lo], b = y[lo + 1];
    if (a == b) return x[lo];
    const double t = (target - a) / (b - a);
    return x[lo] + t * (x[lo + 1] - x[lo]);
}

double interp4(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("interp4: bad grid");
    const std::size_t n = xs.size();
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.begin() ? 0 : std::size_t(it - xs.begin()) - 1;
    std::size_t j0 = i >= 1 ? i - 1 : 0;
    if (n >= 4) {
        j0 = std::min(j0, n - 4);
        double acc = 0.0;
        for (std::size_t a = j0; a < j0 + 4; ++a) {
            double term = ys[a];
            for (std::size_t b = j0; b < j0 + 4; ++b)
                if (b != a) term *= (x - xs[b]) / (xs[a] - xs[b]);
            acc += term;
        }
        return acc;
    }
    i = std::min(i, n - 2);
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

}  // namespace l2curves
