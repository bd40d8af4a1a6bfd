#pragma once

// Adaptive Gauss-Kronrod quadrature, bracketed hybrid root finding and
// invertible cumulative-integral tables. These are the numerical workhorses
// behind the curve-reconstruction pipelines.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace l2curves {

// Raised for numerical failures (divergent integrals, empty domains, ...)
// as opposed to contract violations, which use std::invalid_argument.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what, double where = 0.0)
        : std::runtime_error(what), location(where) {}
    double location;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    double worst_x = 0.0;  // midpoint of the least-converged panel
};

// Adaptive 7-15 Gauss-Kronrod on [a, b] (a > b allowed, value signed).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, int max_panels = 4000);

// Same, but throws NumericError when the error estimate does not meet tol.
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double abs_tol = 1e-10, int max_panels = 4000);

// Find x in [a, b] with f(x) = 0 given f(a) f(b) <= 0. Secant steps with a
// bisection fallback keep the bracket valid.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-13, int max_iter = 200);

// Golden-section minimizer on [a, b].
double minimize_golden(const std::function<double(double)>& f, double a, double b,
                       double xtol = 1e-10);

// Cumulative integral F(x) = integral from x_ref of f, stored as breakpoint
// rows and re-integrated locally between rows on evaluation, so queries stay
// at quadrature accuracy instead of interpolation accuracy.
class CumulativeIntegral {
  public:
    struct Row {
        double x;
        double value;
    };

    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> f, std::vector<double> breakpoints,
                       double x_ref, double abs_tol = 1e-12);

    double operator()(double x) const;
    const std::vector<Row>& rows() const { return rows_; }
    double x_min() const { return rows_.front().x; }
    double x_max() const { return rows_.back().x; }
    double value_min() const;
    double value_max() const;
    bool increasing() const { return increasing_; }

    // Solve F(x) = y by bracketed root refinement on the integral itself.
    // Requires the integrand to have one sign (monotone F).
    double invert(double y, double xtol = 1e-13) const;

  private:
    std::function<double(double)> f_;
    std::vector<Row> rows_;
    double tol_ = 1e-12;
    bool increasing_ = true;
};

// Monotone table with an optional exact evaluator. invert() refines on the
// evaluator when present and falls back to monotone interpolation otherwise.
struct MonotoneTable {
    std::vector<double> x;
    std::vector<double> y;
    std::function<double(double)> eval;  // optional exact y(x)

    bool increasing() const;
    // Throws std::invalid_argument when the table is not strictly monotone.
    void validate() const;
    double invert(double target, double xtol = 1e-12) const;
};

// 4-point Lagrange interpolation on a sorted grid (O(h^4) on smooth data).
double interp4(const std::vector<double>& xs, const std::vector<double>& ys, double x);

}  // namespace l2curves
