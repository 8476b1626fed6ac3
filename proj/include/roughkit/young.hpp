#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roughkit/path.hpp"

namespace roughkit {

// Coefficient field sigma: R^m -> L(R^d, R^m), evaluated as an m x d matrix.
// The derivative is either supplied analytically or replaced by central
// finite differences with step fd_step; a supplied derivative must agree
// with the finite-difference probe to fd_check_tol on probe points.
struct VectorField {
    int m = 1;
    int d = 1;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> sigma;
    // dsigma(y)[l] = d sigma / d y_l, an m x d matrix per state coordinate.
    std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> dsigma;

    double fd_step = 1e-5;
    double fd_check_tol = 1e-4;

    Eigen::MatrixXd eval(const Eigen::VectorXd& y) const;
    std::vector<Eigen::MatrixXd> jacobian(const Eigen::VectorXd& y) const;
    std::vector<Eigen::MatrixXd> fd_jacobian(const Eigen::VectorXd& y) const;
    // Second derivative probe (finite differences of the jacobian); used to
    // estimate a C^3-type bound, never to step the solvers.
    std::vector<std::vector<Eigen::MatrixXd>> fd_hessian(const Eigen::VectorXd& y) const;

    // Checks an analytic jacobian against finite differences on the given
    // probe points; throws ParameterError on disagreement beyond tolerance.
    void validate_derivative(const std::vector<Eigen::VectorXd>& probes) const;

    // Sup estimates of ||D^l sigma|| for l = 0..k over a sampled box
    // [-radius, radius]^m.
    std::vector<double> probe_ck_bounds(int k, double radius, int samples_per_axis = 9) const;
};

// Smooth map R^m -> R^p with first (and optionally second) derivative, the
// composition side of controlled paths.
struct SmoothMap {
    int in = 1;
    int out = 1;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> df;  // p x m
    double fd_step = 1e-5;

    Eigen::VectorXd eval(const Eigen::VectorXd& y) const;
    Eigen::MatrixXd derivative(const Eigen::VectorXd& y) const;
};

enum class YoungQuadrature {
    left,       // germ f_u (g_v - g_u); first order on the grid
    trapezoid,  // germ (f_u + f_v)/2 (g_v - g_u); same Young limit, second order
};

// Young integral of an operator-valued path f against g on a shared grid:
// the cumulative path t -> int_s^t f dg for grid times in [s, t], starting
// at zero. The grid-exhausted compensated sum is the value; sewing
// machinery quantifies its error.
SamplePath young_integral(const OperatorPath& f, const SamplePath& g, double s, double t,
                          YoungQuadrature quad = YoungQuadrature::left);

// End value int_s^t f dg.
Eigen::VectorXd young_integral_value(const OperatorPath& f, const SamplePath& g, double s, double t,
                                     YoungQuadrature quad = YoungQuadrature::left);

// Germ of the Young integrand, for the sewing tests and bound checks.
TwoParamGerm young_germ(const OperatorPath& f, const SamplePath& g,
                        YoungQuadrature quad = YoungQuadrature::left);

struct YoungOdeOptions {
    double picard_tol = 1e-9;
    int max_iter = 200;
    double contraction_threshold = 0.9;
    Eigen::Index min_window_cells = 4;
    double declared_alpha = 1.0;  // caller-declared Hoelder exponent of the driver
};

struct YoungOdeResult {
    SamplePath y;
    int windows = 0;
    int total_iterations = 0;
    double final_residual = 0.0;
    // largest settled successive-iterate distance ratio seen on an accepted
    // window; below 1 whenever the fixed-point map contracted
    double max_accepted_ratio = 0.0;
    std::vector<std::string> warnings;
};

// Picard iteration for dY = sigma(Y) dX on a shrinking-interval schedule:
// the integral map is iterated on the current window until the sup residual
// drops below picard_tol; windows halve whenever contraction is not
// observed, and solutions are glued across windows. The integral map uses
// the trapezoid quadrature so smooth drivers converge at second order.
YoungOdeResult young_ode_solve(const VectorField& sigma, const SamplePath& x, const Eigen::VectorXd& y0,
                               const YoungOdeOptions& opts = {});

}  // namespace roughkit
