#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "roughkit/lift.hpp"
#include "roughkit/young.hpp"

namespace roughkit {

// Gubinelli controlled path (Y, Y') on the grid of a reference rough path.
// Values are dense matrices of shape rows x d^order per grid point:
//   order 0: vector-valued Y (rows x 1), Y' in L(R^d, target) (rows x d);
//   order 1: operator-valued Y (rows x d), Y' in L(R^d (x) R^d, target).
// Y' columns are laid out as (direction i, value column c) -> i * d^order + c,
// so the derivative direction always contracts the first tensor slot.
struct ControlledPath {
    std::shared_ptr<const RoughPath> reference;
    int rows = 1;
    int order = 0;
    std::vector<Eigen::MatrixXd> y;
    std::vector<Eigen::MatrixXd> yp;

    ControlledPath() = default;
    ControlledPath(std::shared_ptr<const RoughPath> ref, int target_rows, int tensor_order,
                   std::vector<Eigen::MatrixXd> y_values, std::vector<Eigen::MatrixXd> yp_values);

    Eigen::Index size() const { return reference ? reference->size() : 0; }
    const Eigen::VectorXd& times() const { return reference->times; }
    int dim() const { return reference->dim; }
    Eigen::Index value_cols() const { return y.empty() ? 0 : y.front().cols(); }

    // Vector-valued view of Y (order 0 only).
    SamplePath y_path() const;
};

// Contract the derivative direction of a derivative block against dx:
// (rows x d*q, d) -> rows x q.
Eigen::MatrixXd contract_direction(const Eigen::MatrixXd& yp, const Eigen::VectorXd& dx);

// Remainder R^Y_{s,t} = delta Y_{s,t} - Y'_s delta X_{s,t}.
Eigen::MatrixXd remainder(const ControlledPath& cp, double s, double t);
Eigen::MatrixXd remainder_idx(const ControlledPath& cp, Eigen::Index i, Eigen::Index j);

// ||Y'||_alpha + ||R^Y||_{2 alpha} as grid sups (Frobenius norms).
double controlled_seminorm(const ControlledPath& cp, double alpha);
// Adds |Y_0| + |Y'_0|.
double controlled_norm(const ControlledPath& cp, double alpha);

// (X, Id): the reference path seen as a path controlled by itself.
ControlledPath controlled_canonical(std::shared_ptr<const RoughPath> ref);
// Constant path (c, 0).
ControlledPath controlled_constant(std::shared_ptr<const RoughPath> ref, const Eigen::VectorXd& c);
// General order-0 construction from a path and its Gubinelli derivative.
ControlledPath controlled_from(std::shared_ptr<const RoughPath> ref, const SamplePath& y,
                               const OperatorPath& yp);

// Operator-valued integrand whose rough integral produces all second-level
// entries int X^i dX^j at once: Y maps e_j to (X^i e_{(i,j)})_i with Y' the
// identity on R^d (x) R^d.
ControlledPath self_integrand(std::shared_ptr<const RoughPath> ref);

// Germ of the compensated sum Y_u dX_{u,v} + Y'_u XX_{u,v} (order-1 input).
TwoParamGerm rough_integral_germ(const ControlledPath& cp);

struct RoughIntegralResult {
    ControlledPath z;        // (integral path, Y) as a controlled path
    double cauchy_gap = 0.0; // gap between the full-grid sum and its stride-2 coarsening
};

// Rough integral of an operator-valued controlled path: the compensated sum
// over the reference grid, with Gubinelli derivative Y.
RoughIntegralResult rough_integral(const ControlledPath& cp);

struct ComposeReport {
    ControlledPath composed;
    double norm_lhs = 0.0;     // ||phi(Y), phi(Y)'||_{X,alpha}
    double norm_factor = 0.0;  // ||Y||_alpha + ||Y||_alpha^2 + ||Y, Y'||_{X,alpha}
    double c_fit = 0.0;        // lhs / factor
};

// Composition with a twice differentiable map: (phi(Y), Dphi(Y) Y'),
// plus the norm comparison of the composition estimate.
ComposeReport compose_smooth(const SmoothMap& phi, const ControlledPath& cp, double alpha);

// Composition with a coefficient field: order-0 input, order-1 output
// (sigma(Y), Dsigma(Y) Y'); the integrand of the RDE fixed-point map.
ControlledPath compose_vector_field(const VectorField& sigma, const ControlledPath& cp);

// d-flat metric on the total space: rho_alpha of the references plus
// ||Y'-Y~'||_alpha + ||R-R~||_{2 alpha} + |Y_0-Y~_0| + |Y'_0-Y~'_0|.
double dflat_metric(const ControlledPath& a, const ControlledPath& b, double alpha);

}  // namespace roughkit
