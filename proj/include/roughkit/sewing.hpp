#pragma once

#include <Eigen/Dense>

#include <vector>

#include "roughkit/path.hpp"

namespace roughkit {

// Compensated Riemann sum of a germ over one partition (grid times,
// endpoints included). The caller refines; see sew_refined for the
// converged value.
Eigen::VectorXd sew(const TwoParamGerm& xi, const std::vector<double>& partition);

// Same, validating that the partition covers [s, t].
Eigen::VectorXd sew(const TwoParamGerm& xi, double s, double t, const std::vector<double>& partition);

struct SewReport {
    Eigen::VectorXd value;                     // finest-level sum
    double cauchy_gap = 0.0;                   // max successive-level difference norm
    std::vector<Eigen::VectorXd> level_values;
    std::vector<double> level_gaps;            // gap entering each level > 0
    std::vector<double> level_meshes;
    int levels_used = 0;
    bool converged_by_atol = false;
    bool grid_exhausted = false;
};

struct SewOptions {
    int max_levels = 40;
    double atol = 1e-9;  // stop when successive refinements differ by less
};

// Dyadic refinement of `base` towards the germ's grid: each cell splits at
// the grid point nearest its midpoint. Stops at atol, level budget, or grid
// exhaustion (no cell has an interior grid point left).
SewReport sew_refined(const TwoParamGerm& xi, double s, double t, const std::vector<double>& base,
                      const SewOptions& opts = {});

// Convenience: refine the single cell [s,t] all the way down.
SewReport sew_refined(const TwoParamGerm& xi, double s, double t, const SewOptions& opts = {});

// Riemann zeta on (1, inf) by direct summation plus a midpoint integral
// tail; absolute error certified below 1e-12.
double riemann_zeta(double beta);

// The sewing-lemma constant 2^beta (zeta(beta) - 1) + 1, beta > 1.
double sewing_constant(double beta);

// Grid estimate of ||delta Xi||_beta: sup over grid triples of
// |delta Xi_{s,u,t}| / (t-s)^beta. Beyond `triple_cap` triples the middle
// point is restricted to cell midpoint candidates.
double germ_delta_norm(const TwoParamGerm& xi, double beta, double s, double t,
                       long long triple_cap = 10'000'000);

struct SewingBoundReport {
    double lhs = 0.0;           // |sewn value - Xi_{s,t}|
    double rhs = 0.0;           // constant * ||delta Xi||_beta * (t-s)^beta
    double delta_norm = 0.0;
    double constant = 0.0;
    double cauchy_gap = 0.0;
    bool holds = false;
};

// Checks the maximal inequality with the explicit constant; a violated
// bound is reported, never thrown, since it falsifies the implementation.
SewingBoundReport sewing_bound_check(const TwoParamGerm& xi, double beta, double s, double t,
                                     const SewOptions& opts = {});

}  // namespace roughkit
