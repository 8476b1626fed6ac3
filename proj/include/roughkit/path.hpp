#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "roughkit/errors.hpp"

namespace roughkit {

// A path observed on a finite strictly increasing time grid, one row of
// `values` per grid time. Immutable after construction.
struct SamplePath {
    Eigen::VectorXd times;
    Eigen::MatrixXd values;  // size() x dimension()

    SamplePath() = default;
    SamplePath(Eigen::VectorXd t, Eigen::MatrixXd v);

    Eigen::Index size() const { return times.size(); }
    int dimension() const { return static_cast<int>(values.cols()); }
    double t0() const { return times(0); }
    double t1() const { return times(times.size() - 1); }

    // Exact-match lookup; throws GridError for off-grid times. Dyadic times
    // are exact in binary floating point, so equality is reliable for the
    // grids this library generates.
    Eigen::Index index_of(double t) const;
    bool on_grid(double t) const;

    Eigen::VectorXd value(Eigen::Index k) const { return values.row(k).transpose(); }
    Eigen::VectorXd at(double t) const { return value(index_of(t)); }
};

// Operator-valued path: one dense matrix per grid time.
struct OperatorPath {
    Eigen::VectorXd times;
    std::vector<Eigen::MatrixXd> values;

    OperatorPath() = default;
    OperatorPath(Eigen::VectorXd t, std::vector<Eigen::MatrixXd> v);

    Eigen::Index size() const { return times.size(); }
    Eigen::Index rows() const { return values.empty() ? 0 : values.front().rows(); }
    Eigen::Index cols() const { return values.empty() ? 0 : values.front().cols(); }
    Eigen::Index index_of(double t) const;
};

// Grid factories. Dyadic times j*2^-n are exact doubles.
Eigen::VectorXd dyadic_times(int level, double horizon = 1.0);
Eigen::VectorXd uniform_times(double a, double b, Eigen::Index cells);
// Uniform grid on [a,b] with spacing at most `mesh` (last cell may be short).
Eigen::VectorXd mesh_times(double a, double b, double mesh);

SamplePath sample_function(const Eigen::VectorXd& times,
                           const std::function<Eigen::VectorXd(double)>& f);
SamplePath sample_scalar_function(const Eigen::VectorXd& times,
                                  const std::function<double(double)>& f);

// Increment X_t - X_s for on-grid s <= t.
Eigen::VectorXd increment(const SamplePath& x, double s, double t);
Eigen::VectorXd increment_idx(const SamplePath& x, Eigen::Index i, Eigen::Index j);

enum class HolderPairs {
    automatic,  // all pairs up to 4096 grid points, dyadic beyond
    all,
    dyadic,  // pairs adjacent at some dyadic index scale
};

// Empirical alpha-Hoelder seminorm: sup over the selected pair family of
// |X_t - X_s| / (t-s)^alpha. A grid sup, not the continuum sup.
double holder_norm(const SamplePath& x, double alpha, HolderPairs pairs = HolderPairs::automatic);
double holder_norm(const OperatorPath& x, double alpha, HolderPairs pairs = HolderPairs::automatic);

// Slope-based estimate of the Hoelder exponent from dyadic-scale max
// increments; diagnostic only.
double estimate_holder_exponent(const SamplePath& x);

// Dyadic p-variation sum at level n: sum_j |X_{j 2^-n} - X_{(j-1) 2^-n}|^p.
// The grid must contain every point j*2^-n.
double dyadic_pvar_sum(const SamplePath& x, double p, int level);

// Two-parameter germ on a grid: evaluates on grid index pairs i <= j, with
// Xi_{t,t} = 0. The value is a flat vector of size `dim`.
struct TwoParamGerm {
    Eigen::VectorXd times;
    int dim = 1;
    std::function<Eigen::VectorXd(Eigen::Index, Eigen::Index)> eval;

    Eigen::Index size() const { return times.size(); }
    Eigen::Index index_of(double t) const;
    Eigen::VectorXd operator()(double s, double t) const;
    Eigen::VectorXd value_idx(Eigen::Index i, Eigen::Index j) const { return eval(i, j); }
};

// delta Xi_{s,u,t} = Xi_{s,t} - Xi_{s,u} - Xi_{u,t} for s <= u <= t.
Eigen::VectorXd germ_delta(const TwoParamGerm& xi, double s, double u, double t);
Eigen::VectorXd germ_delta_idx(const TwoParamGerm& xi, Eigen::Index i, Eigen::Index k, Eigen::Index j);

// Germ of a path increment; exactly additive, so it sews to the increment
// itself under any partition.
TwoParamGerm additive_germ(const SamplePath& x);

}  // namespace roughkit
