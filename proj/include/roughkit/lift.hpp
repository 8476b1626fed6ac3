#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

#include "roughkit/path.hpp"
#include "roughkit/tensor.hpp"

namespace roughkit {

// Grid-indexed multiplicative functional: one group-like truncated tensor
// per adjacent grid pair. Entries for non-adjacent pairs are DEFINED as the
// ordered tensor product of adjacent increments, so Chen's identity holds
// by construction.
struct RoughPath {
    int dim = 1;
    int depth = 1;
    double alpha_declared = 1.0;
    Eigen::VectorXd times;
    std::vector<Tensor> increments;  // size() - 1 entries
    std::shared_ptr<const SamplePath> refinement;  // optional finer driver

    RoughPath() = default;
    RoughPath(int d, int n, double alpha, Eigen::VectorXd t, std::vector<Tensor> inc);

    Eigen::Index size() const { return times.size(); }
    Eigen::Index index_of(double t) const;
    double t0() const { return times(0); }
    double t1() const { return times(times.size() - 1); }

    Tensor evaluate_idx(Eigen::Index i, Eigen::Index j) const;
    Tensor evaluate(double s, double t) const;

    // Level-1 increments as a path started at zero.
    SamplePath level1_path() const;
};

// Max Chen residual |evaluate(s,t) - evaluate(s,u) evaluate(u,t)| over grid
// triples; exhaustive up to `exhaustive_size` grid points, strided beyond.
double chen_residual(const RoughPath& x, Eigen::Index exhaustive_size = 64);

// Canonical (piecewise-linear) lift: each adjacent increment is
// exp_tensor of the segment increment.
RoughPath canonical_lift(const SamplePath& x, int depth, double alpha_declared = 1.0);

// Restriction to a coarser set of grid times (each must lie on the grid).
RoughPath restrict_to(const RoughPath& x, const Eigen::VectorXd& coarse_times);

// ---------------------------------------------------------------------------
// Gaussian drivers
// ---------------------------------------------------------------------------

struct GaussianSimConfig {
    double hurst = 0.5;
    Eigen::VectorXd grid;  // must start at 0
    std::uint64_t seed = 0;
    int dim = 1;
};

// Exact-law fractional Brownian motion on the grid: the covariance matrix
// 0.5 (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) is Cholesky-factored once and
// applied to seeded standard normals, independently per coordinate.
class FbmSampler {
public:
    FbmSampler(double hurst, Eigen::VectorXd grid);
    SamplePath sample(std::uint64_t seed, int dim = 1) const;
    double hurst() const { return hurst_; }

private:
    double hurst_;
    Eigen::VectorXd grid_;
    Eigen::MatrixXd chol_;  // lower factor over the nonzero times
};

SamplePath fbm_sample(const GaussianSimConfig& cfg);

enum class BrownianMode { ito, strat };

// Level-2 Brownian lift on the given coarse grid. Increments are sampled on
// the r-fold refined grid; the Stratonovich second level per coarse cell is
// the canonical lift of the refined piecewise-linear path, and the Ito
// level subtracts I_d (cell width)/2. Level 1 is identical in both modes.
RoughPath brownian_lift(const Eigen::VectorXd& grid, int refinement, BrownianMode mode,
                        std::uint64_t seed, int dim, double alpha_declared = 0.45);

// ---------------------------------------------------------------------------
// Lyons extension
// ---------------------------------------------------------------------------

// Germ of the extension construction for the target level:
//   Xi^{(lvl)}_{s,t} = sum_{1<=j<=lvl-1} X^{(lvl-j)}_{0,s} (x) X^{(j)}_{s,t},
// flattened to a vector of size d^lvl. Requires depth >= lvl-1.
TwoParamGerm extension_germ(const RoughPath& x, int level);

// Unique multiplicative extension to the requested depth. Levels <= depth
// are copied bit-identically; each higher level comes from sewing the
// extension germ over the grid, whose partition sums telescope so the new
// adjacent-cell coefficients vanish and all coarser entries carry the mass
// through Chen's identity.
RoughPath lyons_extend(const RoughPath& x, int target_depth);

struct DecayFit {
    double m = 0.0;     // fitted growth base
    double beta = 0.0;  // fitted 1/prefactor
    std::vector<double> level_sups;  // sup_{s<t} |X^{(n)}_{s,t}| / (t-s)^{n alpha}
};

// Fit of the factorial-decay profile M^n / (beta (n alpha)!) to the
// levelwise sups of the path.
DecayFit extension_decay_fit(const RoughPath& x, double alpha);

// ---------------------------------------------------------------------------
// Metrics and norms
// ---------------------------------------------------------------------------

// rho_alpha: sum over levels of the grid sup of level differences scaled by
// (t-s)^{n alpha}. Requires matching dimension, depth and grid.
double rho_alpha(const RoughPath& x, const RoughPath& y, double alpha);

// Homogeneous norm: max over levels of the grid sup |X^{(n)}_{s,t}|/(t-s)^{n alpha}.
double homogeneous_norm(const RoughPath& x, double alpha);

// Per-level grid sups (the building block of the two functions above).
std::vector<double> level_sups(const RoughPath& x, double alpha);

struct NeoClassicalReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// alpha sum_{0<=j<=n} s^{j a} t^{(n-j) a} / ((j a)! ((n-j) a)!)
//   <= (t+s)^{n a} / (n a)!   with (x)! = Gamma(1+x).
NeoClassicalReport neo_classical_check(double alpha, int n, double s, double t);

}  // namespace roughkit
