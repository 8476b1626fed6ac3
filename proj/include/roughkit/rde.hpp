#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "roughkit/controlled.hpp"

namespace roughkit {

enum class RdeScheme { davie, picard };

struct RdeOptions {
    double picard_tol = 1e-9;
    int max_iter = 200;
    double contraction_threshold = 0.9;
    Eigen::Index min_window_cells = 4;
};

struct RdeResult {
    ControlledPath solution;  // (Y, sigma(Y))
    RdeScheme scheme = RdeScheme::davie;
    int windows = 0;
    int total_iterations = 0;
    double final_residual = 0.0;
};

// Second-order compensated term of the one-step expansion:
// sum_{i,j,l} dsigma_l(y)_{., j} sigma(y)_{l, i} XX^{i j}.
Eigen::VectorXd davie_second_order(const VectorField& sigma, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& level2_flat);

// Solve dY = sigma(Y) dX against a rough path of depth >= 2.
//  - davie: explicit stepping Y_{k+1} = Y_k + sigma(Y_k) dX + (Dsigma sigma)(Y_k) XX,
//    aborting with BlowUpError on non-finite values;
//  - picard: fixed-point iteration of the integral map on halving windows,
//    returning once the sup residual falls below picard_tol.
RdeResult rde_solve(const VectorField& sigma, std::shared_ptr<const RoughPath> x,
                    const Eigen::VectorXd& y0, RdeScheme scheme, const RdeOptions& opts = {});

struct LinearRdeResult {
    SamplePath y;
    double tail_bound = 0.0;  // bound on the discarded levels > M at the horizon
    DecayFit fit;             // factorial-decay fit backing the tail bound
    double matrix_norm = 0.0; // max_i ||A_i||_2
};

// Truncated power series for the linear equation dY = (A Y) dX: the partial
// sum through tensor level M of A^{(x) n}(X^{(n)}_{0,t}) y0. The driver must
// already be extended to depth >= M.
LinearRdeResult linear_rde_series(const std::vector<Eigen::MatrixXd>& a, const RoughPath& x,
                                  const Eigen::VectorXd& y0, int truncation_depth);

struct WongZakaiRow {
    int level = 0;
    double sup_dist = 0.0;     // sup |Y(n) - Y| on the level-n dyadics
    double holder_dist = 0.0;  // alpha-Hoelder distance on the level-n dyadics
    double rho = 0.0;          // rho_alpha between the lifts
};

struct WongZakaiOptions {
    int master_level = 12;  // resolution of the reference Stratonovich proxy
    int min_level = 2;
    double alpha = 0.4;
};

// One seeded Brownian draw on the dyadic master grid; per level n, the
// piecewise-linear approximation B(n) is solved as an RDE against its
// canonical lift and compared with the master-resolution solution.
std::vector<WongZakaiRow> wong_zakai_experiment(const VectorField& sigma, const Eigen::VectorXd& y0,
                                                int n_levels, std::uint64_t seed,
                                                const WongZakaiOptions& opts = {});

// Partial sums sum_{n<=N} (C_n^2 + S_n^2) / (2 pi n) of the divergent
// pairing series; grows like (ln N)/pi.
Eigen::VectorXd lyons_divergence_demo(int n_max, std::uint64_t seed);

struct RogersScanResult {
    std::vector<int> levels;
    Eigen::MatrixXd pvar_sums;  // seeds x levels
    Eigen::VectorXd medians;    // per level
    double slope = 0.0;         // log2(median) against level
};

// Dyadic p-variation sums of seeded fBm draws per level; the fitted log2
// slope has the sign of 1 - pH.
RogersScanResult rogers_scan(double hurst, double p, int n_levels, int n_seeds, std::uint64_t base_seed);

}  // namespace roughkit
