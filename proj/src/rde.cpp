#include "roughkit/rde.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace roughkit {

Eigen::VectorXd davie_second_order(const VectorField& sigma, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& level2_flat) {
    const int d = sigma.d;
    const Eigen::MatrixXd a2 = mat_rowmajor(level2_flat, d, d);
    const Eigen::MatrixXd s = sigma.eval(y) * a2;  // s(l, j) = sum_i sigma(l,i) XX^{i j}
    const auto jac = sigma.jacobian(y);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sigma.m);
    for (int l = 0; l < sigma.m; ++l) out += jac[l] * s.row(l).transpose();
    return out;
}

namespace {

RdeResult davie_solve(const VectorField& sigma, std::shared_ptr<const RoughPath> xp,
                      const Eigen::VectorXd& y0) {
    const RoughPath& x = *xp;
    const Eigen::Index n = x.size();
    Eigen::MatrixXd values(n, sigma.m);
    values.row(0) = y0.transpose();
    Eigen::VectorXd y = y0;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        y += sigma.eval(y) * x.increments[k].level(1) +
             davie_second_order(sigma, y, x.increments[k].level(2));
        if (!y.allFinite())
            throw BlowUpError("davie scheme produced non-finite values after t=" +
                                  std::to_string(x.times(k)),
                              x.times(k));
        values.row(k + 1) = y.transpose();
    }

    std::vector<Eigen::MatrixXd> yv(n), ypv(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        yv[k] = values.row(k).transpose();
        ypv[k] = sigma.eval(values.row(k).transpose());
    }
    RdeResult result;
    result.solution = ControlledPath(std::move(xp), sigma.m, 0, std::move(yv), std::move(ypv));
    result.scheme = RdeScheme::davie;
    return result;
}

// One sweep of the fixed-point map on window cells [i0, i1]: the candidate
// (Y, sigma(Y)) is pushed through the compensated-sum integral.
double picard_sweep(const VectorField& sigma, const RoughPath& x, Eigen::Index i0, Eigen::Index i1,
                    const Eigen::VectorXd& y_start, Eigen::MatrixXd& iterate) {
    const Eigen::Index cells = i1 - i0;
    Eigen::MatrixXd next(cells + 1, sigma.m);
    Eigen::VectorXd acc = y_start;
    next.row(0) = acc.transpose();
    for (Eigen::Index k = 0; k < cells; ++k) {
        const Eigen::VectorXd yk = iterate.row(k).transpose();
        acc += sigma.eval(yk) * x.increments[i0 + k].level(1) +
               davie_second_order(sigma, yk, x.increments[i0 + k].level(2));
        next.row(k + 1) = acc.transpose();
    }
    const double dist = (next - iterate).rowwise().norm().maxCoeff();
    iterate = std::move(next);
    return dist;
}

RdeResult picard_solve(const VectorField& sigma, std::shared_ptr<const RoughPath> xp,
                       const Eigen::VectorXd& y0, const RdeOptions& opts) {
    const RoughPath& x = *xp;
    const Eigen::Index total_cells = x.size() - 1;
    Eigen::MatrixXd solution(x.size(), sigma.m);
    solution.row(0) = y0.transpose();

    RdeResult result;
    result.scheme = RdeScheme::picard;

    Eigen::Index pos = 0;
    Eigen::VectorXd y_cur = y0;
    Eigen::Index window = total_cells;
    while (pos < total_cells) {
        window = std::min(window, total_cells - pos);
        const Eigen::Index i0 = pos, i1 = pos + window;
        Eigen::MatrixXd iterate = y_cur.transpose().replicate(window + 1, 1);
        double prev_dist = -1;
        int stalled = 0;
        bool accepted = false;
        for (int it = 1; it <= opts.max_iter; ++it) {
            const double dist = picard_sweep(sigma, x, i0, i1, y_cur, iterate);
            ++result.total_iterations;
            if (!iterate.allFinite()) break;
            if (dist <= opts.picard_tol) {
                accepted = true;
                result.final_residual = dist;
                break;
            }
            if (prev_dist > 0 && dist >= opts.contraction_threshold * prev_dist) {
                if (++stalled >= 3) break;
            } else {
                stalled = 0;
            }
            prev_dist = dist;
        }
        if (accepted) {
            solution.block(i0 + 1, 0, window, sigma.m) = iterate.bottomRows(window);
            y_cur = iterate.row(window).transpose();
            pos = i1;
            ++result.windows;
        } else {
            if (window <= opts.min_window_cells)
                throw ConvergenceError("rde_solve(picard): no contraction on the smallest window (cells=" +
                                       std::to_string(window) + ", t=" + std::to_string(x.times(i0)) +
                                       ", last residual=" + std::to_string(prev_dist) + ")");
            window = std::max<Eigen::Index>(opts.min_window_cells, window / 2);
        }
    }

    const Eigen::Index n = x.size();
    std::vector<Eigen::MatrixXd> yv(n), ypv(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        yv[k] = solution.row(k).transpose();
        ypv[k] = sigma.eval(solution.row(k).transpose());
    }
    result.solution = ControlledPath(std::move(xp), sigma.m, 0, std::move(yv), std::move(ypv));
    return result;
}

}  // namespace

RdeResult rde_solve(const VectorField& sigma, std::shared_ptr<const RoughPath> x,
                    const Eigen::VectorXd& y0, RdeScheme scheme, const RdeOptions& opts) {
    if (!x) throw ParameterError("rde_solve needs a driver");
    if (x->depth < 2) throw DepthError("rde_solve needs a rough path of depth >= 2");
    if (sigma.d != x->dim) throw DimensionError("field noise dimension does not match the driver");
    if (y0.size() != sigma.m) throw DimensionError("initial condition size mismatch");
    return scheme == RdeScheme::davie ? davie_solve(sigma, std::move(x), y0)
                                      : picard_solve(sigma, std::move(x), y0, opts);
}

LinearRdeResult linear_rde_series(const std::vector<Eigen::MatrixXd>& a, const RoughPath& x,
                                  const Eigen::VectorXd& y0, int truncation_depth) {
    const int d = x.dim;
    const int m = static_cast<int>(y0.size());
    if (static_cast<int>(a.size()) != d) throw DimensionError("need one matrix per driver coordinate");
    for (const auto& ai : a)
        if (ai.rows() != m || ai.cols() != m) throw DimensionError("coefficient matrices must be m x m");
    if (x.depth < truncation_depth)
        throw DepthError("driver depth " + std::to_string(x.depth) + " is below the truncation depth " +
                         std::to_string(truncation_depth) + "; extend the lift first");

    // Word-indexed action on y0: v_n[(i1..in)] = A_{i1} v_{n-1}[(i2..in)],
    // so each level costs d^n matrix-vector products.
    std::vector<std::vector<Eigen::VectorXd>> action(truncation_depth + 1);
    action[0] = {y0};
    for (int n = 1; n <= truncation_depth; ++n) {
        const auto& prev = action[n - 1];
        auto& cur = action[n];
        cur.resize(prev.size() * d);
        const Eigen::Index stride = static_cast<Eigen::Index>(prev.size());
        for (int letter = 0; letter < d; ++letter)
            for (Eigen::Index w = 0; w < stride; ++w) cur[letter * stride + w] = a[letter] * prev[w];
    }

    Eigen::MatrixXd values(x.size(), m);
    values.row(0) = y0.transpose();
    Tensor prefix = Tensor::unit(d, truncation_depth);
    for (Eigen::Index k = 0; k + 1 < x.size(); ++k) {
        Tensor inc = Tensor::unit(d, truncation_depth);
        for (int n = 1; n <= std::min(truncation_depth, x.depth); ++n)
            inc.level(n) = x.increments[k].level(n);
        prefix = tensor_mul(prefix, inc);
        Eigen::VectorXd y = y0;
        for (int n = 1; n <= truncation_depth; ++n) {
            const auto& block = prefix.level(n);
            const auto& act = action[n];
            for (Eigen::Index w = 0; w < block.size(); ++w)
                if (block(w) != 0.0) y += block(w) * act[w];
        }
        values.row(k + 1) = y.transpose();
    }

    LinearRdeResult result;
    result.y = SamplePath(x.times, values);
    result.fit = extension_decay_fit(x, x.alpha_declared);
    for (const auto& ai : a) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(ai);
        result.matrix_norm = std::max(result.matrix_norm, svd.singularValues()(0));
    }
    // Tail of the series at the horizon, using the fitted decay
    // |X^(n)_{0,T}| <= m_fit^n T^{n alpha} / (beta_fit (n alpha)!).
    const double horizon = x.t1() - x.t0();
    const double alpha = x.alpha_declared;
    if (result.fit.beta > 0) {
        const double log_base = std::log(std::max(result.matrix_norm, 1e-300)) +
                                std::log(std::max(result.fit.m, 1e-300)) + alpha * std::log(horizon);
        double tail = 0;
        for (int n = truncation_depth + 1; n <= truncation_depth + 600; ++n) {
            const double log_term = n * log_base - std::lgamma(1.0 + n * alpha) - std::log(result.fit.beta);
            const double term = std::exp(log_term);
            tail += term;
            if (term < 1e-18 * (tail + 1e-300)) break;
        }
        result.tail_bound = tail * y0.norm();
    }
    return result;
}

std::vector<WongZakaiRow> wong_zakai_experiment(const VectorField& sigma, const Eigen::VectorXd& y0,
                                                int n_levels, std::uint64_t seed,
                                                const WongZakaiOptions& opts) {
    if (n_levels >= opts.master_level)
        throw ParameterError("wong_zakai needs master_level > n_levels");
    if (opts.min_level < 1 || opts.min_level > n_levels)
        throw ParameterError("wong_zakai level range is empty");

    // One master Brownian draw; every B(n) subsamples it at the level-n dyadics.
    const Eigen::Index cells = Eigen::Index(1) << opts.master_level;
    const double h = 1.0 / static_cast<double>(cells);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd w(cells + 1, sigma.d);
    w.row(0).setZero();
    const double sd = std::sqrt(h);
    for (Eigen::Index k = 0; k < cells; ++k)
        for (int c = 0; c < sigma.d; ++c) w(k + 1, c) = w(k, c) + sd * normal(rng);
    const SamplePath master_path(dyadic_times(opts.master_level), w);

    auto master_lift =
        std::make_shared<const RoughPath>(canonical_lift(master_path, 2, 0.45));
    const RdeResult master = rde_solve(sigma, master_lift, y0, RdeScheme::davie);
    const SamplePath master_y = master.solution.y_path();

    std::vector<WongZakaiRow> rows;
    for (int level = opts.min_level; level <= n_levels; ++level) {
        const Eigen::VectorXd coarse = dyadic_times(level);
        Eigen::MatrixXd values(coarse.size(), sigma.d);
        for (Eigen::Index k = 0; k < coarse.size(); ++k)
            values.row(k) = master_path.values.row(master_path.index_of(coarse(k)));
        const SamplePath bn(coarse, values);
        auto lift_n = std::make_shared<const RoughPath>(canonical_lift(bn, 2, 0.45));
        const RdeResult yn = rde_solve(sigma, lift_n, y0, RdeScheme::davie);

        Eigen::MatrixXd diff(coarse.size(), sigma.m);
        for (Eigen::Index k = 0; k < coarse.size(); ++k)
            diff.row(k) = yn.solution.y[k].col(0).transpose() -
                          master_y.values.row(master_y.index_of(coarse(k)));
        WongZakaiRow row;
        row.level = level;
        row.sup_dist = diff.rowwise().norm().maxCoeff();
        const SamplePath diff_path(coarse, diff);
        row.holder_dist = holder_norm(diff_path, opts.alpha, HolderPairs::all);
        row.rho = rho_alpha(*lift_n, restrict_to(*master_lift, coarse), opts.alpha);
        rows.push_back(row);
    }
    return rows;
}

Eigen::VectorXd lyons_divergence_demo(int n_max, std::uint64_t seed) {
    if (n_max < 1) throw ParameterError("n_max must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd sums(n_max);
    double acc = 0;
    const double two_pi = 2.0 * M_PI;
    for (int n = 1; n <= n_max; ++n) {
        const double c = normal(rng);
        const double s = normal(rng);
        acc += (c * c + s * s) / (two_pi * n);
        sums(n - 1) = acc;
    }
    return sums;
}

RogersScanResult rogers_scan(double hurst, double p, int n_levels, int n_seeds, std::uint64_t base_seed) {
    if (n_levels < 2) throw ParameterError("rogers_scan needs at least 2 levels");
    if (n_seeds < 1) throw ParameterError("rogers_scan needs at least one seed");
    RogersScanResult result;
    const FbmSampler sampler(hurst, dyadic_times(n_levels));
    result.pvar_sums.resize(n_seeds, n_levels);
    for (int s = 0; s < n_seeds; ++s) {
        const SamplePath path = sampler.sample(base_seed + static_cast<std::uint64_t>(s));
        for (int level = 1; level <= n_levels; ++level)
            result.pvar_sums(s, level - 1) = dyadic_pvar_sum(path, p, level);
    }
    result.levels.resize(n_levels);
    result.medians.resize(n_levels);
    for (int level = 1; level <= n_levels; ++level) {
        result.levels[level - 1] = level;
        Eigen::VectorXd col = result.pvar_sums.col(level - 1);
        std::vector<double> v(col.data(), col.data() + col.size());
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        double med = v[v.size() / 2];
        if (v.size() % 2 == 0) {
            std::nth_element(v.begin(), v.begin() + v.size() / 2 - 1, v.end());
            med = 0.5 * (med + v[v.size() / 2 - 1]);
        }
        result.medians(level - 1) = med;
    }
    // log2(median) against level, least squares
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n_levels; ++i) {
        const double xv = result.levels[i];
        const double yv = std::log2(result.medians(i));
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
    }
    result.slope = (n_levels * sxy - sx * sy) / (n_levels * sxx - sx * sx);
    return result;
}

}  // namespace roughkit
