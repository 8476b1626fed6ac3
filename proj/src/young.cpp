#include "roughkit/young.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace roughkit {

Eigen::MatrixXd VectorField::eval(const Eigen::VectorXd& y) const {
    if (y.size() != m) throw DimensionError("vector field state size mismatch");
    Eigen::MatrixXd s = sigma(y);
    if (s.rows() != m || s.cols() != d) throw DimensionError("vector field value must be m x d");
    return s;
}

std::vector<Eigen::MatrixXd> VectorField::fd_jacobian(const Eigen::VectorXd& y) const {
    std::vector<Eigen::MatrixXd> out(m);
    Eigen::VectorXd yp = y, ym = y;
    for (int l = 0; l < m; ++l) {
        yp(l) += fd_step;
        ym(l) -= fd_step;
        out[l] = (sigma(yp) - sigma(ym)) / (2.0 * fd_step);
        yp(l) = y(l);
        ym(l) = y(l);
    }
    return out;
}

std::vector<Eigen::MatrixXd> VectorField::jacobian(const Eigen::VectorXd& y) const {
    if (dsigma) return dsigma(y);
    return fd_jacobian(y);
}

std::vector<std::vector<Eigen::MatrixXd>> VectorField::fd_hessian(const Eigen::VectorXd& y) const {
    std::vector<std::vector<Eigen::MatrixXd>> out(m);
    Eigen::VectorXd yp = y, ym = y;
    for (int l = 0; l < m; ++l) {
        yp(l) += fd_step;
        ym(l) -= fd_step;
        const auto jp = jacobian(yp);
        const auto jm = jacobian(ym);
        out[l].resize(m);
        for (int l2 = 0; l2 < m; ++l2) out[l][l2] = (jp[l2] - jm[l2]) / (2.0 * fd_step);
        yp(l) = y(l);
        ym(l) = y(l);
    }
    return out;
}

void VectorField::validate_derivative(const std::vector<Eigen::VectorXd>& probes) const {
    if (!dsigma) return;
    for (const auto& y : probes) {
        const auto analytic = dsigma(y);
        const auto fd = fd_jacobian(y);
        for (int l = 0; l < m; ++l) {
            const double err = (analytic[l] - fd[l]).cwiseAbs().maxCoeff();
            if (err > fd_check_tol)
                throw ParameterError("analytic derivative deviates from finite differences by " +
                                     std::to_string(err));
        }
    }
}

std::vector<double> VectorField::probe_ck_bounds(int k, double radius, int samples_per_axis) const {
    if (k < 0 || k > 2) throw ParameterError("probe supports k in 0..2");
    std::vector<double> bounds(k + 1, 0.0);
    // Axis-aligned sweep plus the origin; crude but adequate for the
    // diagnostics these bounds feed.
    std::vector<Eigen::VectorXd> probes;
    probes.push_back(Eigen::VectorXd::Zero(m));
    for (int axis = 0; axis < m; ++axis)
        for (int s = 0; s < samples_per_axis; ++s) {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
            y(axis) = -radius + 2.0 * radius * s / (samples_per_axis - 1.0);
            probes.push_back(y);
        }
    for (const auto& y : probes) {
        bounds[0] = std::max(bounds[0], eval(y).norm());
        if (k >= 1) {
            double s = 0;
            for (const auto& block : jacobian(y)) s += block.squaredNorm();
            bounds[1] = std::max(bounds[1], std::sqrt(s));
        }
        if (k >= 2) {
            double s = 0;
            for (const auto& row : fd_hessian(y))
                for (const auto& block : row) s += block.squaredNorm();
            bounds[2] = std::max(bounds[2], std::sqrt(s));
        }
    }
    return bounds;
}

Eigen::VectorXd SmoothMap::eval(const Eigen::VectorXd& y) const {
    if (y.size() != in) throw DimensionError("smooth map input size mismatch");
    Eigen::VectorXd v = f(y);
    if (v.size() != out) throw DimensionError("smooth map output size mismatch");
    return v;
}

Eigen::MatrixXd SmoothMap::derivative(const Eigen::VectorXd& y) const {
    if (df) return df(y);
    Eigen::MatrixXd j(out, in);
    Eigen::VectorXd yp = y, ym = y;
    for (int l = 0; l < in; ++l) {
        yp(l) += fd_step;
        ym(l) -= fd_step;
        j.col(l) = (f(yp) - f(ym)) / (2.0 * fd_step);
        yp(l) = y(l);
        ym(l) = y(l);
    }
    return j;
}

namespace {

void require_common_grid(const OperatorPath& f, const SamplePath& g) {
    if (f.times.size() != g.times.size() || f.times != g.times)
        throw GridError("integrand and integrator must share one grid");
    if (f.cols() != g.dimension()) throw DimensionError("integrand columns must match path dimension");
}

}  // namespace

TwoParamGerm young_germ(const OperatorPath& f, const SamplePath& g, YoungQuadrature quad) {
    require_common_grid(f, g);
    TwoParamGerm germ;
    germ.times = g.times;
    germ.dim = static_cast<int>(f.rows());
    auto fv = std::make_shared<std::vector<Eigen::MatrixXd>>(f.values);
    auto gv = std::make_shared<Eigen::MatrixXd>(g.values);
    if (quad == YoungQuadrature::left) {
        germ.eval = [fv, gv](Eigen::Index i, Eigen::Index j) -> Eigen::VectorXd {
            return (*fv)[i] * (gv->row(j) - gv->row(i)).transpose();
        };
    } else {
        germ.eval = [fv, gv](Eigen::Index i, Eigen::Index j) -> Eigen::VectorXd {
            return 0.5 * (((*fv)[i] + (*fv)[j]) * (gv->row(j) - gv->row(i)).transpose());
        };
    }
    return germ;
}

SamplePath young_integral(const OperatorPath& f, const SamplePath& g, double s, double t,
                          YoungQuadrature quad) {
    require_common_grid(f, g);
    const Eigen::Index is = g.index_of(s), it = g.index_of(t);
    if (is >= it) throw OrderError("integration interval needs s < t");
    const Eigen::Index n = it - is + 1;
    const Eigen::Index m = f.rows();
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, m);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    for (Eigen::Index k = is; k < it; ++k) {
        const Eigen::VectorXd dg = (g.values.row(k + 1) - g.values.row(k)).transpose();
        if (quad == YoungQuadrature::left)
            acc += f.values[k] * dg;
        else
            acc += 0.5 * ((f.values[k] + f.values[k + 1]) * dg);
        values.row(k - is + 1) = acc.transpose();
    }
    return {g.times.segment(is, n), values};
}

Eigen::VectorXd young_integral_value(const OperatorPath& f, const SamplePath& g, double s, double t,
                                     YoungQuadrature quad) {
    const SamplePath path = young_integral(f, g, s, t, quad);
    return path.values.row(path.size() - 1).transpose();
}

namespace {

// One Picard pass on window [i0, i1]: Y <- y_start + int sigma(Y) dX with
// trapezoid quadrature; returns the sup-norm distance to the input iterate.
double picard_sweep(const VectorField& sigma, const SamplePath& x, Eigen::Index i0, Eigen::Index i1,
                    const Eigen::VectorXd& y_start, Eigen::MatrixXd& iterate) {
    const Eigen::Index cells = i1 - i0;
    std::vector<Eigen::MatrixXd> sig(cells + 1);
    for (Eigen::Index k = 0; k <= cells; ++k) sig[k] = sigma.eval(iterate.row(k).transpose());
    Eigen::MatrixXd next(cells + 1, sigma.m);
    Eigen::VectorXd acc = y_start;
    next.row(0) = acc.transpose();
    for (Eigen::Index k = 0; k < cells; ++k) {
        const Eigen::VectorXd dx = (x.values.row(i0 + k + 1) - x.values.row(i0 + k)).transpose();
        acc += 0.5 * ((sig[k] + sig[k + 1]) * dx);
        next.row(k + 1) = acc.transpose();
    }
    const double dist = (next - iterate).rowwise().norm().maxCoeff();
    iterate = std::move(next);
    return dist;
}

}  // namespace

YoungOdeResult young_ode_solve(const VectorField& sigma, const SamplePath& x, const Eigen::VectorXd& y0,
                               const YoungOdeOptions& opts) {
    if (sigma.d != x.dimension()) throw DimensionError("driver dimension does not match vector field");
    if (y0.size() != sigma.m) throw DimensionError("initial condition size mismatch");

    YoungOdeResult result;
    if (opts.declared_alpha <= 0.5) {
        result.warnings.push_back("declared alpha <= 1/2: outside the Young regime");
    } else if (x.size() >= 3) {
        const double est = estimate_holder_exponent(x);
        if (est < 0.5 - 0.05)
            result.warnings.push_back("empirical Hoelder exponent estimate " + std::to_string(est) +
                                      " falls below 1/2; declared alpha may be optimistic");
    }

    const Eigen::Index total_cells = x.size() - 1;
    Eigen::MatrixXd solution(x.size(), sigma.m);
    solution.row(0) = y0.transpose();

    Eigen::Index pos = 0;
    Eigen::VectorXd y_cur = y0;
    Eigen::Index window = total_cells;

    while (pos < total_cells) {
        window = std::min(window, total_cells - pos);
        const Eigen::Index i0 = pos, i1 = pos + window;

        Eigen::MatrixXd iterate = y_cur.transpose().replicate(window + 1, 1);
        double prev_dist = -1;
        double window_ratio = 0.0;
        int stalled = 0;
        bool accepted = false;
        for (int it = 1; it <= opts.max_iter; ++it) {
            const double dist = picard_sweep(sigma, x, i0, i1, y_cur, iterate);
            ++result.total_iterations;
            if (it >= 3 && prev_dist > 0) window_ratio = std::max(window_ratio, dist / prev_dist);
            if (dist <= opts.picard_tol) {
                accepted = true;
                result.final_residual = dist;
                break;
            }
            if (prev_dist > 0 && dist >= opts.contraction_threshold * prev_dist) {
                if (++stalled >= 3) break;  // not contracting on this window
            } else {
                stalled = 0;
            }
            prev_dist = dist;
        }

        if (accepted) {
            result.max_accepted_ratio = std::max(result.max_accepted_ratio, window_ratio);
            solution.block(i0 + 1, 0, window, sigma.m) = iterate.bottomRows(window);
            y_cur = iterate.row(window).transpose();
            pos = i1;
            ++result.windows;
        } else {
            if (window <= opts.min_window_cells)
                throw ConvergenceError(
                    "young_ode_solve: no contraction on the smallest window (cells=" +
                    std::to_string(window) + ", t=" + std::to_string(x.times(i0)) +
                    ", last residual=" + std::to_string(prev_dist) + ")");
            window = std::max<Eigen::Index>(opts.min_window_cells, window / 2);
        }
    }

    result.y = SamplePath(x.times, solution);
    return result;
}

}  // namespace roughkit
