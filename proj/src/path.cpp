#include "roughkit/path.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace roughkit {

namespace {

Eigen::Index find_exact(const Eigen::VectorXd& times, double t) {
    const double* begin = times.data();
    const double* end = begin + times.size();
    const double* it = std::lower_bound(begin, end, t);
    if (it == end || *it != t) return -1;
    return it - begin;
}

void check_times(const Eigen::VectorXd& times) {
    if (times.size() < 2) throw GridError("grid needs at least 2 points");
    for (Eigen::Index k = 1; k < times.size(); ++k)
        if (!(times(k) > times(k - 1))) throw GridError("grid times must be strictly increasing");
}

}  // namespace

SamplePath::SamplePath(Eigen::VectorXd t, Eigen::MatrixXd v) : times(std::move(t)), values(std::move(v)) {
    check_times(times);
    if (values.rows() != times.size()) throw DimensionError("path values and times must align");
    if (values.cols() < 1) throw DimensionError("path values need at least one coordinate");
}

Eigen::Index SamplePath::index_of(double t) const {
    const Eigen::Index k = find_exact(times, t);
    if (k < 0) throw GridError("time " + std::to_string(t) + " is not a grid point");
    return k;
}

bool SamplePath::on_grid(double t) const { return find_exact(times, t) >= 0; }

OperatorPath::OperatorPath(Eigen::VectorXd t, std::vector<Eigen::MatrixXd> v)
    : times(std::move(t)), values(std::move(v)) {
    check_times(times);
    if (static_cast<Eigen::Index>(values.size()) != times.size())
        throw DimensionError("operator path values and times must align");
    for (const auto& m : values)
        if (m.rows() != values.front().rows() || m.cols() != values.front().cols())
            throw DimensionError("operator path values must share one shape");
}

Eigen::Index OperatorPath::index_of(double t) const {
    const Eigen::Index k = find_exact(times, t);
    if (k < 0) throw GridError("time " + std::to_string(t) + " is not a grid point");
    return k;
}

Eigen::VectorXd dyadic_times(int level, double horizon) {
    if (level < 0) throw ParameterError("dyadic level must be non-negative");
    const Eigen::Index n = Eigen::Index(1) << level;
    Eigen::VectorXd t(n + 1);
    const double h = horizon / static_cast<double>(n);  // exact when horizon = 1
    for (Eigen::Index j = 0; j <= n; ++j) t(j) = static_cast<double>(j) * h;
    return t;
}

Eigen::VectorXd uniform_times(double a, double b, Eigen::Index cells) {
    if (cells < 1) throw ParameterError("need at least one cell");
    if (!(b > a)) throw ParameterError("need b > a");
    Eigen::VectorXd t(cells + 1);
    for (Eigen::Index j = 0; j <= cells; ++j)
        t(j) = a + (b - a) * static_cast<double>(j) / static_cast<double>(cells);
    t(cells) = b;
    return t;
}

Eigen::VectorXd mesh_times(double a, double b, double mesh) {
    if (!(mesh > 0)) throw ParameterError("mesh must be positive");
    const auto cells = static_cast<Eigen::Index>(std::ceil((b - a) / mesh));
    return uniform_times(a, b, std::max<Eigen::Index>(cells, 1));
}

SamplePath sample_function(const Eigen::VectorXd& times, const std::function<Eigen::VectorXd(double)>& f) {
    const Eigen::VectorXd first = f(times(0));
    Eigen::MatrixXd values(times.size(), first.size());
    values.row(0) = first.transpose();
    for (Eigen::Index k = 1; k < times.size(); ++k) values.row(k) = f(times(k)).transpose();
    return {times, values};
}

SamplePath sample_scalar_function(const Eigen::VectorXd& times, const std::function<double(double)>& f) {
    Eigen::MatrixXd values(times.size(), 1);
    for (Eigen::Index k = 0; k < times.size(); ++k) values(k, 0) = f(times(k));
    return {times, values};
}

Eigen::VectorXd increment_idx(const SamplePath& x, Eigen::Index i, Eigen::Index j) {
    if (i > j) throw OrderError("increment requires s <= t");
    return (x.values.row(j) - x.values.row(i)).transpose();
}

Eigen::VectorXd increment(const SamplePath& x, double s, double t) {
    return increment_idx(x, x.index_of(s), x.index_of(t));
}

namespace {

template <typename NormAt>
double holder_sup(const Eigen::VectorXd& times, Eigen::Index n, double alpha, HolderPairs pairs,
                  NormAt&& norm_between) {
    if (alpha <= 0.0 || alpha > 1.0) throw ParameterError("holder exponent must lie in (0,1]");
    if (n < 2) throw GridError("holder norm needs at least 2 grid points");
    HolderPairs family = pairs;
    if (family == HolderPairs::automatic)
        family = n <= 4096 ? HolderPairs::all : HolderPairs::dyadic;

    double sup = 0;
    if (family == HolderPairs::all) {
        for (Eigen::Index i = 0; i + 1 < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double dt = times(j) - times(i);
                sup = std::max(sup, norm_between(i, j) / std::pow(dt, alpha));
            }
    } else {
        for (Eigen::Index stride = 1; stride < n; stride *= 2)
            for (Eigen::Index i = 0; i + stride < n; i += stride) {
                const Eigen::Index j = i + stride;
                const double dt = times(j) - times(i);
                sup = std::max(sup, norm_between(i, j) / std::pow(dt, alpha));
            }
    }
    return sup;
}

}  // namespace

double holder_norm(const SamplePath& x, double alpha, HolderPairs pairs) {
    return holder_sup(x.times, x.size(), alpha, pairs, [&](Eigen::Index i, Eigen::Index j) {
        return (x.values.row(j) - x.values.row(i)).norm();
    });
}

double holder_norm(const OperatorPath& x, double alpha, HolderPairs pairs) {
    return holder_sup(x.times, x.size(), alpha, pairs, [&](Eigen::Index i, Eigen::Index j) {
        return (x.values[j] - x.values[i]).norm();
    });
}

double estimate_holder_exponent(const SamplePath& x) {
    const Eigen::Index n = x.size();
    if (n < 3) throw GridError("exponent estimate needs at least 3 grid points");
    // log max-increment against log scale over dyadic index strides,
    // least-squares slope.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (Eigen::Index stride = 1; stride < n; stride *= 2) {
        double m = 0, scale = 0;
        for (Eigen::Index i = 0; i + stride < n; i += stride) {
            m = std::max(m, (x.values.row(i + stride) - x.values.row(i)).norm());
            scale = std::max(scale, x.times(i + stride) - x.times(i));
        }
        if (m == 0) continue;
        const double lx = std::log2(scale), ly = std::log2(m);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 2) return 1.0;  // constant path: any exponent fits
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double dyadic_pvar_sum(const SamplePath& x, double p, int level) {
    if (!(p > 0)) throw ParameterError("p must be positive");
    if (level < 0) throw ParameterError("dyadic level must be non-negative");
    const Eigen::Index cells = Eigen::Index(1) << level;
    const double h = 1.0 / static_cast<double>(cells);
    double sum = 0;
    Eigen::Index prev = x.index_of(0.0);
    for (Eigen::Index j = 1; j <= cells; ++j) {
        const Eigen::Index cur = x.index_of(static_cast<double>(j) * h);
        sum += std::pow((x.values.row(cur) - x.values.row(prev)).norm(), p);
        prev = cur;
    }
    return sum;
}

Eigen::Index TwoParamGerm::index_of(double t) const {
    const Eigen::Index k = find_exact(times, t);
    if (k < 0) throw GridError("time " + std::to_string(t) + " is not on the germ grid");
    return k;
}

Eigen::VectorXd TwoParamGerm::operator()(double s, double t) const {
    const Eigen::Index i = index_of(s), j = index_of(t);
    if (i > j) throw OrderError("germ arguments must satisfy s <= t");
    return eval(i, j);
}

Eigen::VectorXd germ_delta_idx(const TwoParamGerm& xi, Eigen::Index i, Eigen::Index k, Eigen::Index j) {
    if (!(i <= k && k <= j)) throw OrderError("germ_delta requires s <= u <= t");
    return xi.eval(i, j) - xi.eval(i, k) - xi.eval(k, j);
}

Eigen::VectorXd germ_delta(const TwoParamGerm& xi, double s, double u, double t) {
    return germ_delta_idx(xi, xi.index_of(s), xi.index_of(u), xi.index_of(t));
}

TwoParamGerm additive_germ(const SamplePath& x) {
    TwoParamGerm g;
    g.times = x.times;
    g.dim = x.dimension();
    auto values = std::make_shared<Eigen::MatrixXd>(x.values);
    g.eval = [values](Eigen::Index i, Eigen::Index j) -> Eigen::VectorXd {
        return (values->row(j) - values->row(i)).transpose();
    };
    return g;
}

}  // namespace roughkit
