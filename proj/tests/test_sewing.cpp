#include <doctest.h>

#include <cmath>
#include <random>

#include "roughkit/lift.hpp"
#include "roughkit/sewing.hpp"
#include "roughkit/stats.hpp"
#include "roughkit/young.hpp"

using namespace roughkit;

namespace {

// Independent zeta oracle: partial sum with Euler-Maclaurin tail through
// the K^{-beta-3} term.
double zeta_euler_maclaurin(double beta, long long K = 2000) {
    double sum = 0;
    for (long long n = K; n >= 1; --n) sum += std::pow(static_cast<double>(n), -beta);
    const double k = static_cast<double>(K);
    sum += std::pow(k, 1.0 - beta) / (beta - 1.0) - 0.5 * std::pow(k, -beta) +
           beta / 12.0 * std::pow(k, -beta - 1.0) -
           beta * (beta + 1.0) * (beta + 2.0) / 720.0 * std::pow(k, -beta - 3.0);
    return sum;
}

// Random C^1 trig polynomial with seeded bounded coefficients.
std::function<double(double)> random_smooth(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a0 = u(rng), a1 = u(rng), a2 = u(rng), p1 = u(rng), p2 = u(rng);
    return [=](double t) {
        return a0 + a1 * std::sin(M_PI * t + p1) + 0.5 * a2 * std::sin(2 * M_PI * t + p2);
    };
}

OperatorPath scalar_operator_path(const SamplePath& f) {
    std::vector<Eigen::MatrixXd> values(f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k) values[k] = f.values.row(k).transpose().eval();
    return {f.times, values};
}

}  // namespace

TEST_CASE("sew: additive germ is partition independent") {
    const Eigen::VectorXd t = dyadic_times(6);
    const SamplePath x = sample_scalar_function(t, [](double s) { return std::sin(5 * s); });
    const TwoParamGerm xi = additive_germ(x);
    const Eigen::VectorXd expected = increment(x, 0.0, 1.0);
    for (const auto& part : std::vector<std::vector<double>>{
             {0.0, 1.0}, {0.0, 0.5, 1.0}, {0.0, 0.25, 0.375, 0.8125, 1.0}}) {
        CHECK((sew(xi, part) - expected).norm() <= 1e-15);
    }
    CHECK_THROWS_AS(sew(xi, {0.0, 0.3, 1.0}), GridError);        // off-grid point
    CHECK_THROWS_AS(sew(xi, {0.5, 0.25, 1.0}), PartitionError);  // not increasing
    // interval-checked variant: partition must cover [s, t]
    CHECK((sew(xi, 0.0, 1.0, {0.0, 0.5, 1.0}) - expected).norm() <= 1e-15);
    CHECK_THROWS_AS(sew(xi, 0.0, 1.0, {0.0, 0.5}), PartitionError);
}

TEST_CASE("sew: left Riemann germ of int t dt on a uniform mesh gives (1 - 1/n)/2") {
    for (const int n : {4, 16, 64}) {
        const Eigen::VectorXd t = uniform_times(0.0, 1.0, n);
        const SamplePath id = sample_scalar_function(t, [](double s) { return s; });
        const TwoParamGerm xi = young_germ(scalar_operator_path(id), id, YoungQuadrature::left);
        std::vector<double> part(t.data(), t.data() + t.size());
        CHECK(sew(xi, part)(0) == doctest::Approx((1.0 - 1.0 / n) / 2.0).epsilon(1e-13));
    }
}

TEST_CASE("sew: extension germ converges to the canonical third level") {
    // Smooth arc lifted to depth 2; sewing the level-3 germ over [0,T]
    // approaches the canonical (exact piecewise-linear) level 3.
    const Eigen::VectorXd t = mesh_times(0.0, M_PI / 2.0, std::ldexp(1.0, -11));
    const SamplePath arc = sample_function(t, [](double s) {
        Eigen::VectorXd v(2);
        v << std::cos(s), std::sin(s);
        return v;
    });
    const RoughPath lift2 = canonical_lift(arc, 2);
    const TwoParamGerm xi = extension_germ(lift2, 3);
    const SewReport sewn = sew_refined(xi, 0.0, t(t.size() - 1), SewOptions{40, 0.0});
    CHECK(sewn.grid_exhausted);

    const Tensor oracle = canonical_lift(arc, 3).evaluate(0.0, t(t.size() - 1));
    const double rel = (sewn.value - oracle.level(3)).norm() / oracle.level(3).norm();
    CHECK(rel <= 1e-6);
}

TEST_CASE("sew_refined: additive germ has zero cauchy gap at every level") {
    const Eigen::VectorXd t = dyadic_times(8);
    const SamplePath x = sample_scalar_function(t, [](double s) { return std::cos(3 * s); });
    const SewReport r = sew_refined(additive_germ(x), 0.0, 1.0, SewOptions{40, 0.0});
    for (double g : r.level_gaps) CHECK(g <= 1e-14);
}

TEST_CASE("sew_refined: Young C^1 germ gaps halve per level (beta = 2)") {
    std::mt19937_64 rng(71);
    std::vector<double> slopes;
    for (int rep = 0; rep < 5; ++rep) {
        const Eigen::VectorXd t = dyadic_times(10);
        const SamplePath f = sample_scalar_function(t, random_smooth(rng));
        const SamplePath g = sample_scalar_function(t, random_smooth(rng));
        const TwoParamGerm xi = young_germ(scalar_operator_path(f), g, YoungQuadrature::left);
        const SewReport r = sew_refined(xi, 0.0, 1.0, SewOptions{40, 0.0});
        REQUIRE(r.level_gaps.size() >= 8);
        std::vector<double> xs, ys;
        for (std::size_t k = 2; k < r.level_gaps.size(); ++k) {
            if (r.level_gaps[k] <= 0) continue;
            xs.push_back(static_cast<double>(k));
            ys.push_back(std::log2(r.level_gaps[k]));
        }
        slopes.push_back(linear_fit(xs, ys).slope);
    }
    // gap ~ mesh^{beta-1} = 2^{-k}: slope -(beta-1) = -1 within +-0.15
    for (double s : slopes) CHECK(s == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("sew_refined: Brownian rough-integral germ gaps decay at beta = 3 alpha" *
          doctest::timeout(120)) {
    // Controlled integrand sin(B^1), cos(B^2) against a level-2 Brownian
    // lift; median slope over 32 seeds in a +-0.2 band around -(3a - 1).
    const double alpha = 0.45;
    std::vector<double> slopes;
    for (int seed = 0; seed < 32; ++seed) {
        const RoughPath b = brownian_lift(dyadic_times(10), 4, BrownianMode::strat, 1000 + seed, 2, alpha);
        const SamplePath bp = b.level1_path();
        TwoParamGerm xi;
        xi.times = b.times;
        xi.dim = 1;
        auto lift = std::make_shared<RoughPath>(b);
        auto path = std::make_shared<SamplePath>(bp);
        xi.eval = [lift, path](Eigen::Index i, Eigen::Index j) {
            const Tensor inc = lift->evaluate_idx(i, j);
            Eigen::MatrixXd y(1, 2);
            y << std::sin(path->values(i, 0)), std::cos(path->values(i, 1));
            Eigen::MatrixXd yp(1, 4);  // (direction i, column j) -> i*2+j
            yp << std::cos(path->values(i, 0)), 0.0, 0.0, -std::sin(path->values(i, 1));
            Eigen::VectorXd out = y * inc.level(1) + yp * inc.level(2);
            return out;
        };
        const SewReport r = sew_refined(xi, 0.0, 1.0, SewOptions{40, 0.0});
        std::vector<double> xs, ys;
        for (std::size_t k = 3; k < std::min<std::size_t>(r.level_gaps.size(), 10); ++k) {
            if (r.level_gaps[k] <= 0) continue;
            xs.push_back(static_cast<double>(k));
            ys.push_back(std::log2(r.level_gaps[k]));
        }
        slopes.push_back(linear_fit(xs, ys).slope);
    }
    const double med = median(slopes);
    CHECK(med == doctest::Approx(-(3 * alpha - 1)).epsilon(0.2 / 0.35));
}

TEST_CASE("sewing uniqueness surrogate: refinement families agree within gaps") {
    const Eigen::VectorXd t = dyadic_times(10);
    std::mt19937_64 rng(5);
    const SamplePath f = sample_scalar_function(t, random_smooth(rng));
    const SamplePath g = sample_scalar_function(t, random_smooth(rng));
    const TwoParamGerm xi = young_germ(scalar_operator_path(f), g, YoungQuadrature::left);
    // two different base partitions, truncated refinement budgets
    const SewReport a = sew_refined(xi, 0.0, 1.0, std::vector<double>{0.0, 1.0}, SewOptions{7, 0.0});
    const SewReport b =
        sew_refined(xi, 0.0, 1.0, std::vector<double>{0.0, 0.25, 0.375, 1.0}, SewOptions{7, 0.0});
    CHECK((a.value - b.value).norm() <= 2 * (a.cauchy_gap + b.cauchy_gap));
}

TEST_CASE("sewing_constant: beta = 2 equals 2 pi^2/3 - 3") {
    CHECK(sewing_constant(2.0) == doctest::Approx(2.0 * M_PI * M_PI / 3.0 - 3.0).epsilon(1e-12));
    CHECK(riemann_zeta(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
}

TEST_CASE("sewing_constant: monotone decay towards the tail limit 2") {
    // zeta(beta) - 1 ~ 2^-beta, so 2^beta (zeta(beta)-1) + 1 -> 2 from above.
    double prev = sewing_constant(1.2);
    for (double beta : {1.5, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0}) {
        const double c = sewing_constant(beta);
        CHECK(c < prev);
        CHECK(c > 2.0);
        prev = c;
    }
    // at beta = 40 the (2/3)^beta correction underflows double precision
    CHECK(sewing_constant(40.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(sewing_constant(1.0), ParameterError);
    CHECK_THROWS_AS(riemann_zeta(0.5), ParameterError);
}

TEST_CASE("riemann_zeta: cross-check against the Euler-Maclaurin oracle") {
    for (double beta : {1.5, 1.35, 2.5, 3.0, 6.0})
        CHECK(riemann_zeta(beta) == doctest::Approx(zeta_euler_maclaurin(beta)).epsilon(1e-10));
}

TEST_CASE("sewing_bound_check: additive germ has lhs 0") {
    const Eigen::VectorXd t = dyadic_times(6);
    const SamplePath x = sample_scalar_function(t, [](double s) { return std::sin(2 * s); });
    const SewingBoundReport r = sewing_bound_check(additive_germ(x), 2.0, 0.0, 1.0);
    CHECK(r.lhs <= 1e-14);
    CHECK(r.holds);
}

TEST_CASE("sewing_bound_check: 100 random smooth Young germs at beta = 2") {
    std::mt19937_64 rng(123);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::VectorXd t = dyadic_times(7);
        const SamplePath f = sample_scalar_function(t, random_smooth(rng));
        const SamplePath g = sample_scalar_function(t, random_smooth(rng));
        const TwoParamGerm xi = young_germ(scalar_operator_path(f), g, YoungQuadrature::left);
        const SewingBoundReport r = sewing_bound_check(xi, 2.0, 0.0, 1.0);
        CHECK(r.holds);
    }
}

TEST_CASE("germ_delta_norm: capped triple scan stays close to the full scan") {
    std::mt19937_64 rng(9);
    const Eigen::VectorXd t = dyadic_times(7);
    const SamplePath f = sample_scalar_function(t, random_smooth(rng));
    const SamplePath g = sample_scalar_function(t, random_smooth(rng));
    const TwoParamGerm xi = young_germ(scalar_operator_path(f), g, YoungQuadrature::left);
    const double full = germ_delta_norm(xi, 2.0, 0.0, 1.0);
    const double capped = germ_delta_norm(xi, 2.0, 0.0, 1.0, 1);
    CHECK(capped <= full * (1 + 1e-12));
    CHECK(capped >= 0.25 * full);  // midpoint triples carry the bulk of the sup
}
