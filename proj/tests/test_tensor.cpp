#include <doctest.h>

#include <cmath>
#include <random>

#include "roughkit/tensor.hpp"

using namespace roughkit;

namespace {

// Independent oracle for the truncated product: word-indexed convolution,
// coefficient of w in a*b = sum over splittings w = uv of a[u] b[v].
std::map<Word, double> to_word_map(const Tensor& t) {
    std::map<Word, double> out;
    for (int n = 0; n <= t.depth(); ++n) {
        const auto words = all_words(t.dimension(), n);
        for (const auto& w : words) {
            const double c = t.level(n)(word_index(w, t.dimension()));
            if (c != 0.0) out[w] = c;
        }
    }
    return out;
}

std::map<Word, double> word_mul_oracle(const std::map<Word, double>& a, const std::map<Word, double>& b,
                                       int depth) {
    std::map<Word, double> out;
    for (const auto& [u, cu] : a)
        for (const auto& [v, cv] : b) {
            if (u.size() + v.size() > depth) continue;
            std::vector<int> letters = u.letters;
            letters.insert(letters.end(), v.letters.begin(), v.letters.end());
            out[Word(letters)] += cu * cv;
        }
    return out;
}

Tensor random_tensor(int d, int depth, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor t(d, depth);
    for (int n = 0; n <= depth; ++n)
        for (Eigen::Index i = 0; i < t.level(n).size(); ++i) t.level(n)(i) = u(rng);
    return t;
}

double max_level_diff(const Tensor& a, const Tensor& b) {
    double m = 0;
    for (int n = 0; n <= a.depth(); ++n) m = std::max(m, (a.level(n) - b.level(n)).norm());
    return m;
}

long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("tensor_mul: unit law") {
    std::mt19937_64 rng(11);
    for (int d = 1; d <= 3; ++d) {
        const Tensor a = random_tensor(d, 4, rng);
        const Tensor unit = Tensor::unit(d, 4);
        CHECK(max_level_diff(tensor_mul(unit, a), a) == 0.0);
        CHECK(max_level_diff(tensor_mul(a, unit), a) == 0.0);
    }
}

TEST_CASE("tensor_mul: d=1 depth-2 closed form (1,x,p)(1,y,q)") {
    // Brute-force convolution oracle gives (1, x+y, p+q+xy).
    const double x = 0.7, p = -0.3, y = 1.9, q = 0.25;
    Tensor a = Tensor::unit(1, 2), b = Tensor::unit(1, 2);
    a.level(1)(0) = x;
    a.level(2)(0) = p;
    b.level(1)(0) = y;
    b.level(2)(0) = q;
    const Tensor ab = tensor_mul(a, b);
    CHECK(ab.level(0)(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ab.level(1)(0) == doctest::Approx(x + y).epsilon(1e-15));
    CHECK(ab.level(2)(0) == doctest::Approx(p + q + x * y).epsilon(1e-15));
}

TEST_CASE("tensor_mul agrees with the word-convolution oracle") {
    std::mt19937_64 rng(29);
    for (int d = 1; d <= 3; ++d) {
        const Tensor a = random_tensor(d, 3, rng);
        const Tensor b = random_tensor(d, 3, rng);
        const auto oracle = word_mul_oracle(to_word_map(a), to_word_map(b), 3);
        const Tensor ab = tensor_mul(a, b);
        for (const auto& [w, c] : oracle)
            CHECK(ab.level(w.size())(word_index(w, d)) == doctest::Approx(c).epsilon(1e-13));
    }
}

TEST_CASE("exp_tensor: zero increment gives the unit") {
    const Tensor e = exp_tensor(Eigen::VectorXd::Zero(3), 4);
    CHECK(max_level_diff(e, Tensor::unit(3, 4)) == 0.0);
}

TEST_CASE("exp_tensor: d=1, v=2, N=3 gives (1, 2, 2, 4/3)") {
    Eigen::VectorXd v(1);
    v << 2.0;
    const Tensor e = exp_tensor(v, 3);
    CHECK(e.level(0)(0) == doctest::Approx(1.0));
    CHECK(e.level(1)(0) == doctest::Approx(2.0));
    CHECK(e.level(2)(0) == doctest::Approx(2.0));
    CHECK(e.level(3)(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("exp_tensor: exp(v) exp(-v) = unit at N=3 (series-multiplication oracle)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int d = 1; d <= 3; ++d) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v(i) = u(rng);
        const Tensor prod = tensor_mul(exp_tensor(v, 3), exp_tensor(-v, 3));
        CHECK(max_level_diff(prod, Tensor::unit(d, 3)) < 1e-14);
        // independent check through the word oracle
        const auto oracle = word_mul_oracle(to_word_map(exp_tensor(v, 3)), to_word_map(exp_tensor(-v, 3)), 3);
        for (const auto& [w, c] : oracle)
            if (w.size() > 0) CHECK(std::abs(c) < 1e-14);
    }
}

TEST_CASE("tensor_inverse: group inverse of a group-like element") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(2);
    v << u(rng), u(rng);
    const Tensor g = exp_tensor(v, 4);
    const Tensor prod = tensor_mul(g, tensor_inverse(g));
    CHECK(max_level_diff(prod, Tensor::unit(2, 4)) <= 1e-14);
    // for a one-segment signature the inverse is the reversed segment
    CHECK(max_level_diff(tensor_inverse(g), exp_tensor(-v, 4)) <= 1e-14);
    Tensor not_group = g;
    not_group.level(0)(0) = 2.0;
    CHECK_THROWS_AS(tensor_inverse(not_group), ParameterError);
}

TEST_CASE("exp_tensor one-parameter subgroup: colinear increments compose") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 1 + rep % 3;
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v(i) = u(rng);
        const double c = u(rng);
        const Tensor lhs = tensor_mul(exp_tensor(v, 5), exp_tensor(c * v, 5));
        const Tensor rhs = exp_tensor((1.0 + c) * v, 5);
        CHECK(max_level_diff(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("tensor_mul associativity: exact for integer coefficients") {
    using ITensor = TruncatedTensor<long long>;
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<long long> u(-4, 4);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 1 + rep % 3;
        ITensor a(d, 4), b(d, 4), c(d, 4);
        for (ITensor* t : {&a, &b, &c})
            for (int n = 0; n <= 4; ++n)
                for (Eigen::Index i = 0; i < t->level(n).size(); ++i) t->level(n)(i) = u(rng);
        const ITensor lhs = tensor_mul(tensor_mul(a, b), c);
        const ITensor rhs = tensor_mul(a, tensor_mul(b, c));
        for (int n = 0; n <= 4; ++n) CHECK(lhs.level(n) == rhs.level(n));
    }
}

TEST_CASE("tensor_mul associativity: 1e-12 relative for floats, d<=3, N<=5") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 1 + rep % 3;
        const int depth = 2 + rep % 4;
        const Tensor a = random_tensor(d, depth, rng);
        const Tensor b = random_tensor(d, depth, rng);
        const Tensor c = random_tensor(d, depth, rng);
        const Tensor lhs = tensor_mul(tensor_mul(a, b), c);
        const Tensor rhs = tensor_mul(a, tensor_mul(b, c));
        double scale = 1.0;
        for (int n = 0; n <= depth; ++n) scale = std::max(scale, lhs.level_norm(n));
        CHECK(max_level_diff(lhs, rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("tensor_mul: shape mismatch raises a dimension error") {
    CHECK_THROWS_AS(tensor_mul(Tensor::unit(2, 3), Tensor::unit(3, 3)), DimensionError);
    CHECK_THROWS_AS(tensor_mul(Tensor::unit(2, 3), Tensor::unit(2, 4)), DepthError);
}

TEST_CASE("shuffle: worked examples") {
    const auto s1 = shuffle(Word::from_string("12"), Word::from_string("3"));
    CHECK(s1.str() == "123+132+312");

    const auto s2 = shuffle(Word::from_string("12"), Word::from_string("24"));
    CHECK(s2.coefficient(Word::from_string("1224")) == 2.0);
    CHECK(s2.coefficient(Word::from_string("1242")) == 1.0);
    CHECK(s2.coefficient(Word::from_string("2124")) == 1.0);
    CHECK(s2.coefficient(Word::from_string("2142")) == 1.0);
    CHECK(s2.coefficient(Word::from_string("2412")) == 1.0);
    CHECK(s2.size() == 5);

    // u shuffled with the empty word is u
    const Word u = Word::from_string("312");
    const auto s3 = shuffle(u, Word());
    CHECK(s3.size() == 1);
    CHECK(s3.coefficient(u) == 1.0);
}

TEST_CASE("shuffle: commutativity and coefficient mass") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> letter(1, 3);
    for (int rep = 0; rep < 60; ++rep) {
        const int lu = rep % 4, lv = (rep / 4) % 4;
        if (lu + lv > 6) continue;
        std::vector<int> ul(lu), vl(lv);
        for (auto& l : ul) l = letter(rng);
        for (auto& l : vl) l = letter(rng);
        const Word u{ul}, v{vl};
        const auto uv = shuffle(u, v);
        const auto vu = shuffle(v, u);
        CHECK(uv.terms() == vu.terms());
        CHECK(uv.coefficient_mass() == static_cast<double>(binomial(lu + lv, lu)));
    }
}

TEST_CASE("pairing: unit coefficient and level-1 projection") {
    Eigen::VectorXd v(3);
    v << 0.4, -1.1, 2.0;
    const Tensor sig = exp_tensor(v, 3);
    CHECK(pairing(Word(), sig) == doctest::Approx(1.0));
    for (int i = 1; i <= 3; ++i)
        CHECK(pairing(Word({std::vector<int>{i}}), sig) == doctest::Approx(v(i - 1)));
}

TEST_CASE("pairing: bilinearity to 1e-12") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Tensor x = random_tensor(2, 3, rng);
    FormalWordSum l1, l2;
    l1.add(Word::from_string("12"), 1.5);
    l1.add(Word::from_string("2"), -0.5);
    l2.add(Word::from_string("112"), 2.0);
    l2.add(Word(), 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const double a = u(rng), b = u(rng);
        const double lhs = pairing(l1 * a + l2 * b, x);
        const double rhs = a * pairing(l1, x) + b * pairing(l2, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("pairing: word longer than the depth raises a depth error") {
    const Tensor x = Tensor::unit(2, 2);
    CHECK_THROWS_AS(pairing(Word::from_string("121"), x), DepthError);
}

TEST_CASE("shuffle identity on one-segment signatures") {
    // exp_tensor is the signature of a linear segment, hence group-like:
    // <l1,S><l2,S> = <l1 sh l2, S>.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(2);
    v << u(rng), u(rng);
    const Tensor sig = exp_tensor(v, 5);
    for (const auto& [wu, wv] : std::vector<std::pair<std::string, std::string>>{
             {"1", "2"}, {"12", "2"}, {"11", "22"}, {"121", "21"}}) {
        const Word a = Word::from_string(wu), b = Word::from_string(wv);
        const double lhs = pairing(a, sig) * pairing(b, sig);
        const double rhs = pairing(shuffle(a, b), sig);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("word helpers") {
    CHECK(Word::from_string("121").str() == "121");
    CHECK_THROWS_AS(Word::from_string("1a"), FormatError);
    CHECK(word_index(Word::from_string("11"), 2) == 0);
    CHECK(word_index(Word::from_string("12"), 2) == 1);
    CHECK(word_index(Word::from_string("21"), 2) == 2);
    CHECK(word_index(Word::from_string("22"), 2) == 3);
    CHECK_THROWS_AS(word_index(Word::from_string("3"), 2), DimensionError);
    CHECK(all_words(3, 2).size() == 9);
}
