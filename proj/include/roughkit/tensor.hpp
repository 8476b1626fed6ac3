#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "roughkit/errors.hpp"

namespace roughkit {

// Element of the truncated tensor algebra over R^d, levels 0..N stored as
// dense coefficient blocks in lexicographic multi-index order (block n has
// d^n entries). Values are immutable in spirit: every operation returns a
// fresh tensor.
template <typename Scalar>
class TruncatedTensor {
public:
    using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    TruncatedTensor() : dim_(1), depth_(0) { levels_.emplace_back(Block::Zero(1)); }

    TruncatedTensor(int dim, int depth) : dim_(dim), depth_(depth) {
        if (dim < 1) throw DimensionError("tensor dimension must be positive");
        if (depth < 0) throw DepthError("tensor depth must be non-negative");
        Eigen::Index size = 1;
        levels_.reserve(depth + 1);
        for (int n = 0; n <= depth; ++n) {
            levels_.emplace_back(Block::Zero(size));
            size *= dim;
        }
    }

    static TruncatedTensor unit(int dim, int depth) {
        TruncatedTensor t(dim, depth);
        t.levels_[0](0) = Scalar(1);
        return t;
    }

    int dimension() const { return dim_; }
    int depth() const { return depth_; }

    const Block& level(int n) const {
        check_level(n);
        return levels_[n];
    }
    Block& level(int n) {
        check_level(n);
        return levels_[n];
    }

    Scalar scalar_part() const { return levels_[0](0); }

    // Frobenius norm of one coefficient block; the levelwise norm used
    // throughout (homogeneous norm, metrics, decay fits).
    double level_norm(int n) const {
        check_level(n);
        double s = 0;
        for (Eigen::Index i = 0; i < levels_[n].size(); ++i) {
            const double v = static_cast<double>(levels_[n](i));
            s += v * v;
        }
        return std::sqrt(s);
    }

    bool same_shape(const TruncatedTensor& other) const {
        return dim_ == other.dim_ && depth_ == other.depth_;
    }

    TruncatedTensor& operator+=(const TruncatedTensor& rhs) {
        require_same_shape(rhs);
        for (int n = 0; n <= depth_; ++n) levels_[n] += rhs.levels_[n];
        return *this;
    }
    TruncatedTensor& operator-=(const TruncatedTensor& rhs) {
        require_same_shape(rhs);
        for (int n = 0; n <= depth_; ++n) levels_[n] -= rhs.levels_[n];
        return *this;
    }
    TruncatedTensor& operator*=(Scalar c) {
        for (auto& b : levels_) b *= c;
        return *this;
    }

    friend TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
    friend TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b) { return a -= b; }
    friend TruncatedTensor operator*(TruncatedTensor a, Scalar c) { return a *= c; }
    friend TruncatedTensor operator*(Scalar c, TruncatedTensor a) { return a *= c; }

    void require_same_shape(const TruncatedTensor& other) const {
        if (dim_ != other.dim_)
            throw DimensionError("tensor dimensions differ: " + std::to_string(dim_) + " vs " +
                                 std::to_string(other.dim_));
        if (depth_ != other.depth_)
            throw DepthError("tensor depths differ: " + std::to_string(depth_) + " vs " +
                             std::to_string(other.depth_));
    }

private:
    void check_level(int n) const {
        if (n < 0 || n > depth_) throw DepthError("tensor level " + std::to_string(n) + " out of range");
    }

    int dim_;
    int depth_;
    std::vector<Block> levels_;
};

// Truncated tensor product: level n of the result is the convolution
// sum_{i+j=n} level_i(a) (x) level_j(b); everything above the common depth
// is discarded.
template <typename Scalar>
TruncatedTensor<Scalar> tensor_mul(const TruncatedTensor<Scalar>& a, const TruncatedTensor<Scalar>& b) {
    a.require_same_shape(b);
    const int d = a.dimension();
    const int N = a.depth();
    TruncatedTensor<Scalar> out(d, N);
    for (int n = 0; n <= N; ++n) {
        auto& target = out.level(n);
        for (int i = 0; i <= n; ++i) {
            const auto& left = a.level(i);
            const auto& right = b.level(n - i);
            const Eigen::Index q = right.size();
            for (Eigen::Index r = 0; r < left.size(); ++r) {
                if (left(r) == Scalar(0)) continue;
                target.segment(r * q, q) += left(r) * right;
            }
        }
    }
    return out;
}

// exp of a level-1 element: level n = v^{(x)n} / n!. This is the signature of
// a single linear segment with increment v.
inline TruncatedTensor<double> exp_tensor(const Eigen::VectorXd& v, int depth) {
    const int d = static_cast<int>(v.size());
    if (d < 1) throw DimensionError("exp_tensor needs a non-empty level-1 vector");
    TruncatedTensor<double> out = TruncatedTensor<double>::unit(d, depth);
    if (depth >= 1) out.level(1) = v;
    for (int n = 2; n <= depth; ++n) {
        const auto& prev = out.level(n - 1);
        auto& cur = out.level(n);
        for (Eigen::Index r = 0; r < prev.size(); ++r)
            cur.segment(r * d, d) = prev(r) / static_cast<double>(n) * v;
    }
    return out;
}

// Group inverse of a group-like element (scalar part 1): truncated Neumann
// series of 1/(1 + x).
template <typename Scalar>
TruncatedTensor<Scalar> tensor_inverse(const TruncatedTensor<Scalar>& a) {
    if (a.scalar_part() != Scalar(1))
        throw ParameterError("tensor_inverse requires scalar part 1");
    const int d = a.dimension();
    const int N = a.depth();
    TruncatedTensor<Scalar> x = a;
    x.level(0)(0) = Scalar(0);  // strictly positive levels
    TruncatedTensor<Scalar> out = TruncatedTensor<Scalar>::unit(d, N);
    TruncatedTensor<Scalar> power = TruncatedTensor<Scalar>::unit(d, N);
    for (int k = 1; k <= N; ++k) {
        power = tensor_mul(power, x);
        out += (k % 2 == 0 ? Scalar(1) : Scalar(-1)) * power;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Words and formal word sums: the dual side of the signature pairing.
// ---------------------------------------------------------------------------

// Multi-index over the alphabet {1..d}; the empty word is allowed.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> l) : letters(std::move(l)) { validate(); }

    // Parse "123" into the word (1,2,3); single-digit letters only, which
    // covers every desk-scale alphabet here (d <= 9).
    static Word from_string(const std::string& s) {
        std::vector<int> l;
        l.reserve(s.size());
        for (char c : s) {
            if (c < '1' || c > '9') throw FormatError("word letters must be digits 1..9, got '" + std::string(1, c) + "'");
            l.push_back(c - '0');
        }
        return Word(std::move(l));
    }

    std::string str() const {
        std::string s;
        for (int l : letters) s += static_cast<char>('0' + l);
        return s;
    }

    int size() const { return static_cast<int>(letters.size()); }
    bool empty() const { return letters.empty(); }

    Word append(int letter) const {
        Word w = *this;
        w.letters.push_back(letter);
        return w;
    }
    Word drop_last() const {
        Word w = *this;
        w.letters.pop_back();
        return w;
    }

    bool operator<(const Word& o) const { return letters < o.letters; }
    bool operator==(const Word& o) const { return letters == o.letters; }

private:
    void validate() const {
        for (int l : letters)
            if (l < 1) throw ParameterError("word letters must lie in 1..d");
    }
};

// Flat index of a word inside its level block (lexicographic order).
inline Eigen::Index word_index(const Word& w, int dim) {
    Eigen::Index idx = 0;
    for (int l : w.letters) {
        if (l > dim) throw DimensionError("word letter " + std::to_string(l) + " exceeds alphabet size " + std::to_string(dim));
        idx = idx * dim + (l - 1);
    }
    return idx;
}

// Finitely supported scalar combination of words; zero coefficients are
// never stored.
class FormalWordSum {
public:
    using Map = std::map<Word, double>;

    FormalWordSum() = default;
    explicit FormalWordSum(const Word& w, double c = 1.0) { add(w, c); }

    void add(const Word& w, double c) {
        if (c == 0.0) return;
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    double coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? 0.0 : it->second;
    }

    double coefficient_mass() const {
        double s = 0;
        for (const auto& [w, c] : terms_) s += c;
        return s;
    }

    FormalWordSum& operator+=(const FormalWordSum& rhs) {
        for (const auto& [w, c] : rhs.terms_) add(w, c);
        return *this;
    }
    FormalWordSum& operator*=(double c) {
        if (c == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, coeff] : terms_) coeff *= c;
        return *this;
    }
    friend FormalWordSum operator+(FormalWordSum a, const FormalWordSum& b) { return a += b; }
    friend FormalWordSum operator*(FormalWordSum a, double c) { return a *= c; }
    friend FormalWordSum operator*(double c, FormalWordSum a) { return a *= c; }

    // Renders "123+132+312" / "2*1224+1242"; the empty word prints as "e".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [w, c] : terms_) {
            if (!first) out += "+";
            first = false;
            if (c != 1.0) {
                char buf[64];
                if (c == static_cast<long long>(c))
                    std::snprintf(buf, sizeof(buf), "%lld*", static_cast<long long>(c));
                else
                    std::snprintf(buf, sizeof(buf), "%.17g*", c);
                out += buf;
            }
            out += w.empty() ? "e" : w.str();
        }
        return out;
    }

private:
    Map terms_;
};

namespace detail {

using IntWordMap = std::map<Word, std::int64_t>;

// Recursive shuffle on bare words with exact integer coefficients:
//   u # empty = empty # u = u,   ua # vb = (u # vb)a + (ua # v)b.
inline IntWordMap shuffle_words(const Word& u, const Word& v) {
    IntWordMap out;
    if (u.empty()) {
        out[v] = 1;
        return out;
    }
    if (v.empty()) {
        out[u] = 1;
        return out;
    }
    const int a = u.letters.back();
    const int b = v.letters.back();
    for (const auto& [w, c] : shuffle_words(u.drop_last(), v)) out[w.append(a)] += c;
    for (const auto& [w, c] : shuffle_words(u, v.drop_last())) out[w.append(b)] += c;
    return out;
}

}  // namespace detail

// Shuffle product of two words. Coefficients are computed exactly as
// integers; the total coefficient mass is binomial(|u|+|v|, |u|).
inline FormalWordSum shuffle(const Word& u, const Word& v) {
    FormalWordSum out;
    for (const auto& [w, c] : detail::shuffle_words(u, v)) out.add(w, static_cast<double>(c));
    return out;
}

// Bilinear extension to formal word sums.
inline FormalWordSum shuffle(const FormalWordSum& l1, const FormalWordSum& l2) {
    FormalWordSum out;
    for (const auto& [u, cu] : l1.terms())
        for (const auto& [v, cv] : l2.terms())
            for (const auto& [w, c] : detail::shuffle_words(u, v)) out.add(w, cu * cv * static_cast<double>(c));
    return out;
}

// Pairing <l, X>: sum over words of coeff(w) times the coefficient of w in X.
template <typename Scalar>
double pairing(const FormalWordSum& l, const TruncatedTensor<Scalar>& x) {
    double out = 0;
    for (const auto& [w, c] : l.terms()) {
        if (w.size() > x.depth())
            throw DepthError("pairing: word of length " + std::to_string(w.size()) +
                             " exceeds tensor depth " + std::to_string(x.depth()));
        out += c * static_cast<double>(x.level(w.size())(word_index(w, x.dimension())));
    }
    return out;
}

template <typename Scalar>
double pairing(const Word& w, const TruncatedTensor<Scalar>& x) {
    return pairing(FormalWordSum(w), x);
}

// Row-major flattening: entry (i,j) of a d x d matrix becomes the
// coefficient of the word (i+1, j+1) in a level-2 block.
inline Eigen::VectorXd vec_rowmajor(const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v(k++) = m(r, c);
    return v;
}

inline Eigen::MatrixXd mat_rowmajor(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) throw DimensionError("flat block size does not match matrix shape");
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v(k++);
    return m;
}

// All words over {1..d} of the given length, in lexicographic order.
inline std::vector<Word> all_words(int dim, int length) {
    std::vector<Word> out;
    if (length == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> cur(length, 1);
    while (true) {
        out.emplace_back(Word(cur));
        int k = length - 1;
        while (k >= 0 && cur[k] == dim) {
            cur[k] = 1;
            --k;
        }
        if (k < 0) break;
        ++cur[k];
    }
    return out;
}

using Tensor = TruncatedTensor<double>;

}  // namespace roughkit
