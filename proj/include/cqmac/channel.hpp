#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqmac/distribution.hpp"
#include "cqmac/quantum.hpp"

namespace cqmac {

// Finite input alphabet; symbols are free-form strings.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw validation_error("alphabet must be nonempty");
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            for (std::size_t j = i + 1; j < symbols_.size(); ++j)
                if (symbols_[i] == symbols_[j])
                    throw validation_error("alphabet symbols must be distinct: " + symbols_[i]);
    }

    static Alphabet indexed(std::size_t n, const std::string& prefix = "") {
        std::vector<std::string> s;
        for (std::size_t i = 0; i < n; ++i) s.push_back(prefix + std::to_string(i));
        return Alphabet(std::move(s));
    }

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    std::optional<std::size_t> index_of(const std::string& s) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i] == s) return i;
        return std::nullopt;
    }

private:
    std::vector<std::string> symbols_;
};

// k-letter input as a tuple of symbol indices. Tuples are never expanded
// into materialized k-fold alphabets.
using Word = std::vector<std::size_t>;

inline std::size_t pow_size(std::size_t base, int k) {
    std::size_t v = 1;
    for (int i = 0; i < k; ++i) v *= base;
    return v;
}

inline std::size_t word_to_index(const Word& w, std::size_t alphabet_size) {
    std::size_t idx = 0;
    for (std::size_t s : w) {
        if (s >= alphabet_size) throw validation_error("word symbol index out of alphabet range");
        idx = idx * alphabet_size + s;
    }
    return idx;
}

inline Word index_to_word(std::size_t idx, std::size_t alphabet_size, int k) {
    Word w(static_cast<std::size_t>(k), 0);
    for (int i = k; i-- > 0;) {
        w[static_cast<std::size_t>(i)] = idx % alphabet_size;
        idx /= alphabet_size;
    }
    return w;
}

// Two classical senders, one quantum receiver. A channel object is either a
// base (k = 1) table of outputs or a memoryless k-fold extension of one;
// extended outputs are tensor products computed on demand and memoized.
class CCQChannel {
public:
    CCQChannel(Alphabet x, Alphabet y, std::size_t dim, std::vector<DensityOperator> outputs)
        : impl_(std::make_shared<const Impl>(Impl{std::move(x), std::move(y), dim, std::move(outputs)})),
          k_(1),
          memo_(std::make_shared<Memo>()) {
        if (impl_->outputs.size() != impl_->x.size() * impl_->y.size())
            throw validation_error("CCQ channel needs one output per input pair");
        for (const auto& rho : impl_->outputs)
            if (rho.dim() != dim) throw validation_error("CCQ channel output dimension mismatch");
    }

    const Alphabet& x_alphabet() const { return impl_->x; }
    const Alphabet& y_alphabet() const { return impl_->y; }
    int k() const { return k_; }
    std::size_t base_dim() const { return impl_->dim; }
    std::size_t dim() const { return pow_size(impl_->dim, k_); }
    std::size_t x_words() const { return pow_size(impl_->x.size(), k_); }
    std::size_t y_words() const { return pow_size(impl_->y.size(), k_); }

    const DensityOperator& output(std::size_t x_index, std::size_t y_index) const {
        if (x_index >= x_words() || y_index >= y_words())
            throw validation_error("channel input index out of range");
        if (k_ == 1) return impl_->outputs[x_index * impl_->y.size() + y_index];
        const auto key = std::make_pair(x_index, y_index);
        std::lock_guard<std::mutex> lock(memo_->mu);
        auto it = memo_->cache.find(key);
        if (it != memo_->cache.end()) return it->second;
        const Word xw = index_to_word(x_index, impl_->x.size(), k_);
        const Word yw = index_to_word(y_index, impl_->y.size(), k_);
        ComplexMatrix m = base_output(xw[0], yw[0]).matrix();
        for (int i = 1; i < k_; ++i) m = tensor(m, base_output(xw[i], yw[i]).matrix());
        return memo_->cache.emplace(key, DensityOperator(std::move(m))).first->second;
    }

    const DensityOperator& output(const Word& xw, const Word& yw) const {
        if (static_cast<int>(xw.size()) != k_ || static_cast<int>(yw.size()) != k_)
            throw validation_error("word length does not match block length");
        return output(word_to_index(xw, impl_->x.size()), word_to_index(yw, impl_->y.size()));
    }

    const DensityOperator& base_output(std::size_t x, std::size_t y) const {
        return impl_->outputs[x * impl_->y.size() + y];
    }

    bool same_base(const CCQChannel& o) const { return impl_ == o.impl_; }

    friend CCQChannel extend_memoryless(const CCQChannel& w, int k);

private:
    struct Impl {
        Alphabet x, y;
        std::size_t dim;
        std::vector<DensityOperator> outputs; // index x*|Y|+y
    };
    struct Memo {
        std::mutex mu;
        std::map<std::pair<std::size_t, std::size_t>, DensityOperator> cache;
    };

    CCQChannel(std::shared_ptr<const Impl> impl, int k)
        : impl_(std::move(impl)), k_(k), memo_(std::make_shared<Memo>()) {}

    std::shared_ptr<const Impl> impl_;
    int k_;
    std::shared_ptr<Memo> memo_;
};

// W^k(x^k, y^k) = tensor_i W(x_i, y_i); outputs evaluated lazily.
inline CCQChannel extend_memoryless(const CCQChannel& w, int k) {
    if (k < 1) throw validation_error("block length must be positive");
    if (w.k() != 1) throw validation_error("extend_memoryless expects a base (k = 1) channel");
    enforce_dimension_cap(pow_size(w.base_dim(), k), "extend_memoryless");
    return CCQChannel(w.impl_, k);
}

// One classical sender, quantum receiver. Outputs may be given as a dense
// table or generated lazily (with memoization) from a closure.
class CQChannel {
public:
    CQChannel(std::size_t input_size, int k, std::size_t dim, std::vector<DensityOperator> outputs)
        : input_size_(input_size), k_(k), dim_(dim), state_(std::make_shared<State>()) {
        if (outputs.size() != input_size_) throw validation_error("CQ channel needs one output per input");
        for (const auto& rho : outputs)
            if (rho.dim() != dim_) throw validation_error("CQ channel output dimension mismatch");
        std::lock_guard<std::mutex> lock(state_->mu);
        for (std::size_t i = 0; i < outputs.size(); ++i) state_->cache.emplace(i, outputs[i]);
    }

    CQChannel(std::size_t input_size, int k, std::size_t dim,
              std::function<DensityOperator(std::size_t)> gen)
        : input_size_(input_size), k_(k), dim_(dim), state_(std::make_shared<State>()) {
        state_->gen = std::move(gen);
    }

    std::size_t input_size() const { return input_size_; }
    int k() const { return k_; }
    std::size_t dim() const { return dim_; }

    const DensityOperator& output(std::size_t x) const {
        if (x >= input_size_) throw validation_error("CQ channel input out of range");
        std::lock_guard<std::mutex> lock(state_->mu);
        auto it = state_->cache.find(x);
        if (it != state_->cache.end()) return it->second;
        if (!state_->gen) throw validation_error("CQ channel output missing");
        DensityOperator rho = state_->gen(x);
        if (rho.dim() != dim_) throw validation_error("CQ channel generated output dimension mismatch");
        return state_->cache.emplace(x, std::move(rho)).first->second;
    }

private:
    struct State {
        mutable std::mutex mu;
        std::map<std::size_t, DensityOperator> cache;
        std::function<DensityOperator(std::size_t)> gen;
    };

    std::size_t input_size_;
    int k_;
    std::size_t dim_;
    std::shared_ptr<State> state_;
};

// P W = sum_x p(x) W(x).
inline DensityOperator mix_output(const CQChannel& w, const Distribution& p) {
    if (p.size() != w.input_size()) throw validation_error("mix_output: distribution size mismatch");
    ComplexMatrix acc(w.dim(), w.dim());
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] == 0.0) continue;
        acc += w.output(x).matrix() * Complex(p[x], 0.0);
    }
    return DensityOperator(std::move(acc));
}

// CQ channel obtained by averaging one sender of a CCQ channel uniformly
// over a codeword list; `keep_x` keeps sender X and averages over y-words.
enum class MarginalSide { keep_x, keep_y };

inline CQChannel marginal_cq(const CCQChannel& wk, const std::vector<Word>& other_codewords,
                             MarginalSide side) {
    if (other_codewords.empty()) throw validation_error("marginal_cq: empty codeword list");
    const double weight = 1.0 / static_cast<double>(other_codewords.size());
    std::vector<std::size_t> others;
    for (const auto& w : other_codewords)
        others.push_back(word_to_index(w, side == MarginalSide::keep_x ? wk.y_alphabet().size()
                                                                       : wk.x_alphabet().size()));
    const std::size_t inputs = side == MarginalSide::keep_x ? wk.x_words() : wk.y_words();
    return CQChannel(inputs, wk.k(), wk.dim(), [wk, others, weight, side](std::size_t x) {
        ComplexMatrix acc(wk.dim(), wk.dim());
        for (std::size_t o : others) {
            const DensityOperator& rho =
                side == MarginalSide::keep_x ? wk.output(x, o) : wk.output(o, x);
            acc += rho.matrix() * Complex(weight, 0.0);
        }
        return DensityOperator(std::move(acc));
    });
}

// W_q(x) = sum_y q(y) W(x, y): sender Y driven by a fixed distribution.
inline CQChannel fix_sender_y(const CCQChannel& wk, const Distribution& q) {
    if (q.size() != wk.y_words()) throw validation_error("fix_sender_y: distribution size mismatch");
    return CQChannel(wk.x_words(), wk.k(), wk.dim(), [wk, q](std::size_t x) {
        ComplexMatrix acc(wk.dim(), wk.dim());
        for (std::size_t y = 0; y < q.size(); ++y) {
            if (q[y] == 0.0) continue;
            acc += wk.output(x, y).matrix() * Complex(q[y], 0.0);
        }
        return DensityOperator(std::move(acc));
    });
}

// V_p(y) = sum_x p(x) W(x, y): sender X driven by a fixed distribution.
inline CQChannel fix_sender_x(const CCQChannel& wk, const Distribution& p) {
    if (p.size() != wk.x_words()) throw validation_error("fix_sender_x: distribution size mismatch");
    return CQChannel(wk.y_words(), wk.k(), wk.dim(), [wk, p](std::size_t y) {
        ComplexMatrix acc(wk.dim(), wk.dim());
        for (std::size_t x = 0; x < p.size(); ++x) {
            if (p[x] == 0.0) continue;
            acc += wk.output(x, y).matrix() * Complex(p[x], 0.0);
        }
        return DensityOperator(std::move(acc));
    });
}

// Classical channel with row-stochastic transition matrix; rows are
// renormalized exactly after the residual check.
class ClassicalChannel {
public:
    ClassicalChannel(std::size_t inputs, std::size_t outputs, std::vector<double> probs,
                     std::vector<std::string> output_labels = {})
        : inputs_(inputs), outputs_(outputs), p_(std::move(probs)), labels_(std::move(output_labels)) {
        if (inputs_ == 0 || outputs_ == 0 || p_.size() != inputs_ * outputs_)
            throw validation_error("classical channel shape mismatch");
        if (!labels_.empty() && labels_.size() != outputs_)
            throw validation_error("classical channel label count mismatch");
        for (std::size_t x = 0; x < inputs_; ++x) {
            double sum = 0.0;
            for (std::size_t z = 0; z < outputs_; ++z) {
                double& v = p_[x * outputs_ + z];
                if (v < 0.0) {
                    if (v < -tolerances().distribution) throw validation_error("negative transition probability");
                    v = 0.0;
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > tolerances().induced_renorm)
                throw validation_error("classical channel row not normalized");
            for (std::size_t z = 0; z < outputs_; ++z) p_[x * outputs_ + z] /= sum;
        }
    }

    std::size_t inputs() const { return inputs_; }
    std::size_t outputs() const { return outputs_; }
    double prob(std::size_t z, std::size_t x) const { return p_[x * outputs_ + z]; }
    const std::vector<std::string>& output_labels() const { return labels_; }

    // P W(z) = sum_x P(x) W(z | x).
    std::vector<double> push_forward(const Distribution& p) const {
        if (p.size() != inputs_) throw validation_error("push_forward size mismatch");
        std::vector<double> out(outputs_, 0.0);
        for (std::size_t x = 0; x < inputs_; ++x)
            for (std::size_t z = 0; z < outputs_; ++z) out[z] += p[x] * prob(z, x);
        return out;
    }

private:
    std::size_t inputs_, outputs_;
    std::vector<double> p_;
    std::vector<std::string> labels_;
};

// W~(z | x) = tr(W(x) E_z).
inline ClassicalChannel induce_classical(const CQChannel& w, const POVM& e) {
    if (e.dim() != w.dim()) throw validation_error("induce_classical: POVM dimension mismatch");
    std::vector<double> probs(w.input_size() * e.size(), 0.0);
    for (std::size_t x = 0; x < w.input_size(); ++x) {
        const DensityOperator& rho = w.output(x);
        for (std::size_t z = 0; z < e.size(); ++z)
            probs[x * e.size() + z] = expectation(rho, e.element(z));
    }
    std::vector<std::string> labels;
    for (std::size_t z = 0; z < e.size(); ++z) labels.push_back(e.label(z));
    return ClassicalChannel(w.input_size(), e.size(), std::move(probs), std::move(labels));
}

// Classical-quantum channel state: classical senders embedded diagonally,
// tensored with the channel output. The classical registers stay implicit
// (distributions plus block structure); the dense matrix is realized only
// on demand and refused above the dimension cap.
class ChannelState {
public:
    ChannelState(CCQChannel wk, Distribution p1, Distribution p2)
        : ccq_(std::move(wk)), p1_(std::move(p1)), p2_(std::move(p2)) {
        if (p1_->size() != ccq_->x_words() || p2_->size() != ccq_->y_words())
            throw validation_error("channel state: distribution sizes do not match channel inputs");
    }

    ChannelState(CQChannel w, Distribution p) : cq_(std::move(w)), p1_(std::move(p)) {
        if (p1_->size() != cq_->input_size())
            throw validation_error("channel state: distribution size does not match channel input");
    }

    bool is_ccq() const { return ccq_.has_value(); }
    int k() const { return is_ccq() ? ccq_->k() : cq_->k(); }
    const Distribution& p1() const { return *p1_; }
    const Distribution& p2() const {
        if (!p2_) throw validation_error("channel state has no second sender");
        return *p2_;
    }
    const CCQChannel& ccq() const { return *ccq_; }
    const CQChannel& cq() const { return *cq_; }

    // Factor dimensions: {|X|^k, |Y|^k, d^k} for CCQ, {|X|^k, d^k} for CQ.
    std::vector<std::size_t> factor_dims() const {
        if (is_ccq()) return {ccq_->x_words(), ccq_->y_words(), ccq_->dim()};
        return {cq_->input_size(), cq_->dim()};
    }

    std::size_t factor_count() const { return is_ccq() ? 3 : 2; }

    // Entropy of the reduction onto a subset of factors (0 = A, 1 = B,
    // 2 = C for CCQ; 0 = A, 1 = C for CQ). Uses the block-diagonal
    // structure of the state, so no composite dense matrix is formed.
    double subset_entropy(std::span<const std::size_t> keep) const;

    // Dense realization; refused above the dimension cap.
    ComplexMatrix dense_matrix() const {
        std::size_t total = 1;
        for (auto d : factor_dims()) total *= d;
        enforce_dimension_cap(total, "channel state dense realization");
        ComplexMatrix acc(total, total);
        if (is_ccq()) {
            const std::size_t dB = ccq_->y_words(), dC = ccq_->dim();
            for (std::size_t x = 0; x < p1_->size(); ++x) {
                if ((*p1_)[x] == 0.0) continue;
                for (std::size_t y = 0; y < p2_->size(); ++y) {
                    const double w = (*p1_)[x] * (*p2_)[y];
                    if (w == 0.0) continue;
                    const ComplexMatrix& rho = ccq_->output(x, y).matrix();
                    const std::size_t off = (x * dB + y) * dC;
                    for (std::size_t i = 0; i < dC; ++i)
                        for (std::size_t j = 0; j < dC; ++j)
                            acc(off + i, off + j) += w * rho(i, j);
                }
            }
        } else {
            const std::size_t dC = cq_->dim();
            for (std::size_t x = 0; x < p1_->size(); ++x) {
                if ((*p1_)[x] == 0.0) continue;
                const ComplexMatrix& rho = cq_->output(x).matrix();
                const std::size_t off = x * dC;
                for (std::size_t i = 0; i < dC; ++i)
                    for (std::size_t j = 0; j < dC; ++j)
                        acc(off + i, off + j) += (*p1_)[x] * rho(i, j);
            }
        }
        return acc;
    }

    DensityOperator dense_state() const { return DensityOperator(dense_matrix()); }

private:
    std::optional<CCQChannel> ccq_;
    std::optional<CQChannel> cq_;
    std::optional<Distribution> p1_, p2_;
};

inline ChannelState channel_state(const CCQChannel& wk, const Distribution& p1,
                                  const Distribution& p2) {
    return ChannelState(wk, p1, p2);
}

inline ChannelState channel_state(const CQChannel& w, const Distribution& p) {
    return ChannelState(w, p);
}

inline double ChannelState::subset_entropy(std::span<const std::size_t> keep) const {
    if (keep.empty()) throw validation_error("subset_entropy: empty factor set");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= factor_count()) throw validation_error("subset_entropy: factor index out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw validation_error("subset_entropy: factor indices must be strictly increasing");
    }
    auto has = [&](std::size_t f) {
        for (auto v : keep)
            if (v == f) return true;
        return false;
    };
    const double h1 = entropy_of_spectrum(p1_->weights());

    if (!is_ccq()) {
        const bool a = has(0), c = has(1);
        if (a && !c) return h1;
        if (!a && c) return von_neumann_entropy(mix_output(*cq_, *p1_));
        // A and C: block-diagonal over x with blocks p(x) * W(x)
        double s = h1;
        for (std::size_t x = 0; x < p1_->size(); ++x)
            if ((*p1_)[x] > 0.0) s += (*p1_)[x] * von_neumann_entropy(cq_->output(x));
        return s;
    }

    const bool a = has(0), b = has(1), c = has(2);
    const double h2 = entropy_of_spectrum(p2_->weights());
    if (!c) return (a ? h1 : 0.0) + (b ? h2 : 0.0); // classical marginals are product

    // rho_x = sum_y p2(y) W(x,y), sigma_y = sum_x p1(x) W(x,y)
    auto rho_given_x = [&](std::size_t x) {
        ComplexMatrix acc(ccq_->dim(), ccq_->dim());
        for (std::size_t y = 0; y < p2_->size(); ++y)
            if ((*p2_)[y] > 0.0) acc += ccq_->output(x, y).matrix() * Complex((*p2_)[y], 0.0);
        return DensityOperator(std::move(acc));
    };
    auto sigma_given_y = [&](std::size_t y) {
        ComplexMatrix acc(ccq_->dim(), ccq_->dim());
        for (std::size_t x = 0; x < p1_->size(); ++x)
            if ((*p1_)[x] > 0.0) acc += ccq_->output(x, y).matrix() * Complex((*p1_)[x], 0.0);
        return DensityOperator(std::move(acc));
    };

    if (a && b) { // A B C: blocks (x,y)
        double s = h1 + h2;
        for (std::size_t x = 0; x < p1_->size(); ++x)
            for (std::size_t y = 0; y < p2_->size(); ++y) {
                const double w = (*p1_)[x] * (*p2_)[y];
                if (w > 0.0) s += w * von_neumann_entropy(ccq_->output(x, y));
            }
        return s;
    }
    if (a) { // A C: blocks over x
        double s = h1;
        for (std::size_t x = 0; x < p1_->size(); ++x)
            if ((*p1_)[x] > 0.0) s += (*p1_)[x] * von_neumann_entropy(rho_given_x(x));
        return s;
    }
    if (b) { // B C: blocks over y
        double s = h2;
        for (std::size_t y = 0; y < p2_->size(); ++y)
            if ((*p2_)[y] > 0.0) s += (*p2_)[y] * von_neumann_entropy(sigma_given_y(y));
        return s;
    }
    // C alone
    ComplexMatrix acc(ccq_->dim(), ccq_->dim());
    for (std::size_t x = 0; x < p1_->size(); ++x)
        for (std::size_t y = 0; y < p2_->size(); ++y) {
            const double w = (*p1_)[x] * (*p2_)[y];
            if (w > 0.0) acc += ccq_->output(x, y).matrix() * Complex(w, 0.0);
        }
    return von_neumann_entropy(DensityOperator(std::move(acc)));
}

} // namespace cqmac
