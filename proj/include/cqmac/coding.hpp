#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqmac/channel.hpp"
#include "cqmac/quantum.hpp"

namespace cqmac {

// Sparse distribution over k-letter words; duplicate support words are
// merged. Transformator distributions are uniform over a handful of words
// inside exponentially large spaces, so dense storage is never an option.
class SparseDist {
public:
    SparseDist(std::vector<Word> support, std::vector<double> weights) {
        if (support.size() != weights.size() || support.empty())
            throw validation_error("sparse distribution: support/weight mismatch");
        std::map<Word, double> acc;
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (weights[i] < -tolerances().distribution)
                throw validation_error("sparse distribution: negative weight");
            acc[support[i]] += std::max(weights[i], 0.0);
        }
        double sum = 0.0;
        for (auto& [w, v] : acc) {
            support_.push_back(w);
            weights_.push_back(v);
            sum += v;
        }
        if (std::abs(sum - 1.0) > tolerances().distribution)
            throw validation_error("sparse distribution not normalized (sum " + std::to_string(sum) + ")");
    }

    static SparseDist point_mass(Word w) { return SparseDist({std::move(w)}, {1.0}); }

    static SparseDist uniform_over(std::vector<Word> support) {
        const std::size_t n = support.size();
        return SparseDist(std::move(support), std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    std::size_t support_size() const { return support_.size(); }
    const std::vector<Word>& support() const { return support_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<Word> support_;
    std::vector<double> weights_;
};

// Dense realization over the composite word index space; refused when the
// space exceeds the dimension cap.
inline Distribution dense_distribution(const SparseDist& d, std::size_t alphabet_size, int k) {
    const std::size_t total = pow_size(alphabet_size, k);
    enforce_dimension_cap(total, "dense_distribution");
    std::vector<double> w(total, 0.0);
    for (std::size_t i = 0; i < d.support_size(); ++i)
        w[word_to_index(d.support()[i], alphabet_size)] += d.weights()[i];
    return Distribution(std::move(w));
}

// Transmission code: codeword families for both senders plus a decoding
// POVM labeled by message pairs. Completeness may be supplied by one
// trailing failure element, which the error functionals never score.
struct TransmissionCode {
    int k = 1;
    std::size_t x_size = 0, y_size = 0; // base alphabet sizes the words index into
    std::vector<Word> codewords_x;      // M words
    std::vector<Word> codewords_y;      // N words
    std::vector<ComplexMatrix> decoders; // M*N message decoders, index m*N+n
    std::optional<ComplexMatrix> failure_decoder;

    std::size_t m_count() const { return codewords_x.size(); }
    std::size_t n_count() const { return codewords_y.size(); }
    const ComplexMatrix& decoder(std::size_t m, std::size_t n) const {
        return decoders[m * n_count() + n];
    }
};

// Validates structure and that the decoders (with the optional failure
// element) form a POVM.
inline void validate_code(const TransmissionCode& c) {
    if (c.k < 1) throw validation_error("code: block length must be positive");
    if (c.codewords_x.empty() || c.codewords_y.empty())
        throw validation_error("code: needs at least one codeword per sender");
    for (const auto& w : c.codewords_x) {
        if (static_cast<int>(w.size()) != c.k) throw validation_error("code: x codeword length mismatch");
        word_to_index(w, c.x_size);
    }
    for (const auto& w : c.codewords_y) {
        if (static_cast<int>(w.size()) != c.k) throw validation_error("code: y codeword length mismatch");
        word_to_index(w, c.y_size);
    }
    if (c.decoders.size() != c.m_count() * c.n_count())
        throw validation_error("code: decoder count must be M*N");
    std::vector<ComplexMatrix> elems = c.decoders;
    std::vector<std::string> labels;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            labels.push_back(std::to_string(m) + "," + std::to_string(n));
    if (c.failure_decoder) {
        elems.push_back(*c.failure_decoder);
        labels.push_back("fail");
    }
    POVM povm(std::move(elems), std::move(labels)); // throws when invalid
    (void)povm;
}

inline void require_compatible(const TransmissionCode& c, const CCQChannel& wk) {
    if (wk.k() != c.k) throw validation_error("code/channel block length mismatch");
    if (wk.x_alphabet().size() != c.x_size || wk.y_alphabet().size() != c.y_size)
        throw validation_error("code/channel alphabet mismatch");
    if (!c.decoders.empty() && c.decoders.front().rows() != wk.dim())
        throw validation_error("code/channel dimension mismatch");
}

// 1 - (1/MN) sum_mn tr(D_mn W^k(x_m, y_n)).
inline double avg_error(const TransmissionCode& c, const CCQChannel& wk) {
    require_compatible(c, wk);
    double hit = 0.0;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            hit += expectation(wk.output(c.codewords_x[m], c.codewords_y[n]), c.decoder(m, n));
    const double e = 1.0 - hit / static_cast<double>(c.m_count() * c.n_count());
    return std::clamp(e, 0.0, 1.0);
}

// max_mn 1 - tr(D_mn W^k(x_m, y_n)).
inline double max_error(const TransmissionCode& c, const CCQChannel& wk) {
    require_compatible(c, wk);
    double worst = 0.0;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n) {
            const double e =
                1.0 - expectation(wk.output(c.codewords_x[m], c.codewords_y[n]), c.decoder(m, n));
            worst = std::max(worst, e);
        }
    return std::clamp(worst, 0.0, 1.0);
}

// Per-message-pair error table, index m*N+n.
inline std::vector<double> pair_errors(const TransmissionCode& c, const CCQChannel& wk) {
    require_compatible(c, wk);
    std::vector<double> e(c.m_count() * c.n_count());
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            e[m * c.n_count() + n] =
                1.0 - expectation(wk.output(c.codewords_x[m], c.codewords_y[n]), c.decoder(m, n));
    return e;
}

// Identification code: sender distributions plus identifier effects
// I_mn with 0 <= I <= 1, indexed m*N+n.
struct IDCode {
    int k = 1;
    std::size_t x_size = 0, y_size = 0;
    std::vector<SparseDist> dists_x; // M
    std::vector<SparseDist> dists_y; // N
    std::vector<ComplexMatrix> identifiers;

    std::size_t m_count() const { return dists_x.size(); }
    std::size_t n_count() const { return dists_y.size(); }
    const ComplexMatrix& identifier(std::size_t m, std::size_t n) const {
        return identifiers[m * n_count() + n];
    }
};

inline void validate_id_code(const IDCode& c) {
    if (c.dists_x.empty() || c.dists_y.empty())
        throw validation_error("id code: needs at least one distribution per sender");
    if (c.identifiers.size() != c.m_count() * c.n_count())
        throw validation_error("id code: identifier count must be M*N");
    for (const auto& i : c.identifiers) {
        const SubPOVMElement check(i); // spectrum in [0,1]
        (void)check;
    }
    auto check_words = [&](const std::vector<SparseDist>& ds, std::size_t alphabet) {
        for (const auto& d : ds)
            for (const auto& w : d.support()) {
                if (static_cast<int>(w.size()) != c.k)
                    throw validation_error("id code: word length mismatch");
                word_to_index(w, alphabet);
            }
    };
    check_words(c.dists_x, c.x_size);
    check_words(c.dists_y, c.y_size);
}

inline void require_compatible(const IDCode& c, const CCQChannel& wk) {
    if (wk.k() != c.k) throw validation_error("id code/channel block length mismatch");
    if (wk.x_alphabet().size() != c.x_size || wk.y_alphabet().size() != c.y_size)
        throw validation_error("id code/channel alphabet mismatch");
    if (!c.identifiers.empty() && c.identifiers.front().rows() != wk.dim())
        throw validation_error("id code/channel dimension mismatch");
}

// sum_{x,y} P_m(x) Q_n(y) tr(I W^k(x,y)) over the sparse joint support.
inline double id_acceptance(const IDCode& c, const CCQChannel& wk, std::size_t m, std::size_t n,
                            const ComplexMatrix& identifier) {
    double acc = 0.0;
    const auto& px = c.dists_x[m];
    const auto& qy = c.dists_y[n];
    for (std::size_t i = 0; i < px.support_size(); ++i)
        for (std::size_t j = 0; j < qy.support_size(); ++j) {
            const double w = px.weights()[i] * qy.weights()[j];
            if (w == 0.0) continue;
            acc += w * expectation(wk.output(px.support()[i], qy.support()[j]), identifier);
        }
    return acc;
}

// First-kind error: worst missed identification over all message pairs.
inline double id_error_1(const IDCode& c, const CCQChannel& wk) {
    require_compatible(c, wk);
    double worst = 0.0;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            worst = std::max(worst, 1.0 - id_acceptance(c, wk, m, n, c.identifier(m, n)));
    return std::clamp(worst, 0.0, 1.0);
}

// Second-kind error: worst false identification over ordered pairs
// (m,n) != (m',n'), taken literally so pairs sharing one sender index are
// included.
inline double id_error_2(const IDCode& c, const CCQChannel& wk) {
    require_compatible(c, wk);
    if (c.m_count() * c.n_count() < 2)
        throw validation_error("id_error_2 undefined for a single-message code");
    double worst = 0.0;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            for (std::size_t mp = 0; mp < c.m_count(); ++mp)
                for (std::size_t np = 0; np < c.n_count(); ++np) {
                    if (m == mp && n == np) continue;
                    worst = std::max(worst, id_acceptance(c, wk, m, n, c.identifier(mp, np)));
                }
    return std::clamp(worst, 0.0, 1.0);
}

// Second-kind error restricted to pairs that differ in both sender
// indices: the quantity the random-coding analysis actually bounds by
// lambda^2 + 3 lambda_k. Requires M, N >= 2.
inline double id_error_2_cross(const IDCode& c, const CCQChannel& wk) {
    require_compatible(c, wk);
    if (c.m_count() < 2 || c.n_count() < 2)
        throw validation_error("id_error_2_cross needs at least two messages per sender");
    double worst = 0.0;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            for (std::size_t mp = 0; mp < c.m_count(); ++mp)
                for (std::size_t np = 0; np < c.n_count(); ++np) {
                    if (m == mp || n == np) continue;
                    worst = std::max(worst, id_acceptance(c, wk, m, n, c.identifier(mp, np)));
                }
    return std::clamp(worst, 0.0, 1.0);
}

// Single-sender randomized identification code.
struct CQIDCode {
    int k = 1;
    std::size_t x_size = 0;
    std::vector<SparseDist> dists;
    std::vector<ComplexMatrix> identifiers;
};

// (e1, e2) of a single-sender ID code over a CQ channel. The channel input
// space must cover the words in the supports (composite indexing).
inline std::pair<double, double> cq_id_errors(const CQIDCode& c, const CQChannel& w) {
    if (c.dists.size() != c.identifiers.size() || c.dists.empty())
        throw validation_error("cq id code: distribution/identifier mismatch");
    auto acceptance = [&](std::size_t m, const ComplexMatrix& ident) {
        double acc = 0.0;
        for (std::size_t i = 0; i < c.dists[m].support_size(); ++i) {
            const double wt = c.dists[m].weights()[i];
            if (wt == 0.0) continue;
            acc += wt * expectation(w.output(word_to_index(c.dists[m].support()[i], c.x_size)), ident);
        }
        return acc;
    };
    double e1 = 0.0;
    for (std::size_t m = 0; m < c.dists.size(); ++m)
        e1 = std::max(e1, 1.0 - acceptance(m, c.identifiers[m]));
    double e2 = 0.0;
    if (c.dists.size() < 2) throw validation_error("cq_id_errors: e2 undefined for M < 2");
    for (std::size_t m = 0; m < c.dists.size(); ++m)
        for (std::size_t n = 0; n < c.dists.size(); ++n) {
            if (m == n) continue;
            e2 = std::max(e2, acceptance(m, c.identifiers[n]));
        }
    return {std::clamp(e1, 0.0, 1.0), std::clamp(e2, 0.0, 1.0)};
}

// Refinement structure of a simultaneous ID code: a POVM on an (r, s) label
// grid whose subset-sums reproduce every identifier.
struct SimultaneousStructure {
    std::size_t r_count = 0, s_count = 0;
    std::vector<ComplexMatrix> refinement; // r_count * s_count elements, index r*s_count+s
    std::vector<std::vector<std::size_t>> subsets_a; // M subsets of [r_count]
    std::vector<std::vector<std::size_t>> subsets_b; // N subsets of [s_count]

    const ComplexMatrix& element(std::size_t r, std::size_t s) const {
        return refinement[r * s_count + s];
    }

    POVM refinement_povm() const {
        std::vector<std::string> labels;
        for (std::size_t r = 0; r < r_count; ++r)
            for (std::size_t s = 0; s < s_count; ++s)
                labels.push_back(std::to_string(r) + "," + std::to_string(s));
        return POVM(refinement, labels);
    }
};

struct SimultaneityCheck {
    bool simultaneous = false;
    double max_residual = 0.0;
};

// True iff every identifier reconstructs as the subset-sum of refinement
// elements within the reconstruction tolerance; the worst entrywise
// residual is reported either way.
inline SimultaneityCheck check_simultaneous(const IDCode& c, const SimultaneousStructure& s) {
    if (s.refinement.size() != s.r_count * s.s_count)
        throw validation_error("structure: refinement element count mismatch");
    if (s.subsets_a.size() != c.m_count() || s.subsets_b.size() != c.n_count())
        throw validation_error("structure: subset count does not match code size");
    POVM povm = s.refinement_povm(); // validates the refinement
    (void)povm;
    double residual = 0.0;
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n) {
            const std::size_t dim = c.identifier(m, n).rows();
            ComplexMatrix sum(dim, dim);
            for (std::size_t r : s.subsets_a[m]) {
                if (r >= s.r_count) throw validation_error("structure: subset index out of range");
                for (std::size_t t : s.subsets_b[n]) {
                    if (t >= s.s_count) throw validation_error("structure: subset index out of range");
                    sum += s.element(r, t);
                }
            }
            residual = std::max(residual, max_abs_diff(sum, c.identifier(m, n)));
        }
    return {residual <= tolerances().reconstruction, residual};
}

// The measurement every identification question factors through. Only
// defined for codes carrying a simultaneity structure; the identifiers must
// reconstruct from it.
inline POVM common_refinement(const IDCode& c, const std::optional<SimultaneousStructure>& s) {
    if (!s)
        throw validation_error(
            "common refinement undefined: identifiers carry no simultaneous structure");
    const auto check = check_simultaneous(c, *s);
    if (!check.simultaneous)
        throw validation_error("common refinement: identifiers do not reconstruct (residual " +
                               std::to_string(check.max_residual) + ")");
    return s->refinement_povm();
}

// Rates in bits per channel use; identification rates use the iterated
// logarithm and exist only for M, N >= 2.
struct RateReport {
    double r1_transmission = 0.0, r2_transmission = 0.0;
    std::optional<double> r1_id, r2_id;
};

inline RateReport rate_report(std::size_t m, std::size_t n, int k) {
    if (m == 0 || n == 0 || k < 1) throw validation_error("rate_report: degenerate code");
    RateReport r;
    r.r1_transmission = std::log2(static_cast<double>(m)) / k;
    r.r2_transmission = std::log2(static_cast<double>(n)) / k;
    if (m >= 2) r.r1_id = std::log2(std::log2(static_cast<double>(m))) / k;
    if (n >= 2) r.r2_id = std::log2(std::log2(static_cast<double>(n))) / k;
    return r;
}

// A transmission code read as an identification code: point masses on the
// codewords and the decoders as identifiers.
inline IDCode to_id_code(const TransmissionCode& c) {
    IDCode id;
    id.k = c.k;
    id.x_size = c.x_size;
    id.y_size = c.y_size;
    for (const auto& w : c.codewords_x) id.dists_x.push_back(SparseDist::point_mass(w));
    for (const auto& w : c.codewords_y) id.dists_y.push_back(SparseDist::point_mass(w));
    id.identifiers = c.decoders;
    return id;
}

// Keep only the listed messages of each sender.
inline IDCode restrict_messages(const IDCode& c, const std::vector<std::size_t>& keep_m,
                                const std::vector<std::size_t>& keep_n) {
    if (keep_m.empty() || keep_n.empty()) throw validation_error("restrict_messages: empty selection");
    IDCode out;
    out.k = c.k;
    out.x_size = c.x_size;
    out.y_size = c.y_size;
    for (std::size_t m : keep_m) out.dists_x.push_back(c.dists_x.at(m));
    for (std::size_t n : keep_n) out.dists_y.push_back(c.dists_y.at(n));
    for (std::size_t m : keep_m)
        for (std::size_t n : keep_n) out.identifiers.push_back(c.identifier(m, n));
    return out;
}

} // namespace cqmac
