#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "cqmac/coding.hpp"
#include "cqmac/rng.hpp"

namespace cqmac {

// Single-sender code over a CQ channel; decoders may be a sub-POVM
// completed by a failure element.
struct CQCode {
    int k = 1;
    std::size_t alphabet_size = 0;
    std::vector<Word> codewords;
    std::vector<ComplexMatrix> decoders;
    std::optional<ComplexMatrix> failure_decoder;
};

inline double cq_avg_error(const CQCode& c, const CQChannel& w) {
    double hit = 0.0;
    for (std::size_t m = 0; m < c.codewords.size(); ++m)
        hit += expectation(w.output(word_to_index(c.codewords[m], c.alphabet_size)), c.decoders[m]);
    return std::clamp(1.0 - hit / static_cast<double>(c.codewords.size()), 0.0, 1.0);
}

inline double cq_max_error(const CQCode& c, const CQChannel& w) {
    double worst = 0.0;
    for (std::size_t m = 0; m < c.codewords.size(); ++m)
        worst = std::max(worst, 1.0 - expectation(w.output(word_to_index(c.codewords[m],
                                                                         c.alphabet_size)),
                                                  c.decoders[m]));
    return std::clamp(worst, 0.0, 1.0);
}

struct SingleSenderReduction {
    CQChannel channel; // uniform average over the dropped sender's codewords
    CQCode code;       // decoders s_m = sum_n D_mn
};

// A (k,M,N)-code used as a (k,M)-code: average the other sender out of the
// channel and merge that sender's decoders. The reduced average error never
// exceeds the original one.
inline SingleSenderReduction reduce_single_sender(const TransmissionCode& c, const CCQChannel& wk,
                                                  MarginalSide side) {
    require_compatible(c, wk);
    const bool keep_x = side == MarginalSide::keep_x;
    const auto& kept_words = keep_x ? c.codewords_x : c.codewords_y;
    const auto& dropped_words = keep_x ? c.codewords_y : c.codewords_x;
    CQCode code;
    code.k = c.k;
    code.alphabet_size = keep_x ? c.x_size : c.y_size;
    code.codewords = kept_words;
    const std::size_t dim = wk.dim();
    for (std::size_t m = 0; m < kept_words.size(); ++m) {
        ComplexMatrix s(dim, dim);
        for (std::size_t n = 0; n < dropped_words.size(); ++n)
            s += keep_x ? c.decoder(m, n) : c.decoder(n, m);
        code.decoders.push_back(std::move(s));
    }
    if (c.failure_decoder) code.failure_decoder = c.failure_decoder;
    return {marginal_cq(wk, dropped_words, side), std::move(code)};
}

struct MaxErrorExtraction {
    CQChannel channel; // x -> W^k(x, y_{n0})
    CQCode code;       // the `keep` best codewords in sorted order
    std::size_t n0 = 0;
    double lambda = 0.0;               // max error of the kept code
    std::vector<std::size_t> order;    // sort of [M] by per-message error
};

// Max-error extraction: pick the column with the best row-average error,
// sort its per-message errors non-decreasingly (stable, so ties keep their
// original index) and keep the best `keep` messages. For keep <= ceil(M/2)
// the achieved maximal error is at most twice the average error.
inline MaxErrorExtraction extract_max_error(const TransmissionCode& c, const CCQChannel& wk,
                                            std::size_t keep) {
    require_compatible(c, wk);
    const std::size_t m_count = c.m_count(), n_count = c.n_count();
    if (keep == 0 || keep > m_count) throw validation_error("extract_max_error: keep out of range");
    const auto errors = pair_errors(c, wk);

    std::size_t n0 = 0;
    double best_avg = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < n_count; ++n) {
        double avg = 0.0;
        for (std::size_t m = 0; m < m_count; ++m) avg += errors[m * n_count + n];
        avg /= static_cast<double>(m_count);
        if (avg < best_avg) {
            best_avg = avg;
            n0 = n;
        }
    }

    std::vector<std::size_t> order(m_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return errors[a * n_count + n0] < errors[b * n_count + n0];
    });

    CQCode code;
    code.k = c.k;
    code.alphabet_size = c.x_size;
    for (std::size_t i = 0; i < keep; ++i) {
        code.codewords.push_back(c.codewords_x[order[i]]);
        code.decoders.push_back(c.decoder(order[i], n0));
    }
    const double lambda = errors[order[keep - 1] * n_count + n0];
    return {marginal_cq(wk, {c.codewords_y[n0]}, MarginalSide::keep_x), std::move(code), n0,
            std::clamp(lambda, 0.0, 1.0), std::move(order)};
}

// Time sharing: run cA for its k uses, then cB; decoders are tensor
// products and message counts multiply.
inline TransmissionCode concatenate(const TransmissionCode& a, const TransmissionCode& b) {
    if (a.x_size != b.x_size || a.y_size != b.y_size)
        throw validation_error("concatenate: alphabet mismatch");
    TransmissionCode c;
    c.k = a.k + b.k;
    c.x_size = a.x_size;
    c.y_size = a.y_size;
    for (const auto& wa : a.codewords_x)
        for (const auto& wb : b.codewords_x) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            c.codewords_x.push_back(std::move(w));
        }
    for (const auto& wa : a.codewords_y)
        for (const auto& wb : b.codewords_y) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            c.codewords_y.push_back(std::move(w));
        }
    const std::size_t nb = b.n_count();
    c.decoders.resize(a.m_count() * b.m_count() * a.n_count() * nb, ComplexMatrix());
    for (std::size_t ma = 0; ma < a.m_count(); ++ma)
        for (std::size_t mb = 0; mb < b.m_count(); ++mb)
            for (std::size_t na = 0; na < a.n_count(); ++na)
                for (std::size_t nbi = 0; nbi < nb; ++nbi) {
                    const std::size_t m = ma * b.m_count() + mb;
                    const std::size_t n = na * nb + nbi;
                    c.decoders[m * (a.n_count() * nb) + n] =
                        tensor(a.decoder(ma, na), b.decoder(mb, nbi));
                }
    if (a.failure_decoder || b.failure_decoder) {
        const std::size_t da = a.decoders.front().rows(), db = b.decoders.front().rows();
        const ComplexMatrix fa = a.failure_decoder ? *a.failure_decoder : ComplexMatrix::zero(da);
        const ComplexMatrix fb = b.failure_decoder ? *b.failure_decoder : ComplexMatrix::zero(db);
        ComplexMatrix sa = ComplexMatrix::identity(da);
        sa -= fa;
        ComplexMatrix sb = ComplexMatrix::identity(db);
        sb -= fb;
        c.failure_decoder = tensor(fa, sb) + tensor(sa, fb) + tensor(fa, fb);
    }
    return c;
}

// D(lambda || mu) for the binary distributions (lambda, 1-lambda) and
// (mu, 1-mu), in bits. Arguments must lie strictly inside (0, 1).
inline double binary_kl(double lambda, double mu) {
    if (!(lambda > 0.0 && lambda < 1.0 && mu > 0.0 && mu < 1.0))
        throw validation_error("binary_kl: arguments must lie strictly inside (0,1)");
    return lambda * std::log2(lambda / mu) +
           (1.0 - lambda) * std::log2((1.0 - lambda) / (1.0 - mu));
}

// Chernov-Hoeffding tail bound 2^{-m D(lambda||mu)} on
// Pr(sum of m Bernoulli(<= mu) > lambda m); requires mu < lambda.
inline double chernoff_tail_bound(double lambda, double mu, std::size_t m) {
    if (m == 0) throw validation_error("chernoff_tail_bound: m must be positive");
    if (!(mu < lambda)) throw validation_error("chernoff_tail_bound: requires mu < lambda");
    return std::exp2(-static_cast<double>(m) * binary_kl(lambda, mu));
}

// Map families A_i : [M'] -> [M''] and B_j : [N'] -> [N''], stored as index
// arrays.
struct MapFamily {
    std::vector<std::vector<std::size_t>> maps_a;
    std::vector<std::vector<std::size_t>> maps_b;
};

struct TransformatorResult {
    IDCode id_code;
    SimultaneousStructure structure;
    MapFamily maps;
    std::vector<std::vector<std::size_t>> overlap_a; // Sum psi per (i, i') pair
    std::vector<std::vector<std::size_t>> overlap_b; // Sum phi per (j, j') pair
    std::size_t attempts = 0;
    std::size_t m_prime = 0, n_prime = 0, m_double = 0, n_double = 0;
    double lambda = 0.0; // overlap threshold the sampling enforced
};

namespace detail {

inline std::size_t map_overlap(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] == b[i]) ++c;
    return c;
}

// Sample `count` maps [domain] -> [range] with pairwise overlap at most
// `threshold`, retrying each map up to max_attempts times.
inline std::vector<std::vector<std::size_t>> sample_maps(std::size_t count, std::size_t domain,
                                                         std::size_t range, double threshold,
                                                         std::size_t max_attempts, SplitMix64& rng,
                                                         std::size_t& attempts) {
    std::vector<std::vector<std::size_t>> maps;
    for (std::size_t i = 0; i < count; ++i) {
        bool accepted = false;
        std::size_t best_overlap = domain + 1;
        for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
            ++attempts;
            std::vector<std::size_t> candidate(domain);
            for (auto& v : candidate) v = rng.next_below(range);
            std::size_t worst = 0;
            for (const auto& prev : maps) worst = std::max(worst, map_overlap(candidate, prev));
            best_overlap = std::min(best_overlap, worst);
            if (static_cast<double>(worst) <= threshold * static_cast<double>(domain)) {
                maps.push_back(std::move(candidate));
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw sampling_error("transformator: could not sample map " + std::to_string(i + 1) +
                                 " of " + std::to_string(count) + " within " +
                                 std::to_string(max_attempts) + " attempts (best overlap " +
                                 std::to_string(best_overlap) + ", threshold " +
                                 std::to_string(threshold * static_cast<double>(domain)) + ")");
    }
    return maps;
}

} // namespace detail

// The Transformator: appends a short inner code to every outer codeword via
// random map families and turns the pair into a simultaneous ID code.
//   P_i uniform on { u'_a . u''_{A_i(a)} },  Q_j uniform on { v'_b . v''_{B_j(b)} }
//   I_ij = sum_ab D'_ab (x) D''_{A_i(a) B_j(b)}
// The refinement POVM is the full product grid {D'_ab (x) D''_cd}.
inline TransformatorResult transformator_build(const TransmissionCode& outer,
                                               const TransmissionCode& inner, std::size_t m_target,
                                               std::size_t n_target, std::uint64_t rng_seed,
                                               double lambda,
                                               std::size_t max_attempts = 0) {
    if (outer.x_size != inner.x_size || outer.y_size != inner.y_size)
        throw validation_error("transformator: outer and inner codes use different alphabets");
    if (m_target < 1 || n_target < 1) throw validation_error("transformator: need at least one message");
    if (inner.m_count() < 2 || inner.n_count() < 2)
        throw validation_error("transformator: inner code needs M'' >= 2 and N'' >= 2");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw validation_error("transformator: lambda must lie in (0,1)");
    if (max_attempts == 0) max_attempts = tolerances().max_attempts;

    const std::size_t mp = outer.m_count(), np = outer.n_count();
    const std::size_t mpp = inner.m_count(), npp = inner.n_count();
    const std::size_t d_outer = outer.decoders.front().rows();
    const std::size_t d_inner = inner.decoders.front().rows();
    enforce_dimension_cap(d_outer * d_inner, "transformator identifiers");

    SplitMix64 rng(rng_seed);
    SplitMix64 rng_a = rng.split();
    SplitMix64 rng_b = rng.split();
    TransformatorResult res;
    res.attempts = 0;
    res.maps.maps_a =
        detail::sample_maps(m_target, mp, mpp, lambda, max_attempts, rng_a, res.attempts);
    res.maps.maps_b =
        detail::sample_maps(n_target, np, npp, lambda, max_attempts, rng_b, res.attempts);
    res.m_prime = mp;
    res.n_prime = np;
    res.m_double = mpp;
    res.n_double = npp;
    res.lambda = lambda;

    auto overlaps = [](const std::vector<std::vector<std::size_t>>& maps) {
        std::vector<std::vector<std::size_t>> t(maps.size(), std::vector<std::size_t>(maps.size(), 0));
        for (std::size_t i = 0; i < maps.size(); ++i)
            for (std::size_t j = 0; j < maps.size(); ++j)
                t[i][j] = detail::map_overlap(maps[i], maps[j]);
        return t;
    };
    res.overlap_a = overlaps(res.maps.maps_a);
    res.overlap_b = overlaps(res.maps.maps_b);

    IDCode id;
    id.k = outer.k + inner.k;
    id.x_size = outer.x_size;
    id.y_size = outer.y_size;
    auto concat = [](const Word& a, const Word& b) {
        Word w = a;
        w.insert(w.end(), b.begin(), b.end());
        return w;
    };
    for (const auto& map_a : res.maps.maps_a) {
        std::vector<Word> support;
        for (std::size_t a = 0; a < mp; ++a)
            support.push_back(concat(outer.codewords_x[a], inner.codewords_x[map_a[a]]));
        id.dists_x.push_back(SparseDist::uniform_over(std::move(support)));
    }
    for (const auto& map_b : res.maps.maps_b) {
        std::vector<Word> support;
        for (std::size_t b = 0; b < np; ++b)
            support.push_back(concat(outer.codewords_y[b], inner.codewords_y[map_b[b]]));
        id.dists_y.push_back(SparseDist::uniform_over(std::move(support)));
    }
    const std::size_t dim = d_outer * d_inner;
    for (std::size_t i = 0; i < m_target; ++i)
        for (std::size_t j = 0; j < n_target; ++j) {
            ComplexMatrix ident(dim, dim);
            for (std::size_t a = 0; a < mp; ++a)
                for (std::size_t b = 0; b < np; ++b)
                    ident += tensor(outer.decoder(a, b),
                                    inner.decoder(res.maps.maps_a[i][a], res.maps.maps_b[j][b]));
            id.identifiers.push_back(std::move(ident));
        }
    res.id_code = std::move(id);

    // refinement grid: r = (a, c), s = (b, d); one extra corner element
    // swallows the failure mass when either constituent code carries one
    const bool with_fail = outer.failure_decoder.has_value() || inner.failure_decoder.has_value();
    SimultaneousStructure st;
    st.r_count = mp * mpp + (with_fail ? 1 : 0);
    st.s_count = np * npp + (with_fail ? 1 : 0);
    st.refinement.assign(st.r_count * st.s_count, ComplexMatrix(dim, dim));
    for (std::size_t a = 0; a < mp; ++a)
        for (std::size_t c = 0; c < mpp; ++c)
            for (std::size_t b = 0; b < np; ++b)
                for (std::size_t d = 0; d < npp; ++d)
                    st.refinement[(a * mpp + c) * st.s_count + (b * npp + d)] =
                        tensor(outer.decoder(a, b), inner.decoder(c, d));
    if (with_fail) {
        ComplexMatrix sum_outer(d_outer, d_outer), sum_inner(d_inner, d_inner);
        for (const auto& e : outer.decoders) sum_outer += e;
        for (const auto& e : inner.decoders) sum_inner += e;
        ComplexMatrix rest = ComplexMatrix::identity(dim);
        rest -= tensor(sum_outer, sum_inner);
        st.refinement[(st.r_count - 1) * st.s_count + (st.s_count - 1)] = std::move(rest);
    }
    for (const auto& map_a : res.maps.maps_a) {
        std::vector<std::size_t> subset;
        for (std::size_t a = 0; a < mp; ++a) subset.push_back(a * mpp + map_a[a]);
        st.subsets_a.push_back(std::move(subset));
    }
    for (const auto& map_b : res.maps.maps_b) {
        std::vector<std::size_t> subset;
        for (std::size_t b = 0; b < np; ++b) subset.push_back(b * npp + map_b[b]);
        st.subsets_b.push_back(std::move(subset));
    }
    res.structure = std::move(st);
    return res;
}

struct TransformatorVerifyReport {
    bool ok = false;
    double lambda = 0.0;
    std::size_t max_overlap_a = 0, max_overlap_b = 0;
    double threshold_a = 0.0, threshold_b = 0.0; // lambda M', lambda N'
    // Chernov-Hoeffding prediction for a single fresh pair exceeding the
    // threshold, and the union-bound schedule over all pairs.
    double pair_bound_a = 1.0, pair_bound_b = 1.0;
    double union_bound_total = 0.0;
};

// Checks every pairwise overlap against lambda M' / lambda N' and reports
// the tail-bound budget the construction consumed.
inline TransformatorVerifyReport transformator_verify(const TransformatorResult& res, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw validation_error("transformator_verify: lambda must lie in (0,1)");
    TransformatorVerifyReport rep;
    rep.lambda = lambda;
    rep.threshold_a = lambda * static_cast<double>(res.m_prime);
    rep.threshold_b = lambda * static_cast<double>(res.n_prime);
    for (std::size_t i = 0; i < res.overlap_a.size(); ++i)
        for (std::size_t j = i + 1; j < res.overlap_a.size(); ++j)
            rep.max_overlap_a = std::max(rep.max_overlap_a, res.overlap_a[i][j]);
    for (std::size_t i = 0; i < res.overlap_b.size(); ++i)
        for (std::size_t j = i + 1; j < res.overlap_b.size(); ++j)
            rep.max_overlap_b = std::max(rep.max_overlap_b, res.overlap_b[i][j]);
    rep.ok = static_cast<double>(rep.max_overlap_a) <= rep.threshold_a &&
             static_cast<double>(rep.max_overlap_b) <= rep.threshold_b;

    const double mu_a = 1.0 / static_cast<double>(res.m_double);
    const double mu_b = 1.0 / static_cast<double>(res.n_double);
    if (mu_a < lambda) rep.pair_bound_a = chernoff_tail_bound(lambda, mu_a, res.m_prime);
    if (mu_b < lambda) rep.pair_bound_b = chernoff_tail_bound(lambda, mu_b, res.n_prime);
    const double m = static_cast<double>(res.maps.maps_a.size());
    const double n = static_cast<double>(res.maps.maps_b.size());
    rep.union_bound_total = (m - 1.0) * rep.pair_bound_a + (n - 1.0) * rep.pair_bound_b;
    return rep;
}

// lambda_k = lambda(sqrt k) + lambda(k) lambda(sqrt k), the residual term of
// the second-kind error chain; lambdas are the measured max errors of the
// constituent codes.
inline double transformator_lambda_k(double lambda_outer, double lambda_inner) {
    return lambda_inner + lambda_outer * lambda_inner;
}

} // namespace cqmac
