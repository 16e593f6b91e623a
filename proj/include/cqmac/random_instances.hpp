#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cqmac/channel.hpp"
#include "cqmac/eig.hpp"
#include "cqmac/quantum.hpp"
#include "cqmac/rng.hpp"

namespace cqmac {

// Seeded generators for random test instances. Everything is driven by the
// portable SplitMix64 stream so failures replay from a seed alone.

inline ComplexMatrix random_matrix(std::size_t dim, SplitMix64& rng) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m(i, j) = Complex(rng.next_symmetric(), rng.next_symmetric());
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t dim, SplitMix64& rng) {
    ComplexMatrix a = random_matrix(dim, rng);
    ComplexMatrix h(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

inline DensityOperator random_density(std::size_t dim, SplitMix64& rng) {
    const ComplexMatrix a = random_matrix(dim, rng);
    ComplexMatrix g = a * dagger(a);
    const double tr = trace(g).real();
    g *= Complex(1.0 / tr, 0.0);
    return DensityOperator(std::move(g));
}

// Unitary as the eigenvector matrix of a random Hermitian.
inline ComplexMatrix random_unitary(std::size_t dim, SplitMix64& rng) {
    return hermitian_eig(random_hermitian(dim, rng)).vectors;
}

// n random effects E_i = S^{-1/2} G_i S^{-1/2} with G_i = A_i A_i^dagger + cI;
// the ridge keeps S invertible and the construction sums to the identity.
inline POVM random_povm(std::size_t dim, std::size_t n, SplitMix64& rng) {
    std::vector<ComplexMatrix> gs;
    ComplexMatrix s(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix a = random_matrix(dim, rng);
        ComplexMatrix g = a * dagger(a);
        for (std::size_t d = 0; d < dim; ++d) g(d, d) += 0.05;
        s += g;
        gs.push_back(std::move(g));
    }
    const EigResult es = hermitian_eig(s);
    ComplexMatrix inv_sqrt(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const double w = 1.0 / std::sqrt(es.values[c]);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                inv_sqrt(i, j) += es.vectors(i, c) * std::conj(es.vectors(j, c)) * w;
    }
    std::vector<ComplexMatrix> elems;
    for (auto& g : gs) elems.push_back(inv_sqrt * g * inv_sqrt);
    // symmetrize away the last float drift before validation
    for (auto& e : elems) {
        ComplexMatrix h(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) h(i, j) = 0.5 * (e(i, j) + std::conj(e(j, i)));
        e = std::move(h);
    }
    return POVM(std::move(elems));
}

inline Distribution random_distribution(std::size_t n, SplitMix64& rng) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& v : w) {
        v = -std::log(1.0 - rng.next_double());
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return Distribution(std::move(w));
}

inline CCQChannel random_ccq_channel(std::size_t nx, std::size_t ny, std::size_t dim,
                                     SplitMix64& rng) {
    std::vector<DensityOperator> outs;
    for (std::size_t i = 0; i < nx * ny; ++i) outs.push_back(random_density(dim, rng));
    return CCQChannel(Alphabet::indexed(nx, "x"), Alphabet::indexed(ny, "y"), dim, std::move(outs));
}

inline CQChannel random_cq_channel(std::size_t nx, std::size_t dim, SplitMix64& rng) {
    std::vector<DensityOperator> outs;
    for (std::size_t i = 0; i < nx; ++i) outs.push_back(random_density(dim, rng));
    return CQChannel(nx, 1, dim, std::move(outs));
}

// Noiseless channel W(x, y) = |xy><xy| of dimension |X| * |Y|.
inline CCQChannel noiseless_channel(std::size_t nx, std::size_t ny) {
    std::vector<DensityOperator> outs;
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
            outs.push_back(DensityOperator::pure_basis_state(nx * ny, x * ny + y));
    return CCQChannel(Alphabet::indexed(nx, "x"), Alphabet::indexed(ny, "y"), nx * ny, std::move(outs));
}

// Channel that ignores both senders and always emits rho.
inline CCQChannel constant_channel(std::size_t nx, std::size_t ny, const DensityOperator& rho) {
    std::vector<DensityOperator> outs(nx * ny, rho);
    return CCQChannel(Alphabet::indexed(nx, "x"), Alphabet::indexed(ny, "y"), rho.dim(), std::move(outs));
}

} // namespace cqmac

#include "cqmac/coding.hpp"

namespace cqmac {

// The canonical perfect code on the noiseless channel: every single-letter
// pair is a message and the decoders are the basis projectors.
inline TransmissionCode perfect_code(const CCQChannel& noiseless) {
    if (noiseless.k() != 1 || noiseless.dim() != noiseless.x_alphabet().size() * noiseless.y_alphabet().size())
        throw validation_error("perfect_code expects the k=1 noiseless channel");
    TransmissionCode c;
    c.k = 1;
    c.x_size = noiseless.x_alphabet().size();
    c.y_size = noiseless.y_alphabet().size();
    for (std::size_t x = 0; x < c.x_size; ++x) c.codewords_x.push_back(Word{x});
    for (std::size_t y = 0; y < c.y_size; ++y) c.codewords_y.push_back(Word{y});
    for (std::size_t x = 0; x < c.x_size; ++x)
        for (std::size_t y = 0; y < c.y_size; ++y)
            c.decoders.push_back(ComplexMatrix::basis_op(noiseless.dim(), x * c.y_size + y, x * c.y_size + y));
    return c;
}

// Random (k, M, N)-code over a channel: iid random codewords per sender
// (repeats allowed, as in the code definition) and a random POVM as the
// decoder family. Pass distinct = true to force distinct codewords, which
// then requires M <= |X|^k.
inline TransmissionCode random_code(const CCQChannel& wk, std::size_t m, std::size_t n,
                                    SplitMix64& rng, bool distinct = false) {
    TransmissionCode c;
    c.k = wk.k();
    c.x_size = wk.x_alphabet().size();
    c.y_size = wk.y_alphabet().size();
    auto pick = [&](std::size_t count, std::size_t space, std::size_t alphabet) {
        if (distinct && count > space)
            throw validation_error("random_code: more distinct codewords than words");
        std::vector<std::size_t> chosen;
        while (chosen.size() < count) {
            const std::size_t v = rng.next_below(space);
            if (distinct && std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
            chosen.push_back(v);
        }
        std::vector<Word> words;
        for (auto v : chosen) words.push_back(index_to_word(v, alphabet, wk.k()));
        return words;
    };
    c.codewords_x = pick(m, wk.x_words(), c.x_size);
    c.codewords_y = pick(n, wk.y_words(), c.y_size);
    c.decoders = random_povm(wk.dim(), m * n, rng).elements();
    return c;
}

} // namespace cqmac
