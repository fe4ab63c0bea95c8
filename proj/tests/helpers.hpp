#pragma once

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "derham/complex.hpp"

namespace derham::testing {

/// Deterministic random matrix with entries in [-bound, bound].
inline Matrix random_matrix(std::mt19937& rng, RingSpec ring, int rows, int cols, int bound = 3) {
    std::uniform_int_distribution<int> dist(-bound, bound);
    Matrix m(ring, rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.set(r, c, Rat(dist(rng)));
    return m;
}

/// Random unimodular matrix: a product of elementary row operations.
inline Matrix random_unimodular(std::mt19937& rng, int n, int ops = 12) {
    std::uniform_int_distribution<int> pick(0, n - 1), coeff(-2, 2);
    Matrix u = Matrix::identity(RingSpec::Z(), n);
    for (int t = 0; t < ops && n > 1; ++t) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Matrix e = Matrix::identity(RingSpec::Z(), n);
        e.set(i, j, Rat(coeff(rng)));
        u = u * e;
    }
    return u;
}

/// Random two-term complex [P_1 -> P_0] in degrees [0, 1].
inline ChainComplex random_two_term(std::mt19937& rng, RingSpec ring, int r0, int r1, int bound = 2) {
    std::map<int, int> ranks{{0, r0}, {1, r1}};
    std::map<int, Matrix> d;
    if (r0 > 0 && r1 > 0) d[1] = random_matrix(rng, ring, r0, r1, bound);
    return ChainComplex(ring, ranks, d);
}

inline FgModule fg_free(RingSpec ring, int rank) { return FgModule{ring, rank, {}}; }
inline FgModule fg_tor(RingSpec ring, std::vector<Int> t) { return FgModule{ring, 0, std::move(t)}; }

/// Straight homology computation without the unit-pivot reduction pass,
/// used as an oracle against reduce_complex.
inline HomologyTable homology_plain(const ChainComplex& c) {
    HomologyTable out;
    for (auto& [deg, r] : c.ranks()) {
        Matrix k = kernel_basis(c.d(deg));
        if (k.cols() == 0) continue;
        auto x = solve(k, c.d(deg + 1));
        REQUIRE(x.has_value());
        FgModule h = cokernel(*x);
        if (!h.is_zero()) out[deg] = h;
    }
    return out;
}

}  // namespace derham::testing
