#pragma once

#include <cstdint>
#include <vector>

#include "derham/complex.hpp"
#include "derham/errors.hpp"

namespace derham {

// ---------------------------------------------------------------------------
// Monotone surjections [n] ->> [k], encoded by their jump walls: sigma jumps
// at wall i when sigma(i+1) = sigma(i) + 1. A surjection is exactly a k-subset
// of the n walls, stored as a bitmask.
// ---------------------------------------------------------------------------

using Mask = std::uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }

enum class FaceActionKind { Zero, Identity, Differential };

struct FaceAction {
    FaceActionKind kind;
    Mask target;  // jump mask of the composite surjection at level n-1
};

/// Action of the i-th face on the summand indexed by `mask` at level n.
/// Composition with the coface either stays surjective (Identity onto the
/// re-indexed surjection), or skips one value: skipping the bottom value
/// feeds the differential of the underlying complex, anything else dies.
inline FaceAction face_on_surjection(Mask mask, int n, int i) {
    bool jump_before = (i > 0) && ((mask >> (i - 1)) & 1);
    bool jump_after = (i < n) && ((mask >> i) & 1);
    bool miss = (i == 0 || jump_before) && (i == n || jump_after);
    if (miss) {
        if (i == 0) return {FaceActionKind::Differential, static_cast<Mask>(mask >> 1)};
        return {FaceActionKind::Zero, 0};
    }
    if (i == 0) return {FaceActionKind::Identity, static_cast<Mask>(mask >> 1)};
    if (i == n) return {FaceActionKind::Identity, mask};
    Mask low = mask & ((Mask(1) << (i - 1)) - 1);
    Mask mid = (((mask >> (i - 1)) ^ (mask >> i)) & 1) << (i - 1);
    Mask high = (mask >> (i + 1)) << i;
    return {FaceActionKind::Identity, static_cast<Mask>(low | mid | high)};
}

/// Action of the i-th degeneracy: always an isomorphism onto the summand of
/// the composite surjection at level n+1.
inline Mask degeneracy_on_surjection(Mask mask, int i) {
    Mask low = mask & ((Mask(1) << i) - 1);
    Mask high = (mask >> i) << (i + 1);
    return low | high;
}

inline std::vector<Mask> surjection_masks(int n, int k) {
    std::vector<Mask> out;
    if (k < 0 || k > n) return out;
    for (Mask m = 0; m < (Mask(1) << n); ++m)
        if (popcount(m) == k) out.push_back(m);
    return out;
}

// ---------------------------------------------------------------------------
// Simplicial modules
// ---------------------------------------------------------------------------

/// A levelwise free simplicial module with explicit face and degeneracy
/// matrices, truncated above level_max.
struct SimplicialModule {
    RingSpec ring;
    int level_max = 0;
    std::vector<int> ranks;                   // ranks[n], 0 <= n <= level_max
    std::vector<std::vector<Matrix>> faces;   // faces[n][i] : level n -> n-1
    std::vector<std::vector<Matrix>> degens;  // degens[n][i]: level n -> n+1

    int rank(int n) const { return (n >= 0 && n <= level_max) ? ranks[n] : 0; }

    /// Exact check of the simplicial identities up to level_max.
    void validate() const {
        for (int n = 2; n <= level_max; ++n)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i < j; ++i)
                    if (faces[n - 1][i] * faces[n][j] != faces[n - 1][j - 1] * faces[n][i])
                        throw std::logic_error("simplicial identity d_i d_j failed");
        for (int n = 0; n + 1 <= level_max; ++n)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n + 1; ++i) {
                    Matrix lhs = faces[n + 1][i] * degens[n][j];
                    if (i == j || i == j + 1) {
                        if (lhs != Matrix::identity(ring, ranks[n]))
                            throw std::logic_error("simplicial identity d s = id failed");
                    } else if (i < j) {
                        if (n < 1 || lhs != degens[n - 1][j - 1] * faces[n][i])
                            throw std::logic_error("simplicial identity d_i s_j (i<j) failed");
                    } else {  // i > j + 1
                        if (n < 1 || lhs != degens[n - 1][j] * faces[n][i - 1])
                            throw std::logic_error("simplicial identity d_i s_j (i>j+1) failed");
                    }
                }
        for (int n = 0; n + 2 <= level_max; ++n)
            for (int i = 0; i <= n; ++i)
                for (int j = i; j <= n; ++j)
                    if (degens[n + 1][i] * degens[n][j] != degens[n + 1][j + 1] * degens[n][i])
                        throw std::logic_error("simplicial identity s_i s_j failed");
    }
};

/// Dold-Kan inverse: level n is the sum of copies of c_k over surjections
/// [n] ->> [k]. Requires connective, levelwise free input.
inline SimplicialModule dk_gamma(const ChainComplex& c, int level_max) {
    if (!c.is_zero() && c.lo() < 0) throw precondition_error("dk_gamma: complex must be connective");
    SimplicialModule s;
    s.ring = c.ring();
    s.level_max = level_max;
    s.ranks.assign(level_max + 1, 0);

    // basis bookkeeping: level n elements are (mask, idx) ordered by
    // popcount(mask), then mask, then idx
    struct Elem {
        Mask mask;
        int k, idx;
    };
    std::vector<std::vector<Elem>> basis(level_max + 1);
    std::vector<std::map<std::pair<Mask, int>, int>> pos(level_max + 1);
    for (int n = 0; n <= level_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            if (c.rank(k) == 0) continue;
            for (Mask m : surjection_masks(n, k))
                for (int idx = 0; idx < c.rank(k); ++idx) {
                    pos[n][{m, idx}] = static_cast<int>(basis[n].size());
                    basis[n].push_back({m, k, idx});
                }
        }
        s.ranks[n] = static_cast<int>(basis[n].size());
    }

    s.faces.resize(level_max + 1);
    s.degens.resize(level_max + 1);
    for (int n = 0; n <= level_max; ++n) {
        if (n >= 1) {
            s.faces[n].resize(n + 1, Matrix(c.ring(), s.ranks[n - 1], s.ranks[n]));
            for (int i = 0; i <= n; ++i) {
                Matrix& f = s.faces[n][i];
                for (size_t col = 0; col < basis[n].size(); ++col) {
                    const Elem& e = basis[n][col];
                    FaceAction a = face_on_surjection(e.mask, n, i);
                    if (a.kind == FaceActionKind::Zero) continue;
                    if (a.kind == FaceActionKind::Identity) {
                        f.set(pos[n - 1].at({a.target, e.idx}), static_cast<int>(col), Rat(1));
                    } else {
                        Matrix dk = c.d(e.k);  // c_k -> c_{k-1}
                        for (int row = 0; row < dk.rows(); ++row)
                            if (dk(row, e.idx) != 0)
                                f.set(pos[n - 1].at({a.target, row}), static_cast<int>(col), dk(row, e.idx));
                    }
                }
            }
        }
        if (n < level_max) {
            s.degens[n].resize(n + 1, Matrix(c.ring(), s.ranks[n + 1], s.ranks[n]));
            for (int i = 0; i <= n; ++i) {
                Matrix& g = s.degens[n][i];
                for (size_t col = 0; col < basis[n].size(); ++col) {
                    const Elem& e = basis[n][col];
                    Mask t = degeneracy_on_surjection(e.mask, i);
                    g.set(pos[n + 1].at({t, e.idx}), static_cast<int>(col), Rat(1));
                }
            }
        }
    }
    return s;
}

struct NormalizedComplex {
    ChainComplex complex;
    bool truncated = false;  // levels above the cutoff were dropped
};

/// Normalized chains N_n = ker(d_1) cap ... cap ker(d_n) with differential
/// d_0, computed with saturated kernels so the result is levelwise free.
inline NormalizedComplex normalize(const SimplicialModule& s, int degree_cutoff) {
    if (degree_cutoff > s.level_max) throw precondition_error("normalize: cutoff exceeds available levels");
    std::vector<Matrix> nbasis(degree_cutoff + 1);
    std::map<int, int> ranks;
    for (int n = 0; n <= degree_cutoff; ++n) {
        Matrix k = Matrix::identity(s.ring, s.rank(n));
        for (int i = 1; i <= n; ++i) {
            if (k.cols() == 0) break;
            k = k * kernel_basis(s.faces[n][i] * k);
        }
        nbasis[n] = k;
        if (k.cols() > 0) ranks[n] = k.cols();
    }
    std::map<int, Matrix> d;
    for (int n = 1; n <= degree_cutoff; ++n) {
        if (nbasis[n].cols() == 0 || nbasis[n - 1].cols() == 0) continue;
        auto comp = solve(nbasis[n - 1], s.faces[n][0] * nbasis[n]);
        if (!comp) throw std::logic_error("normalize: face_0 does not preserve normalized chains");
        if (!comp->is_zero()) d[n] = *comp;
    }
    NormalizedComplex out{ChainComplex(s.ring, ranks, d), false};
    for (int n = degree_cutoff + 1; n <= s.level_max; ++n)
        if (s.rank(n) > 0) out.truncated = true;
    return out;
}

}  // namespace derham
