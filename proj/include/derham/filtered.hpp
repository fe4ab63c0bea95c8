#pragma once

#include <vector>

#include "derham/graded.hpp"
#include "derham/errors.hpp"

namespace derham {

/// An N-stub: a nonnegative filtration recorded in weights 0..N-1, with
/// transition chain maps F^{s+1} -> F^s. By convention F^s = F^0 for s < 0
/// and weights >= N are out of range. A stub is strict when every
/// transition component is injective, which is verified exactly.
struct FilteredStub {
    int N = 0;
    std::vector<ChainComplex> levels;   // F^0 .. F^{N-1}
    std::vector<ChainMap> transitions;  // t_s : F^{s+1} -> F^s, s = 0..N-2
    bool strict = false;

    FilteredStub() = default;
    FilteredStub(std::vector<ChainComplex> lv, std::vector<ChainMap> tr)
        : N(static_cast<int>(lv.size())), levels(std::move(lv)), transitions(std::move(tr)) {
        if (N == 0) throw std::invalid_argument("stub needs at least one level");
        if (static_cast<int>(transitions.size()) != N - 1)
            throw std::invalid_argument("stub needs exactly N-1 transitions");
        for (int s = 0; s + 1 < N; ++s) {
            if (transitions[s].source != levels[s + 1] || transitions[s].target != levels[s])
                throw std::invalid_argument("stub transition endpoints mismatch at weight " + std::to_string(s));
        }
        strict = true;
        for (const ChainMap& t : transitions)
            for (auto& [deg, r] : t.source.ranks())
                if (kernel_basis(t.at(deg)).cols() > 0) {
                    strict = false;
                    break;
                }
    }

    const RingSpec& ring() const { return levels[0].ring(); }

    /// F^s with the nonnegative convention: clamped to F^0 below weight 0.
    const ChainComplex& level(int s) const {
        if (s < 0) return levels[0];
        if (s >= N) throw std::out_of_range("stub level beyond weight range");
        return levels[s];
    }

    /// ins^w(M): M in weights <= w (identity transitions), 0 above.
    static FilteredStub ins(int w, const ChainComplex& m, int n_levels) {
        std::vector<ChainComplex> lv;
        std::vector<ChainMap> tr;
        for (int s = 0; s < n_levels; ++s) lv.push_back(s <= w ? m : ChainComplex(m.ring()));
        for (int s = 0; s + 1 < n_levels; ++s)
            tr.push_back(s + 1 <= w ? ChainMap::identity(m) : ChainMap::zero(lv[s + 1], lv[s]));
        return FilteredStub(std::move(lv), std::move(tr));
    }

    static FilteredStub constant(const ChainComplex& m, int n_levels) { return ins(n_levels - 1, m, n_levels); }

    /// Direct sum of stubs, weightwise.
    static FilteredStub sum(const FilteredStub& a, const FilteredStub& b) {
        if (a.N != b.N) throw std::invalid_argument("stub sum: length mismatch");
        std::vector<ChainComplex> lv;
        std::vector<ChainMap> tr;
        for (int s = 0; s < a.N; ++s) lv.push_back(direct_sum(a.levels[s], b.levels[s]));
        for (int s = 0; s + 1 < a.N; ++s) {
            std::map<int, Matrix> comps;
            for (auto& [deg, r] : lv[s + 1].ranks()) {
                Matrix m = Matrix::block_diag(a.transitions[s].at(deg), b.transitions[s].at(deg));
                comps[deg] = m;
            }
            tr.push_back(ChainMap(lv[s + 1], lv[s], comps));
        }
        return FilteredStub(std::move(lv), std::move(tr));
    }
};

/// gr^s = cofiber of the transition; the top weight is its own graded
/// piece by the stub convention.
inline GradedComplex associated_graded(const FilteredStub& f) {
    GradedComplex out(f.ring());
    for (int s = 0; s < f.N; ++s)
        out.set_piece(s, (s == f.N - 1) ? f.levels[s] : cone(f.transitions[s]));
    return out;
}

/// Postnikov stub tau_{>= *}(c) for connective c; strict by construction
/// (the truncation uses saturated kernels).
inline FilteredStub postnikov_stub(const ChainComplex& c, int n_levels) {
    if (!c.is_zero() && c.lo() < 0) throw precondition_error("postnikov_stub: complex must be connective");
    std::vector<ChainComplex> lv;
    for (int s = 0; s < n_levels; ++s) lv.push_back(truncate_connective(c, s));
    std::vector<ChainMap> tr;
    for (int s = 0; s + 1 < n_levels; ++s) {
        const ChainComplex &src = lv[s + 1], &tgt = lv[s];
        std::map<int, Matrix> comps;
        for (auto& [deg, r] : src.ranks()) {
            if (deg > s + 1) comps[deg] = Matrix::identity(c.ring(), r);
            else comps[deg] = kernel_basis(c.d(s + 1));  // deg == s+1 into the full term
        }
        tr.push_back(ChainMap(src, tgt, comps));
    }
    return FilteredStub(std::move(lv), std::move(tr));
}

/// Day convolution of strict stubs via the image model:
/// (a ox b)^s = sum of the images of F^i a ox F^j b, i+j = s, inside
/// F^0 a ox F^0 b, truncated to min(Na, Nb) weights.
inline FilteredStub day_tensor_stub(const FilteredStub& a, const FilteredStub& b) {
    if (a.ring() != b.ring()) throw std::invalid_argument("day_tensor_stub: ring mismatch");
    if (!a.strict || !b.strict)
        throw precondition_error("day_tensor_stub: both stubs must be strict (injective transitions)");
    int n = std::min(a.N, b.N);
    const ChainComplex total = tensor(a.levels[0], b.levels[0]);

    // composite transition F^i -> F^0 on each side
    auto composites = [](const FilteredStub& f, int upto) {
        std::vector<ChainMap> out;
        out.push_back(ChainMap::identity(f.levels[0]));
        for (int i = 1; i < upto; ++i) out.push_back(compose(out[i - 1], f.transitions[i - 1]));
        return out;
    };
    std::vector<ChainMap> ca = composites(a, n), cb = composites(b, n);

    // per weight: a lattice basis of the summed image in each degree
    std::vector<std::map<int, Matrix>> basis(n);
    for (int s = 0; s < n; ++s) {
        std::map<int, Matrix> span;  // degree -> collected columns in total coords
        for (int i = 0; i < n; ++i) {
            int j = s - i;
            if (j < 0 || j >= n) continue;
            if (a.levels[i].is_zero() || b.levels[j].is_zero()) continue;
            ChainMap emb = tensor_map(ca[i], cb[j]);
            for (auto& [deg, r] : emb.source.ranks()) {
                Matrix cols = emb.at(deg);
                auto it = span.find(deg);
                if (it == span.end()) span[deg] = cols;
                else it->second = Matrix::hstack(it->second, cols);
            }
        }
        for (auto& [deg, cols] : span) {
            Matrix bb = column_space_basis(cols);
            if (bb.cols() > 0) basis[s][deg] = bb;
        }
    }

    std::vector<ChainComplex> lv;
    for (int s = 0; s < n; ++s) {
        std::map<int, int> ranks;
        std::map<int, Matrix> d;
        for (auto& [deg, bb] : basis[s]) ranks[deg] = bb.cols();
        for (auto& [deg, bb] : basis[s]) {
            if (!basis[s].count(deg - 1)) {
                if (!(total.d(deg) * bb).is_zero())
                    throw std::logic_error("day_tensor_stub: image lattice not closed under d");
                continue;
            }
            auto comp = solve(basis[s][deg - 1], total.d(deg) * bb);
            if (!comp) throw std::logic_error("day_tensor_stub: image lattice not closed under d");
            if (!comp->is_zero()) d[deg] = *comp;
        }
        lv.push_back(ChainComplex(a.ring(), ranks, d));
    }
    std::vector<ChainMap> tr;
    for (int s = 0; s + 1 < n; ++s) {
        std::map<int, Matrix> comps;
        for (auto& [deg, bb] : basis[s + 1]) {
            auto x = solve(basis[s].at(deg), bb);
            if (!x) throw std::logic_error("day_tensor_stub: filtration not nested");
            comps[deg] = *x;
        }
        tr.push_back(ChainMap(lv[s + 1], lv[s], comps));
    }
    return FilteredStub(std::move(lv), std::move(tr));
}

/// Rees picture: the underlying graded object together with the weight -1
/// operator t given by the transitions.
struct ReesModule {
    GradedComplex graded;
    std::vector<ChainMap> t;  // t[s] : weight s+1 -> weight s
};

inline ReesModule rees(const FilteredStub& f) {
    ReesModule out;
    out.graded = GradedComplex(f.ring());
    for (int s = 0; s < f.N; ++s) out.graded.pieces[s] = f.levels[s];
    out.t = f.transitions;
    return out;
}

// ---------------------------------------------------------------------------
// Presented homology: homology of F^s/F^{s+1} described by a free cover with
// relation columns, retaining canonical generators so connecting maps can be
// expressed exactly. Used by coherent_cochain.
// ---------------------------------------------------------------------------

struct PresentedClassGroup {
    RingSpec ring;
    FgModule module;  // torsion coordinates first, then free, matching coord_factors
    Matrix gens;      // cover coordinates of a basis of the cycle lattice
    Matrix u;         // row transform normalizing the relation presentation
    std::vector<Int> diag;          // factors aligned with u-rows (0 free, 1 collapsed)
    std::vector<Int> coord_factors; // retained coordinates: invariant factor, 0 = free

    /// canonical coordinates (one per retained coordinate) of a cover
    /// vector that lies in the cycle lattice
    std::vector<Rat> class_of(const Matrix& v) const {
        auto aa = solve(gens, v);
        if (!aa) throw std::logic_error("presented class: vector is not a cycle");
        Matrix c = u * *aa;
        std::vector<Rat> out;
        for (int i = 0; i < c.rows(); ++i) {
            if (diag[i] == 1) continue;
            if (diag[i] == 0) {
                out.push_back(c(i, 0));
            } else {
                Int red = c(i, 0).get_num() % diag[i];
                if (red < 0) red += diag[i];
                out.push_back(Rat(red));
            }
        }
        return out;
    }
};

/// Homology in one degree of a quotient complex cover/relations, where the
/// relation columns form a subcomplex (d maps relations into relations).
inline PresentedClassGroup presented_homology(const ChainComplex& cover, const std::map<int, Matrix>& rel, int deg) {
    RingSpec ring = cover.ring();
    auto rel_at = [&](int n) {
        auto it = rel.find(n);
        return it == rel.end() ? Matrix(ring, cover.rank(n), 0) : it->second;
    };
    // cycle lattice: d x lies in the relation span one degree down
    Matrix d = cover.d(deg);
    Matrix rbelow = rel_at(deg - 1);
    Matrix gens;
    if (cover.rank(deg) == 0) {
        gens = Matrix(ring, 0, 0);
    } else if (d.rows() == 0) {
        gens = Matrix::identity(ring, cover.rank(deg));
    } else {
        Matrix stacked = rbelow.cols() > 0 ? Matrix::hstack(d, rbelow) : d;
        Matrix k = kernel_basis(stacked);
        Matrix first = k.submatrix(0, 0, cover.rank(deg), k.cols());
        gens = column_space_basis(first);
    }
    // relations inside the cycle lattice: the degree-deg relation columns
    // plus boundaries from above
    Matrix rels = rel_at(deg);
    Matrix bdry = cover.d(deg + 1);
    Matrix all = rels;
    if (bdry.cols() > 0) all = all.cols() > 0 ? Matrix::hstack(all, bdry) : bdry;
    Matrix x(ring, gens.cols(), all.cols());
    if (all.cols() > 0 && gens.cols() > 0) {
        auto sol = solve(gens, all);
        if (!sol) throw std::logic_error("presented_homology: relations escape the cycle lattice");
        x = *sol;
    }

    PresentedClassGroup out{ring, FgModule{ring, 0, {}}, gens, Matrix::identity(ring, gens.cols()), {}, {}};
    if (ring.kind == RingKind::Integers) {
        SmithForm f = smith_normal_form(x);
        out.u = f.u;
        out.diag.assign(gens.cols(), 0);
        for (int t = 0; t < f.rank; ++t) out.diag[t] = f.d(t, t).get_num();
    } else {
        // track row operations reducing x so that u*x has pivot rows first
        Matrix a = x;
        Matrix u = Matrix::identity(ring, gens.cols());
        int r = 0;
        for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
            int piv = -1;
            for (int i = r; i < a.rows(); ++i)
                if (a(i, c) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            detail::swap_rows(a, r, piv);
            detail::swap_rows(u, r, piv);
            Rat inv = ring.inv(a(r, c));
            detail::scale_row(a, r, inv);
            detail::scale_row(u, r, inv);
            for (int i = 0; i < a.rows(); ++i)
                if (i != r && a(i, c) != 0) {
                    Rat q = ring.neg(a(i, c));
                    detail::add_row(a, i, r, q);
                    detail::add_row(u, i, r, q);
                }
            ++r;
        }
        out.u = u;
        out.diag.assign(gens.cols(), 0);
        for (int t = 0; t < r; ++t) out.diag[t] = 1;
    }
    for (const Int& dd : out.diag) {
        if (dd == 1) continue;
        out.coord_factors.push_back(dd);
        if (dd == 0) out.module.free_rank++;
        else out.module.torsion.push_back(dd);
    }
    return out;
}

/// Coherent cochain complex of a strict stub: term_s = H_{-s}(gr^s) with
/// the exact connecting map of F^{s+2} < F^{s+1} < F^s as d1. Coordinates
/// follow coord_factors: torsion generators first, then free ones.
struct CoherentCochain {
    std::map<int, FgModule> terms;
    std::map<int, std::vector<Int>> coord_factors;
    std::map<int, Matrix> d1;  // canonical coordinates term_s -> term_{s+1}
};

inline CoherentCochain coherent_cochain(const FilteredStub& f) {
    if (!f.strict) throw precondition_error("coherent_cochain: stub must be strict");
    RingSpec ring = f.ring();
    // presented model of gr^s = F^s / im(t_s)
    std::vector<PresentedClassGroup> groups;
    std::vector<std::map<int, Matrix>> rels(f.N);
    for (int s = 0; s < f.N; ++s) {
        if (s + 1 < f.N)
            for (auto& [deg, r] : f.levels[s + 1].ranks()) rels[s][deg] = f.transitions[s].at(deg);
        groups.push_back(presented_homology(f.levels[s], rels[s], -s));
    }
    CoherentCochain out;
    for (int s = 0; s < f.N; ++s) {
        out.terms[s] = groups[s].module;
        out.coord_factors[s] = groups[s].coord_factors;
    }

    for (int s = 0; s + 1 < f.N; ++s) {
        const PresentedClassGroup& src = groups[s];
        const PresentedClassGroup& dst = groups[s + 1];
        int ncols = static_cast<int>(src.coord_factors.size());
        int nrows = static_cast<int>(dst.coord_factors.size());
        Matrix d1(ring, nrows, ncols);
        if (ncols > 0 && nrows > 0) {
            // connecting map: lift a generator, take d in F^s, pull back
            // through the injective transition, read the class in gr^{s+1}
            int col = 0;
            Matrix dmat = f.levels[s].d(-s);
            for (int g = 0; g < src.gens.cols(); ++g) {
                if (g < static_cast<int>(src.diag.size()) && src.diag[g] == 1) continue;
                // generator in canonical coordinates is u^{-1} e_g; use the
                // cover representative gens * u_inv e_g instead
                Matrix uinv_col = solve(src.u, Matrix::identity(ring, src.gens.cols()).column(g)).value();
                Matrix lift = src.gens * uinv_col;
                Matrix dx = dmat * lift;  // lies in im(t_s) by construction
                auto y = solve(f.transitions[s].at(-s - 1), dx);
                if (!y) throw std::logic_error("coherent_cochain: boundary not in the next level");
                std::vector<Rat> cls = dst.class_of(*y);
                for (int rw = 0; rw < nrows; ++rw) d1.set(rw, col, cls[rw]);
                ++col;
            }
        }
        out.d1[s] = d1;
    }
    return out;
}

/// d1 o d1 vanishes in every canonical coordinate (modulo the target's
/// invariant factor for torsion coordinates).
inline bool coherent_d1_squares_to_zero(const CoherentCochain& c) {
    for (auto& [s, m1] : c.d1) {
        auto it = c.d1.find(s + 1);
        if (it == c.d1.end()) continue;
        Matrix comp = it->second * m1;
        const std::vector<Int>& factors = c.coord_factors.at(s + 2);
        for (int r = 0; r < comp.rows(); ++r)
            for (int cc = 0; cc < comp.cols(); ++cc) {
                if (comp(r, cc) == 0) continue;
                if (factors[r] == 0) return false;
                if (comp(r, cc).get_num() % factors[r] != 0) return false;
            }
    }
    return true;
}

/// Static in the Beilinson t-structure: each gr^s concentrated in degree -s.
inline bool is_beilinson_static(const FilteredStub& f) {
    GradedComplex gr = associated_graded(f);
    for (int s = 0; s < f.N; ++s)
        for (auto& [deg, h] : homology(gr.piece(s)))
            if (deg != -s && !h.is_zero()) return false;
    return true;
}

}  // namespace derham
