#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "derham/graded.hpp"
#include "derham/power.hpp"
#include "derham/simplicial.hpp"

namespace derham {

namespace dp_detail {

// One tensor factor of a summand of P^r(Gamma(c)_n): a surjection (its jump
// mask and arity k) carrying a positive power weight.
struct Factor {
    Mask mask;
    int k;
    int weight;
    // masks are distinct within a support, but weight distributions
    // distinguish supports sharing the same surjections
    bool operator<(const Factor& o) const {
        return mask != o.mask ? mask < o.mask : weight < o.weight;
    }
    bool operator==(const Factor& o) const { return mask == o.mask && k == o.k && weight == o.weight; }
};

using Support = std::vector<Factor>;  // sorted by mask, masks distinct

struct LevelData {
    std::vector<Support> supports;
    std::vector<int> offset;             // basis offset of each support
    std::map<Support, int> support_pos;  // -> index into supports
    // per support, the monomial bases of its factors
    std::vector<std::vector<std::vector<Monomial>>> factor_bases;
    std::vector<std::vector<int>> factor_sizes;
    int total_rank = 0;
};

// Enumerate supports at level n: distinct surjections with positive weights
// summing to r whose jump masks jointly cover every wall.
inline void enumerate_supports(const ChainComplex& c, PowerKind kind, int n, int r, LevelData& out) {
    Mask full = (n == 0) ? 0 : ((Mask(1) << n) - 1);
    std::vector<std::pair<Mask, int>> candidates;  // (mask, k), mask ascending
    for (Mask m = 0; m <= full; ++m) {
        int k = popcount(m);
        if (c.rank(k) > 0) candidates.push_back({m, k});
        if (n == 0) break;
    }
    Support cur;
    auto rec = [&](auto&& self, size_t from, int budget, Mask covered) -> void {
        if (budget == 0) {
            if (covered == full) out.supports.push_back(cur);
            return;
        }
        for (size_t i = from; i < candidates.size(); ++i) {
            // feasibility: the rest of the candidates must be able to cover
            Mask rest = 0;
            for (size_t j = i; j < candidates.size(); ++j) rest |= candidates[j].first;
            if ((covered | rest) != full) break;
            auto [m, k] = candidates[i];
            for (int w = 1; w <= budget; ++w) {
                if (power_rank(kind, c.rank(k), w) == 0) continue;
                cur.push_back({m, k, w});
                self(self, i + 1, budget - w, covered | m);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0, r, 0);

    std::sort(out.supports.begin(), out.supports.end(),
              [](const Support& a, const Support& b) { return a < b; });
    out.factor_bases.resize(out.supports.size());
    out.factor_sizes.resize(out.supports.size());
    out.offset.resize(out.supports.size());
    for (size_t s = 0; s < out.supports.size(); ++s) {
        out.support_pos[out.supports[s]] = static_cast<int>(s);
        out.offset[s] = out.total_rank;
        int size = 1;
        for (const Factor& f : out.supports[s]) {
            out.factor_bases[s].push_back(power_basis(kind, c.rank(f.k), f.weight));
            int sz = static_cast<int>(out.factor_bases[s].back().size());
            out.factor_sizes[s].push_back(sz);
            size *= sz;
        }
        out.total_rank += size;
    }
}

inline int tuple_to_index(const std::vector<int>& tuple, const std::vector<int>& sizes) {
    int idx = 0;
    for (size_t i = 0; i < tuple.size(); ++i) idx = idx * sizes[i] + tuple[i];
    return idx;
}

}  // namespace dp_detail

/// Dold-Puppe derived power functor on a connective, levelwise free
/// complex, exact through degree_cutoff.
///
/// The chain model is the normalized complex of the levelwise power of the
/// Dold-Kan resolution, computed directly in its degeneracy-pruned form:
/// level n splits over jointly nondegenerate weighted families of
/// surjections, and only those summands are materialized. For AntiSym the
/// levelwise values are presented (not free) modules; the repeated-multiset
/// span is a subcomplex S and the result is modelled by the levelwise free
/// complex cone(2: S -> F).
inline ChainComplex derived_power(PowerKind kind, int r, const ChainComplex& c, int degree_cutoff) {
    using namespace dp_detail;
    if (degree_cutoff < 0) throw precondition_error("derived_power: negative degree cutoff");
    if (!c.is_zero() && c.lo() < 0) throw precondition_error("derived_power: complex must be connective");
    if (r == 0) return ChainComplex::unit(c.ring());
    if (c.is_zero()) return ChainComplex(c.ring());
    const RingSpec ring = c.ring();
    // levels above r*hi(c) have no jointly nondegenerate summands
    const int max_level = std::min(degree_cutoff + 1, r * std::max(c.hi(), 0));

    std::vector<LevelData> levels(max_level + 1);
    for (int n = 0; n <= max_level; ++n) enumerate_supports(c, kind, n, r, levels[n]);

    // cached power matrices of the differentials of c
    std::map<std::pair<int, int>, Matrix> diff_power;  // (k, w) -> P^w(d_k)
    auto diff_matrix = [&](int k, int w) -> const Matrix& {
        auto key = std::make_pair(k, w);
        auto it = diff_power.find(key);
        if (it == diff_power.end()) it = diff_power.emplace(key, power_on_free(kind, w, c.d(k))).first;
        return it->second;
    };

    std::map<int, int> ranks;
    for (int n = 0; n <= max_level; ++n)
        if (levels[n].total_rank > 0) ranks[n] = levels[n].total_rank;

    std::map<int, Matrix> d;
    for (int n = 1; n <= max_level; ++n) {
        if (levels[n].total_rank == 0 || levels[n - 1].total_rank == 0) continue;
        Matrix m(ring, levels[n - 1].total_rank, levels[n].total_rank);
        bool nonzero = false;
        for (size_t s = 0; s < levels[n].supports.size(); ++s) {
            const Support& sup = levels[n].supports[s];
            const int nf = static_cast<int>(sup.size());
            for (int i = 0; i <= n; ++i) {
                // elementary action on each factor
                std::vector<FaceAction> acts(nf);
                bool dead = false;
                for (int j = 0; j < nf && !dead; ++j) {
                    acts[j] = face_on_surjection(sup[j].mask, n, i);
                    if (acts[j].kind == FaceActionKind::Zero) dead = true;
                    if (acts[j].kind == FaceActionKind::Differential && c.rank(sup[j].k - 1) == 0) dead = true;
                }
                if (dead) continue;

                // target support: group source factors by target surjection
                struct Group {
                    Mask mask;
                    int k;
                    int weight = 0;
                    std::vector<int> members;  // source factor indices, ascending
                };
                std::map<Mask, Group> groups;
                Mask covered = 0;
                for (int j = 0; j < nf; ++j) {
                    int tk = sup[j].k - (acts[j].kind == FaceActionKind::Differential ? 1 : 0);
                    Group& g = groups[acts[j].target];
                    g.mask = acts[j].target;
                    g.k = tk;
                    g.weight += sup[j].weight;
                    g.members.push_back(j);
                    covered |= acts[j].target;
                }
                Mask full = (n - 1 == 0) ? 0 : ((Mask(1) << (n - 1)) - 1);
                if (covered != full) continue;  // degenerate summand, projected away
                bool group_ok = true;
                Support tsup;
                for (auto& [mask, g] : groups) {
                    if (c.rank(g.k) == 0 || power_rank(kind, c.rank(g.k), g.weight) == 0) {
                        group_ok = false;
                        break;
                    }
                    tsup.push_back({g.mask, g.k, g.weight});
                }
                if (!group_ok) continue;
                auto tpos_it = levels[n - 1].support_pos.find(tsup);
                if (tpos_it == levels[n - 1].support_pos.end())
                    throw std::logic_error("derived_power: target summand missing from enumeration");
                const int ts = tpos_it->second;
                const auto& tsizes = levels[n - 1].factor_sizes[ts];
                const auto& tbases = levels[n - 1].factor_bases[ts];

                // block permutation sign: factors of odd total weight moving
                // past each other when source order is resorted by target
                int block_sign = 1;
                if (kind == PowerKind::Exterior || kind == PowerKind::AntiSym) {
                    std::vector<std::pair<Mask, int>> order;  // (target mask, weight) in source order
                    for (int j = 0; j < nf; ++j) order.push_back({acts[j].target, sup[j].weight});
                    for (size_t x = 0; x < order.size(); ++x)
                        for (size_t y = x + 1; y < order.size(); ++y)
                            if (order[x].first > order[y].first && (order[x].second % 2) && (order[y].second % 2))
                                block_sign = -block_sign;
                }

                Rat face_sign = Rat((i % 2 == 0) ? block_sign : -block_sign);

                // list of groups in target-support order
                std::vector<const Group*> glist;
                for (const Factor& tf : tsup) glist.push_back(&groups.at(tf.mask));

                const auto& sbases = levels[n].factor_bases[s];
                const auto& ssizes = levels[n].factor_sizes[s];
                // per-factor images of every source monomial, computed once
                std::vector<std::vector<std::vector<std::pair<Monomial, Rat>>>> factor_images(nf);
                for (int j = 0; j < nf; ++j) {
                    factor_images[j].resize(ssizes[j]);
                    if (acts[j].kind == FaceActionKind::Identity) {
                        for (int col = 0; col < ssizes[j]; ++col)
                            factor_images[j][col] = {{sbases[j][col], Rat(1)}};
                    } else {
                        const Matrix& pm = diff_matrix(sup[j].k, sup[j].weight);
                        auto tb = power_basis(kind, c.rank(sup[j].k - 1), sup[j].weight);
                        for (int col = 0; col < ssizes[j]; ++col)
                            for (int row = 0; row < pm.rows(); ++row)
                                if (pm(row, col) != 0) factor_images[j][col].push_back({tb[row], pm(row, col)});
                    }
                }

                std::vector<int> tuple(nf, 0);
                int scount = 1;
                for (int sz : ssizes) scount *= sz;
                for (int t = 0; t < scount; ++t) {
                    // decode source tuple
                    int tt = t;
                    for (int j = nf - 1; j >= 0; --j) {
                        tuple[j] = tt % ssizes[j];
                        tt /= ssizes[j];
                    }
                    std::vector<const std::vector<std::pair<Monomial, Rat>>*> images(nf);
                    bool zero = false;
                    for (int j = 0; j < nf && !zero; ++j) {
                        images[j] = &factor_images[j][tuple[j]];
                        if (images[j]->empty()) zero = true;
                    }
                    if (zero) continue;

                    // fold each group's member images with the power multiplication
                    // and accumulate the resulting target basis entries
                    std::vector<std::pair<std::vector<int>, Rat>> partial = {{{}, face_sign}};
                    for (size_t gi = 0; gi < glist.size(); ++gi) {
                        const Group& g = *glist[gi];
                        // combine member images into weight-g.weight monomials
                        std::vector<std::pair<Monomial, Rat>> combined = {{Monomial{}, Rat(1)}};
                        for (int j : g.members) {
                            std::vector<std::pair<Monomial, Rat>> next;
                            for (auto& [monA, ca] : combined)
                                for (auto& [monB, cb] : *images[j]) {
                                    auto [prod, cm] = power_multiply(kind, monA, monB);
                                    Rat coeff = ring.reduce(ca * cb * cm);
                                    if (coeff != 0) next.push_back({prod, coeff});
                                }
                            combined = std::move(next);
                            if (combined.empty()) break;
                        }
                        if (combined.empty()) {
                            partial.clear();
                            break;
                        }
                        // map monomials to indices in the target factor basis
                        std::vector<std::pair<std::vector<int>, Rat>> next_partial;
                        for (auto& [tup, pc] : partial)
                            for (auto& [mon, mc] : combined) {
                                auto& tb = tbases[gi];
                                auto it = std::lower_bound(tb.begin(), tb.end(), mon);
                                if (it == tb.end() || *it != mon) throw std::logic_error("derived_power: monomial not in basis");
                                std::vector<int> t2 = tup;
                                t2.push_back(static_cast<int>(it - tb.begin()));
                                next_partial.push_back({t2, ring.reduce(pc * mc)});
                            }
                        partial = std::move(next_partial);
                    }
                    for (auto& [tup, coeff] : partial) {
                        if (coeff == 0) continue;
                        int row = levels[n - 1].offset[ts] + tuple_to_index(tup, tsizes);
                        int col = levels[n].offset[s] + t;
                        m.set(row, col, m(row, col) + coeff);
                        nonzero = true;
                    }
                }
            }
        }
        if (nonzero) d[n] = m;
    }

    ChainComplex model(ring, ranks, d);

    if (kind == PowerKind::AntiSym) {
        // The repeated-multiset span is a subcomplex S; the honest levelwise
        // value is F/2S, modelled freely by cone(2: S -> F).
        std::map<int, std::vector<int>> rep;  // degree -> repeated basis indices
        for (int n = 0; n <= max_level; ++n) {
            std::vector<int> idx;
            for (size_t s = 0; s < levels[n].supports.size(); ++s) {
                const auto& sbases = levels[n].factor_bases[s];
                const auto& ssizes = levels[n].factor_sizes[s];
                int scount = 1;
                for (int sz : ssizes) scount *= sz;
                std::vector<int> tuple(sbases.size(), 0);
                for (int t = 0; t < scount; ++t) {
                    int tt = t;
                    bool repeated = false;
                    for (int j = static_cast<int>(sbases.size()) - 1; j >= 0; --j) {
                        tuple[j] = tt % ssizes[j];
                        tt /= ssizes[j];
                        if (has_repeat(sbases[j][tuple[j]])) repeated = true;
                    }
                    if (repeated) idx.push_back(levels[n].offset[s] + t);
                }
            }
            if (!idx.empty()) rep[n] = idx;
        }
        std::map<int, int> sranks;
        for (auto& [deg, idx] : rep) sranks[deg] = static_cast<int>(idx.size());
        std::map<int, Matrix> sd;
        std::map<int, Matrix> incl;
        for (auto& [deg, idx] : rep) {
            Matrix inc(ring, model.rank(deg), static_cast<int>(idx.size()));
            for (size_t j = 0; j < idx.size(); ++j) inc.set(idx[j], static_cast<int>(j), Rat(2));
            incl[deg] = inc;
            auto below = rep.find(deg - 1);
            if (below == rep.end()) {
                if (!(model.d(deg) * inc.scaled(Rat(1) / 2)).is_zero())
                    throw std::logic_error("derived_power: repeated span is not a subcomplex");
                continue;
            }
            // restriction of the differential to the repeated span
            Matrix full = model.d(deg);
            Matrix sub(ring, static_cast<int>(below->second.size()), static_cast<int>(idx.size()));
            std::vector<int> where(model.rank(deg - 1), -1);
            for (size_t rj = 0; rj < below->second.size(); ++rj) where[below->second[rj]] = static_cast<int>(rj);
            for (size_t cj = 0; cj < idx.size(); ++cj)
                for (int rr = 0; rr < full.rows(); ++rr) {
                    const Rat& v = full(rr, idx[cj]);
                    if (v == 0) continue;
                    if (where[rr] < 0) throw std::logic_error("derived_power: repeated span is not a subcomplex");
                    sub.set(where[rr], static_cast<int>(cj), v);
                }
            if (!sub.is_zero()) sd[deg] = sub;
        }
        ChainComplex s_complex(ring, sranks, sd);
        std::map<int, Matrix> comps;
        for (auto& [deg, inc] : incl) comps[deg] = inc;
        model = cone(ChainMap(s_complex, model, comps));
    }

    // fold the top level so homology is exact through the cutoff and no
    // spurious classes appear above it
    if (model.rank(degree_cutoff + 1) > 0) {
        std::map<int, int> franks;
        std::map<int, Matrix> fd;
        for (auto& [deg, rk] : model.ranks())
            if (deg <= degree_cutoff) franks[deg] = rk;
        for (auto& [i, mm] : model.stored_differentials())
            if (i <= degree_cutoff) fd[i] = mm;
        Matrix img = column_space_basis(model.d(degree_cutoff + 1));
        if (img.cols() > 0) {
            franks[degree_cutoff + 1] = img.cols();
            fd[degree_cutoff + 1] = img;
        }
        model = ChainComplex(ring, franks, fd);
    }
    return model;
}

/// Weight-truncated free derived commutative algebra table: weight w piece
/// is LSym^w, exact through degree_cutoff.
inline GradedComplex lsym_total(const ChainComplex& c, int weight_cutoff, int degree_cutoff) {
    GradedComplex out(c.ring());
    for (int w = 0; w <= weight_cutoff; ++w)
        out.set_piece(w, derived_power(PowerKind::Sym, w, c, degree_cutoff));
    return out;
}

}  // namespace derham
