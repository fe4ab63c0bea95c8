#pragma once

#include <map>
#include <vector>

#include "derham/fg_module.hpp"

namespace derham {

using HomologyTable = std::map<int, FgModule>;

inline bool homology_is_zero(const HomologyTable& t) {
    for (auto& [deg, h] : t)
        if (!h.is_zero()) return false;
    return true;
}

/// Bounded chain complex of finitely generated free modules, homologically
/// graded: d_i maps degree i to degree i-1 and d o d = 0 is enforced on
/// construction.
class ChainComplex {
  public:
    explicit ChainComplex(RingSpec ring = RingSpec::Z()) : ring_(ring) {}

    /// ranks: degree -> rank (zeros allowed, dropped); diffs: i -> d_i.
    ChainComplex(RingSpec ring, const std::map<int, int>& ranks, const std::map<int, Matrix>& diffs) : ring_(ring) {
        for (auto& [deg, r] : ranks) {
            if (r < 0) throw std::invalid_argument("negative rank");
            if (r > 0) ranks_[deg] = r;
        }
        for (auto& [i, m] : diffs) {
            if (m.ring() != ring_) throw std::invalid_argument("chain complex: differential ring mismatch");
            if (m.rows() != rank(i - 1) || m.cols() != rank(i))
                throw std::invalid_argument("chain complex: differential shape mismatch at degree " + std::to_string(i));
            if (!m.is_zero()) d_[i] = m;
        }
        for (auto& [i, m] : d_) {
            auto above = d_.find(i + 1);
            if (above != d_.end() && !(m * above->second).is_zero())
                throw std::invalid_argument("chain complex: d*d != 0 at degree " + std::to_string(i + 1));
        }
    }

    static ChainComplex concentrated(RingSpec ring, int degree, int rank) {
        std::map<int, int> r;
        r[degree] = rank;
        return ChainComplex(ring, r, {});
    }
    static ChainComplex unit(RingSpec ring) { return concentrated(ring, 0, 1); }

    const RingSpec& ring() const { return ring_; }
    const std::map<int, int>& ranks() const { return ranks_; }
    int rank(int degree) const {
        auto it = ranks_.find(degree);
        return it == ranks_.end() ? 0 : it->second;
    }
    bool is_zero() const { return ranks_.empty(); }
    int lo() const { return ranks_.empty() ? 0 : ranks_.begin()->first; }
    int hi() const { return ranks_.empty() ? 0 : ranks_.rbegin()->first; }

    Matrix d(int i) const {
        auto it = d_.find(i);
        if (it != d_.end()) return it->second;
        return Matrix::zero(ring_, rank(i - 1), rank(i));
    }
    const std::map<int, Matrix>& stored_differentials() const { return d_; }

    bool operator==(const ChainComplex& o) const {
        if (ring_ != o.ring_ || ranks_ != o.ranks_) return false;
        int a = std::min(lo(), o.lo()), b = std::max(hi(), o.hi());
        for (int i = a; i <= b + 1; ++i)
            if (d(i) != o.d(i)) return false;
        return true;
    }
    bool operator!=(const ChainComplex& o) const { return !(*this == o); }

    Int euler_characteristic() const {
        Int chi = 0;
        for (auto& [deg, r] : ranks_) chi += (deg % 2 == 0 ? r : -r);
        return chi;
    }

  private:
    RingSpec ring_;
    std::map<int, int> ranks_;
    std::map<int, Matrix> d_;
};

/// Degreewise map of complexes commuting with the differentials.
struct ChainMap {
    ChainComplex source, target;
    std::map<int, Matrix> components;

    ChainMap() = default;
    ChainMap(ChainComplex src, ChainComplex tgt, std::map<int, Matrix> comps)
        : source(std::move(src)), target(std::move(tgt)) {
        for (auto& [deg, m] : comps) {
            if (m.rows() != target.rank(deg) || m.cols() != source.rank(deg))
                throw std::invalid_argument("chain map: component shape mismatch at degree " + std::to_string(deg));
            if (!m.is_zero()) components[deg] = std::move(m);
        }
        int a = std::min(source.lo(), target.lo()), b = std::max(source.hi(), target.hi());
        for (int i = a; i <= b; ++i)
            if (target.d(i) * at(i) != at(i - 1) * source.d(i))
                throw std::invalid_argument("chain map does not commute with differentials at degree " + std::to_string(i));
    }

    Matrix at(int degree) const {
        auto it = components.find(degree);
        if (it != components.end()) return it->second;
        return Matrix::zero(source.ring(), target.rank(degree), source.rank(degree));
    }

    static ChainMap identity(const ChainComplex& c) {
        std::map<int, Matrix> comps;
        for (auto& [deg, r] : c.ranks()) comps[deg] = Matrix::identity(c.ring(), r);
        return ChainMap(c, c, comps);
    }
    static ChainMap zero(const ChainComplex& src, const ChainComplex& tgt) { return ChainMap(src, tgt, {}); }
};

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {  // g after f
    std::map<int, Matrix> comps;
    for (auto& [deg, r] : f.source.ranks())
        if (g.target.rank(deg) > 0) comps[deg] = g.at(deg) * f.at(deg);
    return ChainMap(f.source, g.target, comps);
}

/// Gaussian elimination of unit pivots, degree by degree: strips acyclic
/// two-term summands without changing the homotopy type. This is what keeps
/// homology of the larger derived-functor complexes desk-sized.
inline ChainComplex reduce_complex(const ChainComplex& c) {
    std::map<int, std::vector<char>> alive;
    std::map<int, Matrix> d;
    for (auto& [deg, r] : c.ranks()) alive[deg] = std::vector<char>(r, 1);
    int a = c.lo(), b = c.hi();
    for (int i = a; i <= b + 1; ++i) d[i] = c.d(i);

    bool progress = true;
    while (progress) {
        progress = false;
        for (int n = a; n <= b; ++n) {
            Matrix& dn = d[n];
            if (dn.rows() == 0 || dn.cols() == 0) continue;
            auto& rows_alive = alive[n - 1];
            auto& cols_alive = alive[n];
            for (;;) {
                int pr = -1, pc = -1;
                for (int i = 0; i < dn.rows() && pr < 0; ++i) {
                    if (!rows_alive.empty() && !rows_alive[i]) continue;
                    for (int j = 0; j < dn.cols(); ++j) {
                        if (!cols_alive.empty() && !cols_alive[j]) continue;
                        const Rat& x = dn(i, j);
                        if (x != 0 && c.ring().is_unit(x)) {
                            pr = i;
                            pc = j;
                            break;
                        }
                    }
                }
                if (pr < 0) break;
                progress = true;
                Rat u_inv = c.ring().inv(dn(pr, pc));
                // Schur complement on d_n
                for (int i = 0; i < dn.rows(); ++i) {
                    if (i == pr || !rows_alive[i] || dn(i, pc) == 0) continue;
                    Rat f = c.ring().reduce(dn(i, pc) * u_inv);
                    for (int j = 0; j < dn.cols(); ++j) {
                        if (j == pc || !cols_alive[j] || dn(pr, j) == 0) continue;
                        dn.set(i, j, dn(i, j) - f * dn(pr, j));
                    }
                }
                rows_alive[pr] = 0;
                cols_alive[pc] = 0;
            }
        }
    }

    // compact to a fresh complex
    std::map<int, std::vector<int>> keep;
    std::map<int, int> ranks;
    for (auto& [deg, mask] : alive) {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(mask.size()); ++i)
            if (mask[i]) idx.push_back(i);
        keep[deg] = idx;
        if (!idx.empty()) ranks[deg] = static_cast<int>(idx.size());
    }
    std::map<int, Matrix> nd;
    for (int i = a; i <= b + 1; ++i) {
        auto rit = keep.find(i), cit = keep.find(i - 1);
        std::vector<int> ci = rit == keep.end() ? std::vector<int>{} : rit->second;
        std::vector<int> ri = cit == keep.end() ? std::vector<int>{} : cit->second;
        if (ci.empty() || ri.empty()) continue;
        Matrix m(c.ring(), static_cast<int>(ri.size()), static_cast<int>(ci.size()));
        const Matrix& src = d[i];
        for (size_t r = 0; r < ri.size(); ++r)
            for (size_t cc = 0; cc < ci.size(); ++cc) m.set(static_cast<int>(r), static_cast<int>(cc), src(ri[r], ci[cc]));
        nd[i] = m;
    }
    return ChainComplex(c.ring(), ranks, nd);
}

/// H_i = ker(d_i)/im(d_{i+1}), exact, computed in a saturated kernel basis.
inline HomologyTable homology(const ChainComplex& input) {
    ChainComplex c = reduce_complex(input);
    HomologyTable out;
    for (auto& [deg, r] : c.ranks()) {
        Matrix k = kernel_basis(c.d(deg));
        if (k.cols() == 0) continue;
        Matrix img = c.d(deg + 1);
        auto x = solve(k, img);
        if (!x) throw std::logic_error("homology: image does not lie in the kernel");
        FgModule h = cokernel(*x);
        if (!h.is_zero()) out[deg] = h;
    }
    return out;
}

inline ChainComplex shift(const ChainComplex& c, int n) {
    std::map<int, int> ranks;
    for (auto& [deg, r] : c.ranks()) ranks[deg + n] = r;
    std::map<int, Matrix> d;
    for (auto& [i, m] : c.stored_differentials()) d[i + n] = (n % 2 == 0) ? m : -m;
    return ChainComplex(c.ring(), ranks, d);
}

inline ChainComplex direct_sum(const ChainComplex& x, const ChainComplex& y) {
    if (x.ring() != y.ring()) throw std::invalid_argument("direct_sum: ring mismatch");
    std::map<int, int> ranks;
    for (auto& [deg, r] : x.ranks()) ranks[deg] += r;
    for (auto& [deg, r] : y.ranks()) ranks[deg] += r;
    std::map<int, Matrix> d;
    int a = std::min(x.lo(), y.lo()), b = std::max(x.hi(), y.hi());
    for (int i = a; i <= b + 1; ++i) {
        Matrix m = Matrix::block_diag(x.d(i), y.d(i));
        if (!m.is_zero()) d[i] = m;
    }
    return ChainComplex(x.ring(), ranks, d);
}

/// Total complex of the double complex, with the Koszul sign on the second
/// factor: d(a ox b) = da ox b + (-1)^{|a|} a ox db. Basis of degree n is
/// grouped by blocks (i, n-i) with i ascending, row-major within a block.
inline ChainComplex tensor(const ChainComplex& x, const ChainComplex& y) {
    if (x.ring() != y.ring()) throw std::invalid_argument("tensor: ring mismatch");
    if (x.is_zero() || y.is_zero()) return ChainComplex(x.ring());
    std::map<int, int> ranks;
    std::map<int, std::vector<std::pair<int, int>>> blocks;  // degree -> [(i,j)]
    std::map<int, std::map<std::pair<int, int>, int>> offset;
    for (auto& [i, ri] : x.ranks())
        for (auto& [j, rj] : y.ranks()) {
            int n = i + j;
            offset[n][{i, j}] = ranks[n];
            blocks[n].push_back({i, j});
            ranks[n] += ri * rj;
        }
    std::map<int, Matrix> d;
    for (auto& [n, blist] : blocks) {
        if (ranks.find(n - 1) == ranks.end()) continue;
        Matrix m(x.ring(), ranks[n - 1], ranks[n]);
        bool nonzero = false;
        for (auto& [i, j] : blist) {
            int co = offset[n][{i, j}];
            int ri = x.rank(i), rj = y.rank(j);
            // d_x ox id : block (i,j) -> (i-1, j)
            if (x.rank(i - 1) > 0 && offset[n - 1].count({i - 1, j})) {
                int ro = offset[n - 1][{i - 1, j}];
                Matrix dx = x.d(i);
                for (int p = 0; p < x.rank(i - 1); ++p)
                    for (int q = 0; q < ri; ++q) {
                        if (dx(p, q) == 0) continue;
                        nonzero = true;
                        for (int s = 0; s < rj; ++s) m.set(ro + p * rj + s, co + q * rj + s, dx(p, q));
                    }
            }
            // (-1)^i id ox d_y : block (i,j) -> (i, j-1)
            if (y.rank(j - 1) > 0 && offset[n - 1].count({i, j - 1})) {
                int ro = offset[n - 1][{i, j - 1}];
                Matrix dy = y.d(j);
                Rat sign((i % 2 == 0) ? 1 : -1);
                for (int p = 0; p < ri; ++p)
                    for (int s = 0; s < y.rank(j - 1); ++s)
                        for (int q = 0; q < rj; ++q) {
                            if (dy(s, q) == 0) continue;
                            nonzero = true;
                            m.set(ro + p * y.rank(j - 1) + s, co + p * rj + q,
                                  x.ring().reduce(sign * dy(s, q)));
                        }
            }
        }
        if (nonzero) d[n] = m;
    }
    return ChainComplex(x.ring(), ranks, d);
}

/// Tensor product of chain maps, in the block bases used by tensor().
inline ChainMap tensor_map(const ChainMap& f, const ChainMap& g) {
    ChainComplex src = tensor(f.source, g.source), tgt = tensor(f.target, g.target);
    std::map<int, Matrix> comps;
    // offsets mirror the construction in tensor()
    auto offsets = [](const ChainComplex& x, const ChainComplex& y) {
        std::map<int, std::map<std::pair<int, int>, int>> off;
        std::map<int, int> total;
        for (auto& [i, ri] : x.ranks())
            for (auto& [j, rj] : y.ranks()) {
                off[i + j][{i, j}] = total[i + j];
                total[i + j] += ri * rj;
            }
        return off;
    };
    auto soff = offsets(f.source, g.source), toff = offsets(f.target, g.target);
    for (auto& [n, blocks] : soff) {
        if (src.rank(n) == 0 || tgt.rank(n) == 0) continue;
        Matrix m(src.ring(), tgt.rank(n), src.rank(n));
        for (auto& [ij, co] : blocks) {
            auto [i, j] = ij;
            if (!toff.count(n) || !toff[n].count({i, j})) continue;
            int ro = toff[n][{i, j}];
            Matrix fi = f.at(i), gj = g.at(j);
            int rj_src = g.source.rank(j), rj_tgt = g.target.rank(j);
            for (int p = 0; p < fi.rows(); ++p)
                for (int q = 0; q < fi.cols(); ++q) {
                    if (fi(p, q) == 0) continue;
                    for (int u = 0; u < gj.rows(); ++u)
                        for (int v = 0; v < gj.cols(); ++v) {
                            if (gj(u, v) == 0) continue;
                            m.set(ro + p * rj_tgt + u, co + q * rj_src + v, src.ring().reduce(fi(p, q) * gj(u, v)));
                        }
                }
        }
        if (!m.is_zero()) comps[n] = m;
    }
    return ChainMap(src, tgt, comps);
}

/// Mapping cone: cone(f)_n = source_{n-1} (+) target_n with
/// d(x, y) = (-d x, d y - f x).
inline ChainComplex cone(const ChainMap& f) {
    const ChainComplex &s = f.source, &t = f.target;
    std::map<int, int> ranks;
    for (auto& [deg, r] : s.ranks()) ranks[deg + 1] += r;
    for (auto& [deg, r] : t.ranks()) ranks[deg] += r;
    std::map<int, Matrix> d;
    int a = std::min(s.lo() + 1, t.lo()), b = std::max(s.hi() + 1, t.hi());
    for (int n = a; n <= b + 1; ++n) {
        int rs = s.rank(n - 1), rt = t.rank(n);
        int rs1 = s.rank(n - 2), rt1 = t.rank(n - 1);
        if ((rs + rt == 0) || (rs1 + rt1 == 0)) continue;
        Matrix m(s.ring(), rs1 + rt1, rs + rt);
        Matrix ds = s.d(n - 1), dt = t.d(n), fn = f.at(n - 1);
        for (int i = 0; i < rs1; ++i)
            for (int j = 0; j < rs; ++j) m.set(i, j, s.ring().neg(ds(i, j)));
        for (int i = 0; i < rt1; ++i)
            for (int j = 0; j < rs; ++j) m.set(rs1 + i, j, s.ring().neg(fn(i, j)));
        for (int i = 0; i < rt1; ++i)
            for (int j = 0; j < rt; ++j) m.set(rs1 + i, rs + j, dt(i, j));
        if (!m.is_zero()) d[n] = m;
    }
    return ChainComplex(s.ring(), ranks, d);
}

/// Smart truncation tau_{>= n}: degree n is replaced by the saturated kernel
/// of d_n so that the result stays levelwise free with H_i preserved for
/// i >= n.
inline ChainComplex truncate_connective(const ChainComplex& c, int n) {
    std::map<int, int> ranks;
    std::map<int, Matrix> d;
    for (auto& [deg, r] : c.ranks())
        if (deg > n) ranks[deg] = r;
    for (auto& [i, m] : c.stored_differentials())
        if (i > n + 1) d[i] = m;
    if (c.rank(n) > 0) {
        Matrix k = kernel_basis(c.d(n));
        if (k.cols() > 0) {
            ranks[n] = k.cols();
            if (c.rank(n + 1) > 0) {
                auto x = solve(k, c.d(n + 1));
                if (!x) throw std::logic_error("truncate_connective: image escapes the kernel lattice");
                if (!x->is_zero()) d[n + 1] = *x;
            }
        } else if (c.rank(n + 1) > 0) {
            // kernel is zero: degree n vanishes and d_{n+1} becomes zero
            d.erase(n + 1);
        }
    }
    return ChainComplex(c.ring(), ranks, d);
}

inline bool is_quasi_iso(const ChainMap& f) { return homology(cone(f)).empty(); }

}  // namespace derham
