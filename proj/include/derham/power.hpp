#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "derham/matrix.hpp"
#include "derham/errors.hpp"

namespace derham {

/// The four power functors on free modules whose Dold-Puppe derived
/// functors this library computes.
enum class PowerKind { Sym, Exterior, Divided, AntiSym };

inline std::string power_kind_name(PowerKind k) {
    switch (k) {
        case PowerKind::Sym: return "sym";
        case PowerKind::Exterior: return "ext";
        case PowerKind::Divided: return "div";
        case PowerKind::AntiSym: return "antisym";
    }
    return "?";
}

inline PowerKind parse_power_kind(const std::string& s) {
    if (s == "sym") return PowerKind::Sym;
    if (s == "ext") return PowerKind::Exterior;
    if (s == "div") return PowerKind::Divided;
    if (s == "antisym") return PowerKind::AntiSym;
    throw std::invalid_argument("unknown power functor \"" + s + "\" (sym|ext|div|antisym)");
}

struct PowerFunctor {
    PowerKind kind;
    int weight;
    PowerFunctor(PowerKind k, int r) : kind(k), weight(r) {
        if (r < 0) throw std::invalid_argument("power functor weight must be >= 0");
    }
};

using Monomial = std::vector<int>;  // weakly increasing indices; strictly for Exterior

/// Monomial basis of the weight-w functor on a free module of rank m:
/// multisets for Sym/Divided/AntiSym, strictly increasing tuples for
/// Exterior, ordered lexicographically.
inline std::vector<Monomial> power_basis(PowerKind kind, int m, int w) {
    bool strict = (kind == PowerKind::Exterior);
    std::vector<Monomial> out;
    Monomial cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == w) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < m; ++i) {
            cur.push_back(i);
            self(self, strict ? i + 1 : i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

inline int power_rank(PowerKind kind, int m, int w) {
    if (w == 0) return 1;
    if (kind == PowerKind::Exterior) {
        if (w > m) return 0;
        long long r = 1;
        for (int i = 0; i < w; ++i) r = r * (m - i) / (i + 1);
        return static_cast<int>(r);
    }
    if (m == 0) return 0;
    long long r = 1;  // C(m + w - 1, w)
    for (int i = 0; i < w; ++i) r = r * (m + w - 1 - i) / (i + 1);
    return static_cast<int>(r);
}

inline bool has_repeat(const Monomial& mon) {
    for (size_t i = 1; i < mon.size(); ++i)
        if (mon[i] == mon[i - 1]) return true;
    return false;
}

namespace detail {

/// Insert a letter into a sorted word, stably (after equal letters),
/// reporting the sign (-1)^{# strictly greater letters}. For Exterior a
/// repeat returns 0.
inline int sorted_insert(Monomial& mon, int letter, bool strict) {
    auto it = std::upper_bound(mon.begin(), mon.end(), letter);
    if (strict && it != mon.begin() && *(it - 1) == letter) return 0;
    int greater = static_cast<int>(mon.end() - it);
    mon.insert(it, letter);
    return (greater % 2 == 0) ? 1 : -1;
}

inline std::map<Monomial, int> basis_index(const std::vector<Monomial>& basis) {
    std::map<Monomial, int> idx;
    for (size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = static_cast<int>(i);
    return idx;
}

// Symmetric expansion: image of the monomial under f, letter by letter.
// `sign_mode` turns on the sorted-insert sign (Exterior/AntiSym).
inline std::map<Monomial, Rat> expand_monomial(const Matrix& f, const Monomial& src, bool signs, bool strict) {
    std::map<Monomial, Rat> acc;
    acc[{}] = Rat(1);
    for (int letter : src) {
        std::map<Monomial, Rat> next;
        for (auto& [mon, coeff] : acc) {
            for (int r = 0; r < f.rows(); ++r) {
                const Rat& v = f(r, letter);
                if (v == 0) continue;
                Monomial m2 = mon;
                int s = 1;
                if (signs) {
                    s = sorted_insert(m2, r, strict);
                    if (s == 0) continue;
                } else {
                    m2.insert(std::upper_bound(m2.begin(), m2.end(), r), r);
                }
                Rat& slot = next[m2];
                slot = f.ring().reduce(slot + Rat(s) * coeff * v);
            }
        }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace detail

/// Matrix of the induced map on the weight-w power of a map of free
/// modules, in the monomial bases above. For AntiSym this is the map on the
/// free cover by multisets; the relations (2 times each repeated multiset)
/// are produced by antisym_relations below and the cover map descends.
inline Matrix power_on_free(PowerKind kind, int w, const Matrix& f) {
    if (kind == PowerKind::Divided) {
        // Gamma^w is dual to Sym^w: same basis labels, transposed matrices.
        return power_on_free(PowerKind::Sym, w, f.transpose()).transpose();
    }
    std::vector<Monomial> src = power_basis(kind, f.cols(), w);
    std::vector<Monomial> dst = power_basis(kind, f.rows(), w);
    auto idx = detail::basis_index(dst);
    Matrix out(f.ring(), static_cast<int>(dst.size()), static_cast<int>(src.size()));
    bool signs = (kind == PowerKind::Exterior || kind == PowerKind::AntiSym);
    for (size_t c = 0; c < src.size(); ++c) {
        auto img = detail::expand_monomial(f, src[c], signs, kind == PowerKind::Exterior);
        for (auto& [mon, coeff] : img)
            if (coeff != 0) out.set(idx.at(mon), static_cast<int>(c), coeff);
    }
    return out;
}

/// Relation columns for AntiSym^w of a free module of rank m: 2 e_M for
/// every multiset M with a repeated index. Empty for the other kinds.
inline std::vector<int> antisym_repeated_indices(int m, int w) {
    std::vector<Monomial> basis = power_basis(PowerKind::AntiSym, m, w);
    std::vector<int> out;
    for (size_t i = 0; i < basis.size(); ++i)
        if (has_repeat(basis[i])) out.push_back(static_cast<int>(i));
    return out;
}

/// Structure constants of the multiplication P^a (x) P^b -> P^{a+b} on
/// monomials. Returns the target monomial and its coefficient (possibly 0
/// for a collapsed exterior product).
inline std::pair<Monomial, Rat> power_multiply(PowerKind kind, const Monomial& a, const Monomial& b) {
    switch (kind) {
        case PowerKind::Sym: {
            Monomial m = a;
            m.insert(m.end(), b.begin(), b.end());
            std::sort(m.begin(), m.end());
            return {m, Rat(1)};
        }
        case PowerKind::Divided: {
            Monomial m = a;
            m.insert(m.end(), b.begin(), b.end());
            std::sort(m.begin(), m.end());
            // gamma_u * gamma_v = prod_i C(u_i + v_i, u_i) gamma_{u+v}
            Rat coeff(1);
            std::map<int, std::pair<int, int>> counts;
            for (int x : a) counts[x].first++;
            for (int x : b) counts[x].second++;
            for (auto& [letter, uv] : counts) {
                Int c;
                mpz_bin_uiui(c.get_mpz_t(), uv.first + uv.second, uv.first);
                coeff *= Rat(c);
            }
            return {m, coeff};
        }
        case PowerKind::Exterior:
        case PowerKind::AntiSym: {
            // stable merge of b after a; each b-letter moves left past the
            // strictly greater a-letters
            long inversions = 0;
            for (int x : b)
                inversions += std::count_if(a.begin(), a.end(), [&](int y) { return y > x; });
            if (kind == PowerKind::Exterior) {
                for (int x : b)
                    if (std::binary_search(a.begin(), a.end(), x)) return {{}, Rat(0)};
            }
            Monomial m = a;
            m.insert(m.end(), b.begin(), b.end());
            std::sort(m.begin(), m.end());
            return {m, Rat(inversions % 2 == 0 ? 1 : -1)};
        }
    }
    return {{}, Rat(0)};
}

}  // namespace derham
