#pragma once

#include <map>

#include "derham/complex.hpp"

namespace derham {

/// Finite weight-indexed family of chain complexes with internal weight
/// grading; all pieces share one ring.
struct GradedComplex {
    RingSpec ring = RingSpec::Z();
    std::map<int, ChainComplex> pieces;  // weight -> complex, zero pieces dropped

    GradedComplex() = default;
    explicit GradedComplex(RingSpec r) : ring(r) {}

    static GradedComplex insert(int weight, const ChainComplex& c) {
        GradedComplex g(c.ring());
        if (!c.is_zero()) g.pieces[weight] = c;
        return g;
    }
    static GradedComplex unit(RingSpec ring) { return insert(0, ChainComplex::unit(ring)); }

    ChainComplex piece(int weight) const {
        auto it = pieces.find(weight);
        return it == pieces.end() ? ChainComplex(ring) : it->second;
    }
    void set_piece(int weight, const ChainComplex& c) {
        if (c.ring() != ring) throw std::invalid_argument("graded piece ring mismatch");
        if (c.is_zero()) pieces.erase(weight);
        else pieces[weight] = c;
    }

    bool operator==(const GradedComplex& o) const { return ring == o.ring && pieces == o.pieces; }

    std::map<int, HomologyTable> homology() const {
        std::map<int, HomologyTable> out;
        for (auto& [w, c] : pieces) {
            HomologyTable h = derham::homology(c);
            if (!h.empty()) out[w] = h;
        }
        return out;
    }
};

/// a-fold shearing: weight n piece is shifted by 2an. A symmetric monoidal
/// involution pair, inverse at -a.
inline GradedComplex shear(const GradedComplex& x, int a) {
    GradedComplex out(x.ring);
    for (auto& [w, c] : x.pieces) out.pieces[w] = shift(c, 2 * a * w);
    return out;
}

/// Day convolution: weight n piece is the sum over i+j = n of the tensor
/// products of the pieces.
inline GradedComplex day_tensor_graded(const GradedComplex& a, const GradedComplex& b) {
    if (a.ring != b.ring) throw std::invalid_argument("day_tensor_graded: ring mismatch");
    GradedComplex out(a.ring);
    for (auto& [i, ci] : a.pieces)
        for (auto& [j, cj] : b.pieces) {
            ChainComplex t = tensor(ci, cj);
            if (t.is_zero()) continue;
            auto it = out.pieces.find(i + j);
            if (it == out.pieces.end()) out.pieces[i + j] = t;
            else it->second = direct_sum(it->second, t);
        }
    return out;
}

inline GradedComplex graded_direct_sum(const GradedComplex& a, const GradedComplex& b) {
    if (a.ring != b.ring) throw std::invalid_argument("graded_direct_sum: ring mismatch");
    GradedComplex out = a;
    for (auto& [w, c] : b.pieces) {
        auto it = out.pieces.find(w);
        if (it == out.pieces.end()) out.pieces[w] = c;
        else it->second = direct_sum(it->second, c);
    }
    return out;
}

}  // namespace derham
