#pragma once

#include <string>
#include <vector>

#include "derham/normal_form.hpp"

namespace derham {

/// Finitely generated module over the base ring: free part plus invariant
/// factors d1 | d2 | ... (each > 1, always empty over a field).
struct FgModule {
    RingSpec ring;
    int free_rank = 0;
    std::vector<Int> torsion;

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }

    bool operator==(const FgModule& o) const {
        return ring == o.ring && free_rank == o.free_rank && torsion == o.torsion;
    }
    bool operator!=(const FgModule& o) const { return !(*this == o); }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string base;
        switch (ring.kind) {
            case RingKind::Integers: base = "Z"; break;
            case RingKind::Rationals: base = "Q"; break;
            case RingKind::PrimeField: base = "F" + ring.p.get_str(); break;
        }
        std::string s;
        if (free_rank == 1) s = base;
        else if (free_rank > 1) s = base + "^" + std::to_string(free_rank);
        for (const Int& d : torsion) s += (s.empty() ? "" : " + ") + ("Z/" + d.get_str());
        return s;
    }
};

/// Presentation of target/image(m): over Z read off the Smith form, over a
/// field only the rank matters.
inline FgModule cokernel(const Matrix& m) {
    FgModule out{m.ring(), 0, {}};
    if (m.ring().kind == RingKind::Integers) {
        SmithForm f = smith_normal_form(m);
        out.free_rank = m.rows() - f.rank;
        for (int t = 0; t < f.rank; ++t) {
            Int d = f.d(t, t).get_num();
            if (d > 1) out.torsion.push_back(d);
        }
    } else {
        out.free_rank = m.rows() - rank(m);
    }
    return out;
}

/// Compare the underlying abelian groups: F_p-rank r matches Z-torsion
/// (Z/p)^r, Q ranks only match Q ranks. Used when a theory computed over a
/// quotient ring is checked against a stub computed over Z.
inline bool abelian_match(const FgModule& a, const FgModule& b) {
    if (a.ring == b.ring) return a == b;
    auto as_z = [](const FgModule& m, const FgModule& other) -> std::optional<FgModule> {
        if (m.ring.kind != RingKind::PrimeField) return std::nullopt;
        FgModule z{other.ring, 0, {}};
        for (int i = 0; i < m.free_rank; ++i) z.torsion.push_back(m.ring.p);
        if (!m.torsion.empty()) return std::nullopt;
        return z;
    };
    if (auto za = as_z(a, b)) return *za == b;
    if (auto zb = as_z(b, a)) return *zb == a;
    return false;
}

}  // namespace derham
