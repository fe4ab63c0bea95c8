#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace derham {

using Int = mpz_class;
using Rat = mpq_class;

enum class RingKind { Integers, Rationals, PrimeField };

inline bool is_prime(const Int& p) {
    if (p < 2) return false;
    // mpz_probab_prime_p is deterministic for desk-scale inputs (< 2^64 it
    // runs BPSW which has no known pseudoprimes there).
    return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

/// The exact base ring: Z, Q, or F_p with p a verified prime.
struct RingSpec {
    RingKind kind = RingKind::Integers;
    Int p = 0;  // only meaningful for PrimeField

    static RingSpec Z() { return RingSpec{RingKind::Integers, 0}; }
    static RingSpec Q() { return RingSpec{RingKind::Rationals, 0}; }
    static RingSpec Fp(const Int& p) {
        if (!is_prime(p)) throw std::invalid_argument("RingSpec: p must be a prime >= 2");
        return RingSpec{RingKind::PrimeField, p};
    }

    bool is_field() const { return kind != RingKind::Integers; }
    bool operator==(const RingSpec& o) const { return kind == o.kind && (kind != RingKind::PrimeField || p == o.p); }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    std::string name() const {
        switch (kind) {
            case RingKind::Integers: return "Z";
            case RingKind::Rationals: return "Q";
            case RingKind::PrimeField: return "Fp:" + p.get_str();
        }
        return "?";
    }

    static RingSpec parse(const std::string& s) {
        if (s == "Z") return Z();
        if (s == "Q") return Q();
        if (s.rfind("Fp:", 0) == 0) return Fp(Int(s.substr(3)));
        throw std::invalid_argument("unknown ring \"" + s + "\" (expected Z, Q, or Fp:<p>)");
    }

    /// Canonical representative: integers stay, rationals reduce (mpq does
    /// that on its own), residues land in [0, p).
    Rat reduce(const Rat& x) const {
        switch (kind) {
            case RingKind::Rationals: return x;
            case RingKind::Integers:
                if (x.get_den() != 1) throw std::invalid_argument("non-integral scalar over Z");
                return x;
            case RingKind::PrimeField: {
                Int num = x.get_num() % p, den = x.get_den() % p;
                if (num < 0) num += p;
                if (den < 0) den += p;
                if (den == 0) throw std::invalid_argument("denominator divisible by p over F_p");
                if (den != 1) {
                    Int inv;
                    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
                        throw std::invalid_argument("non-invertible denominator over F_p");
                    num = (num * inv) % p;
                }
                return Rat(num);
            }
        }
        return x;
    }

    Rat add(const Rat& a, const Rat& b) const { return reduce(a + b); }
    Rat sub(const Rat& a, const Rat& b) const { return reduce(a - b); }
    Rat mul(const Rat& a, const Rat& b) const { return reduce(a * b); }
    Rat neg(const Rat& a) const { return reduce(-a); }

    bool is_unit(const Rat& a) const {
        if (a == 0) return false;
        if (kind == RingKind::Integers) return a == 1 || a == -1;
        return true;
    }

    Rat inv(const Rat& a) const {
        if (!is_unit(a)) throw std::invalid_argument("inverting a non-unit");
        if (kind == RingKind::PrimeField) {
            Int inv;
            mpz_invert(inv.get_mpz_t(), Int(a.get_num() % p).get_mpz_t(), p.get_mpz_t());
            return reduce(Rat(inv));
        }
        return Rat(1) / a;
    }
};

/// Scalar parsing/printing used by the JSON layer: integers as decimal
/// strings, rationals as "a/b" in lowest terms.
inline std::string scalar_to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Rat scalar_from_string(const RingSpec& ring, const std::string& s) {
    Rat x;
    if (x.set_str(s, 10) != 0) throw std::invalid_argument("bad scalar \"" + s + "\"");
    x.canonicalize();
    return ring.reduce(x);
}

}  // namespace derham
