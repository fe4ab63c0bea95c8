#include <catch2/catch_amalgamated.hpp>

#include "derham/complex.hpp"
#include "helpers.hpp"

using namespace derham;
using derham::testing::fg_free;
using derham::testing::fg_tor;
using derham::testing::random_two_term;

static const RingSpec Z = RingSpec::Z();

static ChainComplex two_term(RingSpec ring, long entry) {
    return ChainComplex(ring, {{0, 1}, {1, 1}}, {{1, Matrix(ring, 1, 1, {entry})}});
}

TEST_CASE("d*d = 0 is enforced") {
    std::map<int, int> ranks{{0, 1}, {1, 1}, {2, 1}};
    std::map<int, Matrix> d{{1, Matrix(Z, 1, 1, {1})}, {2, Matrix(Z, 1, 1, {1})}};
    CHECK_THROWS_AS(ChainComplex(Z, ranks, d), std::invalid_argument);
}

TEST_CASE("homology of Z --2--> Z") {
    HomologyTable h = homology(two_term(Z, 2));
    REQUIRE(h.size() == 1);
    CHECK(h.at(0) == fg_tor(Z, {2}));
}

TEST_CASE("homology of the zero complex") { CHECK(homology(ChainComplex(Z)).empty()); }

TEST_CASE("Koszul complex of (2,3) over Z is acyclic") {
    // Z --(x,y)|->(2,3)--> is modeled by degrees [2,1,0]: Z -> Z^2 -> Z
    std::map<int, int> ranks{{0, 1}, {1, 2}, {2, 1}};
    std::map<int, Matrix> d{{1, Matrix(Z, 1, 2, {2, 3})}, {2, Matrix(Z, 2, 1, {-3, 2})}};
    ChainComplex koszul(Z, ranks, d);
    CHECK(homology(koszul).empty());
}

TEST_CASE("shift laws") {
    std::mt19937 rng(5);
    ChainComplex c = random_two_term(rng, Z, 2, 2);
    CHECK(shift(c, 0) == c);
    CHECK(shift(shift(c, 1), -1) == c);
    CHECK(shift(ChainComplex::unit(Z), 2) == ChainComplex::concentrated(Z, 2, 1));
    HomologyTable h = homology(shift(c, 3));
    for (auto& [deg, m] : homology(c)) CHECK(h.at(deg + 3) == m);
}

TEST_CASE("tensor unit and shifts") {
    std::mt19937 rng(6);
    ChainComplex b = random_two_term(rng, Z, 2, 1);
    CHECK(tensor(ChainComplex::unit(Z), b) == b);
    ChainComplex z1 = ChainComplex::concentrated(Z, 1, 1);
    CHECK(tensor(z1, z1) == ChainComplex::concentrated(Z, 2, 1));
}

TEST_CASE("tensor of Z--2-->Z with Z--3-->Z is acyclic") {
    // Kunneth oracle: H_0 = Z/2 (x) Z/3 = 0, H_1 = Tor(Z/2, Z/3) = 0.
    ChainComplex t = tensor(two_term(Z, 2), two_term(Z, 3));
    CHECK(homology(t).empty());
    // sanity: same computation with 2 and 4 keeps torsion
    HomologyTable h = homology(tensor(two_term(Z, 2), two_term(Z, 4)));
    CHECK(h.at(0) == fg_tor(Z, {2}));
    CHECK(h.at(1) == fg_tor(Z, {2}));
}

TEST_CASE("Kunneth rank check over a field") {
    RingSpec f5 = RingSpec::Fp(5);
    std::mt19937 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        ChainComplex a = random_two_term(rng, f5, 1 + trial % 2, 2);
        ChainComplex b = random_two_term(rng, f5, 2, 1 + trial % 3);
        HomologyTable ha = homology(a), hb = homology(b), ht = homology(tensor(a, b));
        for (int n = 0; n <= 2; ++n) {
            int expect = 0;
            for (int i = 0; i <= n; ++i) {
                int ra = ha.count(i) ? ha.at(i).free_rank : 0;
                int rb = hb.count(n - i) ? hb.at(n - i).free_rank : 0;
                expect += ra * rb;
            }
            int got = ht.count(n) ? ht.at(n).free_rank : 0;
            CHECK(got == expect);
        }
    }
}

TEST_CASE("cone basics") {
    std::mt19937 rng(9);
    ChainComplex c = random_two_term(rng, Z, 2, 2);
    CHECK(homology(cone(ChainMap::identity(c))).empty());
    ChainComplex zero(Z);
    CHECK(cone(ChainMap::zero(zero, c)) == c);
    ChainMap two(ChainComplex::unit(Z), ChainComplex::unit(Z), {{0, Matrix(Z, 1, 1, {2})}});
    HomologyTable h = homology(cone(two));
    REQUIRE(h.size() == 1);
    CHECK(h.at(0) == fg_tor(Z, {2}));
}

TEST_CASE("euler characteristic additivity under cones") {
    std::mt19937 rng(10);
    ChainComplex a = random_two_term(rng, Z, 2, 2);
    ChainMap f = ChainMap::identity(a);
    CHECK(cone(f).euler_characteristic() == a.euler_characteristic() - a.euler_characteristic());
    ChainMap z = ChainMap::zero(a, a);
    CHECK(cone(z).euler_characteristic() == 0);
}

TEST_CASE("connective truncation") {
    ChainComplex c = two_term(Z, 2);  // degrees [1, 0]
    CHECK(truncate_connective(c, 0) == c);
    CHECK(homology(truncate_connective(c, 1)).empty());  // kernel of *2 is 0
    // Z in degrees 0 and -1 with zero differential: tau_{>=0} keeps degree 0
    ChainComplex s1dual(Z, {{0, 1}, {-1, 1}}, {});
    CHECK(truncate_connective(s1dual, 0) == ChainComplex::unit(Z));
}

TEST_CASE("truncation is idempotent and preserves homology above the cut") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        ChainComplex c = random_two_term(rng, Z, 2, 2);
        ChainComplex t = truncate_connective(c, 1);
        CHECK(truncate_connective(t, 1) == t);
        HomologyTable ht = homology(t), hc = homology(c);
        CHECK((ht.count(1) ? ht.at(1) : FgModule{Z, 0, {}}) == (hc.count(1) ? hc.at(1) : FgModule{Z, 0, {}}));
        CHECK_FALSE(ht.count(0));
    }
}

TEST_CASE("quasi-isomorphism detection") {
    ChainComplex c = two_term(Z, 2);
    CHECK(is_quasi_iso(ChainMap::identity(c)));
    // acyclic target: zero map from zero complex is a quasi-iso
    ChainComplex acyclic = two_term(Z, 1);
    CHECK(is_quasi_iso(ChainMap::zero(ChainComplex(Z), acyclic)));
    // multiplication by 2 on Z[0] is not
    ChainMap two(ChainComplex::unit(Z), ChainComplex::unit(Z), {{0, Matrix(Z, 1, 1, {2})}});
    CHECK_FALSE(is_quasi_iso(two));
}

TEST_CASE("reduce_complex preserves homology") {
    std::mt19937 rng(14);
    for (int trial = 0; trial < 12; ++trial) {
        // random three-term complex built as a cone to guarantee d*d = 0
        ChainComplex a = random_two_term(rng, Z, 2, 2);
        ChainComplex b = random_two_term(rng, Z, 2, 2);
        ChainComplex t = tensor(a, b);
        ChainComplex r = reduce_complex(t);
        CHECK(derham::testing::homology_plain(r) == derham::testing::homology_plain(t));
        for (auto& [deg, rk] : r.ranks()) CHECK(rk <= t.rank(deg));
    }
}
