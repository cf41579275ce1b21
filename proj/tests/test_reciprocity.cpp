#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "cmcoincide/reciprocity.hpp"
#include "test_helpers.hpp"

using namespace cmcoincide;
using testutil::K_cyclotomic;
using testutil::K_second;
using testutil::L5;

TEST_CASE("legendre symbol over L", "[reciprocity]") {
    const auto& L = L5();
    auto P19 = L.factor_rational_prime(19)[0].first;
    CHECK(legendre(L.one(), P19) == 1);
    CHECK(legendre(P19.gen, P19) == 0);
    // consistency with splitting: d is a non-square at both 19-primes
    for (auto& [P, e] : L.factor_rational_prime(19)) {
        CHECK(legendre(K_cyclotomic().d(), P) == -1);
        CHECK((splitting_in_K(P, K_cyclotomic()).type == SplitType::inert));
    }
    auto P2 = L.factor_rational_prime(2)[0].first;
    CHECK_THROWS_AS(legendre(L.one(), P2), Error);
}

TEST_CASE("hilbert symbol at real places", "[reciprocity]") {
    const auto& L = L5();
    FieldElem tneg = L.elem(-2, -1);  // totally negative
    FieldElem tpos = L.elem(2, 1);    // totally positive
    CHECK(hilbert_symbol(tneg, tpos, Place::at_real(1)) == 1);
    CHECK(hilbert_symbol(tneg, tneg, Place::at_real(1)) == -1);
    CHECK(hilbert_symbol(tneg, tneg, Place::at_real(2)) == -1);
    // mixed signs: sqrt5 is negative only at the second embedding
    CHECK(hilbert_symbol(L.sqrtD(), tneg, Place::at_real(1)) == 1);
    CHECK(hilbert_symbol(L.sqrtD(), tneg, Place::at_real(2)) == -1);
}

TEST_CASE("hilbert product formula on random pairs", "[reciprocity][slow]") {
    const auto& L = L5();
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 200) {
        FieldElem g = L.elem(long(rng() % 41) - 20, long(rng() % 41) - 20);
        FieldElem d = L.elem(long(rng() % 41) - 20, long(rng() % 41) - 20);
        if (g.is_zero() || d.is_zero()) continue;
        CHECK(product_formula_check(g, d));
        ++done;
    }
}

TEST_CASE("reciprocity identities for prime elements", "[reciprocity]") {
    const auto& L = L5();
    std::vector<FieldElem> primes;
    for (long x = -12; x <= 12 && primes.size() < 10; ++x)
        for (long y = -12; y <= 12 && primes.size() < 10; ++y) {
            FieldElem e = L.elem(x, y);
            if (e.is_zero()) continue;
            Integer n = abs(num(e.norm()));
            if (n < 3 || n % 2 == 0 || !is_probable_prime(n)) continue;
            primes.push_back(e);
        }
    REQUIRE(primes.size() >= 8);
    int pairs = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const FieldElem& g = primes[i];
        PrimeOfL Pg = prime_of_element(L, g);
        // (5): (-1/g)(-1,g)_2 = (-1)^{r(g)}
        int lhs = legendre(L.integer(-1), Pg);
        for (const auto& eta : L.dyadic_primes())
            lhs *= hilbert_symbol(L.integer(-1), g, Place::at_prime(eta));
        int r = (g.sign_at(1) < 0) + (g.sign_at(2) < 0);
        CHECK(lhs == (r % 2 ? -1 : 1));
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
            const FieldElem& d = primes[j];
            if (abs(num(L.gcd(g, d).norm())) != 1) continue;
            PrimeOfL Pd = prime_of_element(L, d);
            // (4): (g/d)(d/g) = (-1)^{r(g,d)} (g,d)_2
            int left = legendre(g, Pd) * legendre(d, Pg);
            int rr = ((g.sign_at(1) < 0 && d.sign_at(1) < 0) ? 1 : 0) +
                     ((g.sign_at(2) < 0 && d.sign_at(2) < 0) ? 1 : 0);
            int right = rr % 2 ? -1 : 1;
            for (const auto& eta : L.dyadic_primes())
                right *= hilbert_symbol(g, d, Place::at_prime(eta));
            CHECK(left == right);
            ++pairs;
        }
    }
    CHECK(pairs >= 20);
}

TEST_CASE("odd hilbert symbol invariances", "[reciprocity]") {
    const auto& L = L5();
    auto P19 = L.factor_rational_prime(19)[0].first;
    FieldElem eps = L.fundamental_unit();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        FieldElem g = L.elem(long(rng() % 21) - 10, long(rng() % 21) - 10);
        FieldElem d = L.elem(long(rng() % 21) - 10, long(rng() % 21) - 10);
        if (g.is_zero() || d.is_zero()) continue;
        Place pl = Place::at_prime(P19);
        int s = hilbert_symbol(g, d, pl);
        CHECK(hilbert_symbol(g * eps * eps, d, pl) == s);
        CHECK(hilbert_symbol(g, d * eps * eps, pl) == s);
        // multiplying by a square modulo the prime
        FieldElem sq = L.elem(3, 1) * L.elem(3, 1);
        CHECK(hilbert_symbol(g * sq, d, pl) == s);
    }
}

TEST_CASE("primes in arithmetic progressions", "[reciprocity]") {
    const auto& L = L5();
    // smallest totally positive prime element congruent to 1 mod (1)
    FieldElem a = find_prime_in_progression(L.one(), IdealL::principal(L, L.one()), {1, 1});
    CHECK(a.is_totally_positive());
    CHECK(is_probable_prime(abs(num(a.norm()))));
    // non-coprime residue rejected
    CHECK_THROWS_AS(find_prime_in_progression(L.integer(2), IdealL::principal(L, L.integer(2)),
                                              {1, 1}),
                    Error);
    // totally negative prime in a congruence class
    FieldElem r = L.elem(1, 0);
    FieldElem m = L.integer(4) * L.elem(-2, -1);
    FieldElem b = find_prime_in_progression(r, IdealL::principal(L, m), {-1, -1});
    CHECK(b.is_totally_negative());
    CHECK(((b - r) / m).is_integral());
    // deterministic: the same call returns the same element
    CHECK(b == find_prime_in_progression(r, IdealL::principal(L, m), {-1, -1}));
    // budget error surfaces
    CHECK_THROWS_AS(
        find_prime_in_progression(r, IdealL::principal(L, m), {-1, -1},
                                  ProgressionOptions{3, 5}),
        SearchBudgetExceeded);
}

TEST_CASE("alpha0 construction and verification", "[reciprocity][slow]") {
    const auto& L = L5();
    const auto& K = K_cyclotomic();
    auto A0 = find_alpha0(K, 19);
    CHECK(A0.alpha0.is_totally_negative());
    // itemized congruences
    for (const PrimeOfL& q : K.ramified_primes())
        CHECK(((A0.alpha0 - L.integer(19)) / q.gen).is_integral());
    CHECK(((A0.alpha0 - L.one()) / L.integer(19)).is_integral());
    CHECK(((A0.alpha0 - L.integer(19)) / L.integer(32)).is_integral());  // 2 inert, 2e+3 = 5
    // (d / alpha0) = 1 always
    PrimeOfL Pa = prime_of_element(L, A0.alpha0);
    CHECK(legendre(K.d(), Pa) == 1);
    // the ramified places of (d, alpha0 p) are S0 and the real places
    auto shape = quaternion_shape(K.d(), A0.alpha0 * L.integer(19));
    int real_count = 0, finite_count = 0;
    for (const Place& pl : shape.ramified_places)
        (pl.kind == Place::Kind::real ? real_count : finite_count)++;
    CHECK(real_count == 2);
    CHECK(finite_count == 2);  // two split 19-primes, both odd residue degree
    // A lies above alpha0
    CHECK(A0.A.rel_norm_gen() == L.canonical_tp_generator(A0.alpha0));
    // p ramified in L is rejected
    CHECK_THROWS_AS(find_alpha0(K, 5), HypothesisViolation);
    // swapping A gives the conjugate prime
    auto A0s = find_alpha0(K, 19, Alpha0Options{400000, 0, true});
    CHECK(A0s.alpha0 == A0.alpha0);
    CHECK(A0s.A == A0.A.conj());
    CHECK_FALSE(A0s.A == A0.A);
}
