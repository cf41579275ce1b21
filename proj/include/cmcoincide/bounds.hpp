#pragma once

#include <string>
#include <vector>

#include "cmcoincide/cm_field.hpp"

namespace cmcoincide {

struct BoundInput {
    const CMField* K1 = nullptr;
    const CMField* K2 = nullptr;
    FieldElem c1, c2;  // conductor generators; default 1 for the maximal orders

    static BoundInput maximal(const CMField& K1, const CMField& K2) {
        return {&K1, &K2, K1.base().one(), K2.base().one()};
    }
};

// absolute discriminant of the order O_L[c kappa]: N(c^2 m) disc(O_L)^2
inline Integer order_abs_disc(const CMField& K, const FieldElem& c) {
    const RealQuadraticField& L = K.base();
    Integer nc = abs(num((c * c * K.d()).norm()));
    return nc * L.disc() * L.disc();
}

// 4^g disc(O_1) disc(O_2) / disc(O_L)^4 with g = 2
inline Rational crude_bound(const BoundInput& B) {
    const RealQuadraticField& L = B.K1->base();
    Integer d1 = order_abs_disc(*B.K1, B.c1);
    Integer d2 = order_abs_disc(*B.K2, B.c2);
    Integer dl = L.disc();
    return Rational(16 * d1 * d2) / (dl * dl * dl * dl);
}

struct CaseRow {
    std::string reduction;                 // "superspecial" | "supersingular_not_superspecial"
    bool rapoport = true;
    int r_prime = 2;
    std::vector<SplitType> behaviors;      // decompositions of p in L the row applies to
    std::string name;
};

inline std::vector<CaseRow> table_rows() {
    return {
        {"superspecial", true, 2, {SplitType::inert, SplitType::split}, "unramified_ssp"},
        {"supersingular_not_superspecial", true, 4, {SplitType::inert}, "inert_ssing"},
        {"superspecial", true, 2, {SplitType::ramified}, "ramified_ssp_rapoport"},
        {"superspecial", false, 1, {SplitType::ramified}, "ramified_ssp_non_rapoport"},
    };
}

// floor of the r'-th root of the bound, by exact integer root extraction
inline Integer prime_bound_for_case(const Rational& bound, const CaseRow& row) {
    if (bound < 0) return 0;
    return iroot_floor_rat(bound, unsigned(row.r_prime));
}

struct CandidateRow {
    std::string row_name;
    int r_prime;
    Integer ceiling;
    bool survives;
};

struct CandidatePrime {
    Integer p;
    SplitType behavior;
    std::vector<CandidateRow> rows;
    std::vector<std::string> flags;
};

// primes up to the maximal applicable ceiling, with the rows that can apply
// and whether each row's bound admits them
inline std::vector<CandidatePrime> candidate_primes(const BoundInput& B) {
    const RealQuadraticField& L = B.K1->base();
    Rational bound = crude_bound(B);
    auto rows = table_rows();
    Integer maxc = 0;
    for (const CaseRow& r : rows) {
        // the r' = 1 row only applies to primes ramified in L
        Integer c = prime_bound_for_case(bound, r);
        if (r.r_prime == 1) {
            // ramified primes are bounded by disc(L) anyway
            if (c > L.disc()) c = L.disc();
        }
        if (c > maxc) maxc = c;
    }
    std::vector<CandidatePrime> out;
    for (Integer p = 2; p <= maxc; ++p) {
        if (!is_probable_prime(p)) continue;
        CandidatePrime cp;
        cp.p = p;
        cp.behavior = L.rational_split_type(p);
        bool any = false;
        for (const CaseRow& r : rows) {
            bool applies = false;
            for (SplitType st : r.behaviors) applies = applies || st == cp.behavior;
            if (!applies) continue;
            Integer ceil = prime_bound_for_case(bound, r);
            bool ok = p <= ceil;
            cp.rows.push_back({r.name, r.r_prime, ceil, ok});
            any = any || ok;
        }
        if (!any) continue;
        if (p == 2) cp.flags.push_back("dyadic: counting formula not applicable, bound only");
        for (const CMField* K : {B.K1, B.K2}) {
            for (const PrimeOfL& q : K->ramified_primes())
                if (q.p == p) {
                    cp.flags.push_back("ramified in a CM field: formula not applicable, bound only");
                    break;
                }
            if (!cp.flags.empty() && cp.flags.back().rfind("ramified in a CM", 0) == 0) break;
        }
        out.push_back(cp);
    }
    return out;
}

}  // namespace cmcoincide
