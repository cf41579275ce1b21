#pragma once

#include <json.hpp>
#include <memory>
#include <string>

#include "cmcoincide/bounds.hpp"
#include "cmcoincide/counting.hpp"
#include "cmcoincide/orders.hpp"

namespace cmcoincide {

using Json = nlohmann::json;

// integers cross the wire as decimal strings so 64-bit consumers never truncate
inline Json int_to_json(const Integer& n) { return n.str(); }

inline Integer int_from_json(const Json& j) {
    if (j.is_number_integer()) return Integer(j.get<long long>());
    if (j.is_string()) return Integer(j.get<std::string>());
    throw Error("expected an integer or decimal string");
}

// element encoding: [x, y, den] for (x + y*omega)/den
inline Json elem_to_json(const FieldElem& e) {
    return Json::array({int_to_json(e.x()), int_to_json(e.y()), int_to_json(e.den())});
}

inline FieldElem elem_from_json(const RealQuadraticField& L, const Json& j) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3) throw Error("element must be [x, y, den]");
    Integer den = j.size() == 3 ? int_from_json(j[2]) : Integer(1);
    return L.elem(int_from_json(j[0]), int_from_json(j[1]), den);
}

inline Json elemk_to_json(const ElemK& e) {
    return Json{{"u", elem_to_json(e.u())}, {"v", elem_to_json(e.v())}};
}

inline ElemK elemk_from_json(const CMField& K, const Json& j) {
    return K.elem(elem_from_json(K.base(), j.at("u")), elem_from_json(K.base(), j.at("v")));
}

// field encoding: {"D": <int>}; CM field: {"D":., "a":[..], "b":[..]}
struct ParsedCMField {
    std::shared_ptr<RealQuadraticField> L;
    std::shared_ptr<CMField> K;
};

inline ParsedCMField cm_field_from_json(const Json& j,
                                        std::shared_ptr<RealQuadraticField> L = nullptr) {
    Integer D = int_from_json(j.at("D"));
    if (!L || L->D() != D) L = std::make_shared<RealQuadraticField>(D);
    FieldElem a = elem_from_json(*L, j.at("a"));
    FieldElem b = elem_from_json(*L, j.at("b"));
    return {L, std::make_shared<CMField>(*L, a, b)};
}

inline Json cm_field_to_json(const CMField& K) {
    return Json{{"D", int_to_json(K.base().D())},
                {"a", elem_to_json(K.a())},
                {"b", elem_to_json(K.b())}};
}

// ideal: 2x2 upper triangular basis matrix over O_L plus a denominator
inline Json ideal_to_json(const IdealK& I) {
    const RealQuadraticField& L = I.field().base();
    return Json{{"basis", Json::array({Json::array({elem_to_json(I.n()), elem_to_json(L.zero())}),
                                       Json::array({elem_to_json(I.c()), elem_to_json(I.m())})})},
                {"den", elem_to_json(I.den())}};
}

inline IdealK ideal_from_json(const CMField& K, const Json& j) {
    const RealQuadraticField& L = K.base();
    const Json& b = j.at("basis");
    FieldElem n = elem_from_json(L, b.at(0).at(0));
    FieldElem c = elem_from_json(L, b.at(1).at(0));
    FieldElem m = elem_from_json(L, b.at(1).at(1));
    FieldElem den = j.contains("den") ? elem_from_json(L, j.at("den")) : L.one();
    IdealK I = IdealK::from_generators(
        K, {K.elem(n, L.zero()), K.elem(c, m)});
    return I.scaled(L.one() / den);
}

inline Json coincidence_report_to_json(const CoincidenceReport& r) {
    Json per = Json::array();
    for (const auto& pc : r.per_class)
        per.push_back(Json{{"class", int_to_json(Integer(pc.class_index))},
                           {"s2_weighted", int_to_json(pc.s2_weighted)}});
    Json j{{"p", int_to_json(r.p)},
           {"n", int_to_json(Integer(r.n))},
           {"eligible", r.eligible},
           {"eligible_kprime", r.eligible_kprime},
           {"reason", r.reason},
           {"alpha0", elem_to_json(r.alpha0)},
           {"w_K", int_to_json(r.w_K)},
           {"tau", int_to_json(Integer(r.tau))},
           {"per_class", per},
           {"total_raw", int_to_json(r.total_raw)},
           {"total", int_to_json(r.total)},
           {"elapsed_ms", int_to_json(Integer(r.elapsed_ms))}};
    if (r.multiplicity) j["multiplicity"] = int_to_json(*r.multiplicity);
    return j;
}

inline Json order_to_json(const OrderLattice& R) {
    Json basis = Json::array();
    for (const auto& b : R.basis)
        basis.push_back(Json{{"alpha", elemk_to_json(b.alpha)}, {"beta", elemk_to_json(b.beta)}});
    Json gram = Json::array();
    for (const auto& row : R.gram()) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(int_to_json(e));
        gram.push_back(r);
    }
    Json label{{"a_ideal", ideal_to_json(R.a_label)},
               {"ell", elem_to_json(R.ell)},
               {"signs", R.signs_label}};
    if (R.lambda) label["lambda"] = elem_to_json(*R.lambda);
    return Json{{"basis", basis},
                {"gram", gram},
                {"label", label},
                {"alpha0p", elem_to_json(R.theta)}};
}

inline Json rational_to_json(const Rational& r) {
    if (den(r) == 1) return int_to_json(num(r));
    return num(r).str() + "/" + den(r).str();
}

inline Json bound_report_to_json(const BoundInput& B) {
    Rational bound = crude_bound(B);
    Json ceil;
    for (const CaseRow& r : table_rows()) {
        std::string key = "r" + std::to_string(r.r_prime);
        ceil[key] = int_to_json(prime_bound_for_case(bound, r));
    }
    Json cands = Json::array();
    for (const CandidatePrime& cp : candidate_primes(B)) {
        Json rows = Json::array();
        for (const CandidateRow& r : cp.rows)
            rows.push_back(Json{{"row", r.row_name},
                                {"r_prime", r.r_prime},
                                {"ceiling", int_to_json(r.ceiling)},
                                {"survives", r.survives}});
        cands.push_back(Json{{"p", int_to_json(cp.p)},
                             {"behavior", cp.behavior == SplitType::split    ? "split"
                                          : cp.behavior == SplitType::inert ? "inert"
                                                                            : "ramified"},
                             {"rows", rows},
                             {"flags", cp.flags}});
    }
    return Json{{"bound", rational_to_json(bound)}, {"ceilings", ceil}, {"candidates", cands}};
}

}  // namespace cmcoincide
