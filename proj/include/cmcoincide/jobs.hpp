#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmcoincide/json_io.hpp"

namespace cmcoincide {

// Batch job: parsed from JSON (file or standard input), mode-dispatched.
struct JobSpec {
    std::string mode;
    Json K, Kprime;
    std::optional<Integer> p;
    int n = 1;
    std::optional<Integer> multiplicity;
    bool allow_self = false;
    long alpha0_budget = 400000;
    Integer relation_budget = 600;
    Integer search_seed = 0;  // reserved; all searches are deterministic
    std::optional<Integer> gz_d, gz_dprime;
    int gz_side = 0;
    std::size_t class_index = 0;
    int alpha0_skip = 0;
    bool swap_A = false;

    static JobSpec parse(const Json& j) {
        JobSpec s;
        s.mode = j.value("mode", "");
        if (j.contains("K")) s.K = j.at("K");
        if (j.contains("Kprime")) s.Kprime = j.at("Kprime");
        if (j.contains("p")) s.p = int_from_json(j.at("p"));
        if (j.contains("n")) s.n = int(int_from_json(j.at("n")).convert_to<long>());
        if (j.contains("multiplicity")) s.multiplicity = int_from_json(j.at("multiplicity"));
        s.allow_self = j.value("allow_self", false);
        if (j.contains("alpha0_budget"))
            s.alpha0_budget = long(int_from_json(j.at("alpha0_budget")).convert_to<long>());
        if (j.contains("relation_budget")) s.relation_budget = int_from_json(j.at("relation_budget"));
        if (j.contains("search_seed")) s.search_seed = int_from_json(j.at("search_seed"));
        if (j.contains("d")) s.gz_d = int_from_json(j.at("d"));
        if (j.contains("dprime")) s.gz_dprime = int_from_json(j.at("dprime"));
        if (j.contains("side")) s.gz_side = j.at("side").is_string()
                                                ? (j.at("side") == "dprime" ? 1 : 0)
                                                : int(int_from_json(j.at("side")).convert_to<long>());
        if (j.contains("class_index"))
            s.class_index = std::size_t(int_from_json(j.at("class_index")).convert_to<long>());
        if (j.contains("alpha0_skip"))
            s.alpha0_skip = int(int_from_json(j.at("alpha0_skip")).convert_to<long>());
        s.swap_A = j.value("swap_A", false);
        return s;
    }

    CoincidenceOptions coincidence_options() const {
        CoincidenceOptions o;
        o.allow_self = allow_self;
        o.alpha0.budget = alpha0_budget;
        o.alpha0.skip = alpha0_skip;
        o.alpha0.swap_A = swap_A;
        o.class_group.relation_budget = relation_budget;
        return o;
    }
};

struct JobResult {
    int exit_code = 0;
    Json output;                  // single-object modes
    std::vector<Json> stream;     // scan mode: one object per prime
    bool streaming = false;
    std::vector<std::string> summary;  // human-readable lines for stderr
};

namespace detail {

inline Json scan_entry_for(const CMField& K, const CMField& Kp, const CandidatePrime& cp,
                           const JobSpec& spec) {
    const Integer& p = cp.p;
    Json entry{{"p", int_to_json(p)}};
    if (!cp.flags.empty()) entry["flags"] = cp.flags;
    Eligibility eK = superspecial_eligible(K, p);
    Eligibility eKp = superspecial_eligible(Kp, p);
    entry["eligible_kprime"] = eKp.ok;
    if (!eK.ok) {
        entry["eligible"] = false;
        entry["reason"] = eK.reason;
        return entry;
    }
    if (!eKp.ok) {
        entry["eligible"] = false;
        entry["reason"] = "K' side: " + eKp.reason;
        return entry;
    }
    bool ssp_row = false;
    for (const auto& r : cp.rows) ssp_row = ssp_row || (r.row_name == "unramified_ssp" && r.survives);
    if (!ssp_row) {
        entry["eligible"] = false;
        entry["reason"] = "no surviving superspecial row";
        return entry;
    }
    try {
        CoincidenceReport rep =
            coincidence_total(K, Kp, p, spec.n, spec.multiplicity, spec.coincidence_options());
        return coincidence_report_to_json(rep);
    } catch (const Error& e) {
        entry["eligible"] = true;
        entry["error"] = e.what();
        return entry;
    }
}

}  // namespace detail

inline JobResult run_job(const Json& input) {
    JobResult res;
    JobSpec spec;
    try {
        spec = JobSpec::parse(input);
    } catch (const std::exception& e) {
        res.exit_code = 64;
        res.output = Json{{"error", std::string("malformed job: ") + e.what()}};
        return res;
    }
    try {
        if (spec.mode == "bound") {
            auto [L1, K1] = cm_field_from_json(spec.K);
            auto [L2, K2] = cm_field_from_json(spec.Kprime.is_null() ? spec.K : spec.Kprime, L1);
            res.output = bound_report_to_json(BoundInput::maximal(*K1, *K2));
            res.summary.push_back("crude bound " + res.output["bound"].dump());
        } else if (spec.mode == "classify") {
            if (!spec.p) throw Error("classify requires p");
            auto [L1, K1] = cm_field_from_json(spec.K);
            Json out{{"p", int_to_json(*spec.p)}};
            Eligibility e1 = superspecial_eligible(*K1, *spec.p);
            out["K"] = Json{{"eligible", e1.ok}, {"reason", e1.reason}};
            if (!spec.Kprime.is_null()) {
                auto [L2, K2] = cm_field_from_json(spec.Kprime, L1);
                Eligibility e2 = superspecial_eligible(*K2, *spec.p);
                out["Kprime"] = Json{{"eligible", e2.ok}, {"reason", e2.reason}};
            }
            SplitType st = L1->rational_split_type(*spec.p);
            out["behavior_in_L"] = st == SplitType::split    ? "split"
                                   : st == SplitType::inert ? "inert"
                                                            : "ramified";
            res.output = out;
            res.summary.push_back("p=" + spec.p->str() + " " + out["K"]["reason"].dump());
        } else if (spec.mode == "coincide") {
            auto [L1, K1] = cm_field_from_json(spec.K);
            auto [L2, K2] = cm_field_from_json(spec.Kprime, L1);
            if (spec.p) {
                CoincidenceReport rep = coincidence_total(*K1, *K2, *spec.p, spec.n,
                                                          spec.multiplicity,
                                                          spec.coincidence_options());
                res.output = coincidence_report_to_json(rep);
                res.summary.push_back("p=" + spec.p->str() + " total=" + rep.total.str());
            } else {
                // scan mode: stream one entry per candidate prime, ascending
                res.streaming = true;
                for (const CandidatePrime& cp :
                     candidate_primes(BoundInput::maximal(*K1, *K2))) {
                    Json entry = detail::scan_entry_for(*K1, *K2, cp, spec);
                    res.stream.push_back(entry);
                    res.summary.push_back("p=" + cp.p.str() +
                                          (entry.contains("total")
                                               ? " total=" + entry["total"].get<std::string>()
                                               : " " + entry.value("reason", "")));
                }
            }
        } else if (spec.mode == "classgroup") {
            auto [L1, K1] = cm_field_from_json(spec.K);
            ClassGroupOptions o;
            o.relation_budget = spec.relation_budget;
            ClassGroup G = class_group(*K1, IdealL::principal(*L1, L1->integer(2)), o);
            Json str = Json::array();
            for (const Integer& s : G.structure) str.push_back(int_to_json(s));
            Json reps = Json::array();
            for (const IdealK& R : G.representatives) reps.push_back(ideal_to_json(R));
            res.output = Json{{"h", int_to_json(G.h)}, {"structure", str},
                              {"representatives", reps}};
            res.summary.push_back("h = " + G.h.str());
        } else if (spec.mode == "gz1") {
            if (!spec.gz_d || !spec.gz_dprime || !spec.p)
                throw Error("gz1 requires d, dprime and p");
            Rational v = gz1_valuation(*spec.gz_d, *spec.gz_dprime, *spec.p, spec.gz_side);
            res.output = Json{{"d", int_to_json(*spec.gz_d)},
                              {"dprime", int_to_json(*spec.gz_dprime)},
                              {"p", int_to_json(*spec.p)},
                              {"side", spec.gz_side == 0 ? "d" : "dprime"},
                              {"ord", rational_to_json(v)}};
            res.summary.push_back("ord = " + res.output["ord"].dump());
        } else if (spec.mode == "dump-order") {
            if (!spec.p) throw Error("dump-order requires p");
            auto [L1, K1] = cm_field_from_json(spec.K);
            EmbeddingContext ctx = make_embedding_context(
                *K1, *spec.p, spec.n,
                Alpha0Options{spec.alpha0_budget, spec.alpha0_skip, spec.swap_A});
            ClassGroupOptions o;
            o.relation_budget = spec.relation_budget;
            FieldElem avoid = L1->integer(2 * *spec.p) * K1->d() * ctx.alpha0;
            ClassGroup G = class_group(*K1, IdealL::principal(*L1, avoid), o);
            if (spec.class_index >= G.representatives.size())
                throw Error("class_index out of range");
            OrderLattice R = order_for_ideal(ctx, G.representatives[spec.class_index]);
            res.output = order_to_json(R);
            res.summary.push_back("order dumped; class " + std::to_string(spec.class_index));
        } else {
            res.exit_code = 64;
            res.output = Json{{"error", "unknown mode: " + spec.mode}};
        }
    } catch (const HypothesisViolation& e) {
        res.exit_code = 2;
        res.output = Json{{"error", e.what()}, {"kind", "hypothesis_violation"}};
    } catch (const IneligiblePrime& e) {
        res.exit_code = 2;
        res.output = Json{{"error", e.what()}, {"kind", "ineligible_prime"},
                          {"reason", e.reason}};
    } catch (const Error& e) {
        res.exit_code = 1;
        res.output = Json{{"error", e.what()}};
    } catch (const std::exception& e) {
        res.exit_code = 64;
        res.output = Json{{"error", std::string("malformed job: ") + e.what()}};
    }
    return res;
}

}  // namespace cmcoincide
