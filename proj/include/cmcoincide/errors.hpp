#pragma once

#include <stdexcept>
#include <string>

namespace cmcoincide {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A field or prime fails one of the standing arithmetic hypotheses.
struct HypothesisViolation : Error {
    explicit HypothesisViolation(const std::string& clause)
        : Error("hypothesis violation: " + clause), clause(clause) {}
    std::string clause;
};

struct IneligiblePrime : Error {
    explicit IneligiblePrime(const std::string& why)
        : Error("prime not covered by the counting formula: " + why), reason(why) {}
    std::string reason;
};

struct SearchBudgetExceeded : Error {
    using Error::Error;
};

struct RelationSearchIncomplete : Error {
    using Error::Error;
};

struct NonCoprimeIdeal : Error {
    using Error::Error;
};

struct ClosureFailure : Error {
    using Error::Error;
};

struct VerificationFailed : Error {
    using Error::Error;
};

struct NonIntegerResult : Error {
    using Error::Error;
};

}  // namespace cmcoincide
