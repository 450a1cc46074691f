#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qmzv/qseries.hpp"
#include "qmzv/verifier.hpp"
#include "qmzv/word.hpp"

namespace qmzv::detail {

// Typed access to string-valued check parameters.
class ParamReader {
public:
    explicit ParamReader(const Params& params) : params_(params) {}

    bool has(const std::string& key) const { return params_.count(key) != 0; }
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    // Integer with a lower bound; throws std::invalid_argument below it.
    long at_least(const std::string& key, long minimum) const;
    WordPoly poly(const std::string& key) const;
    Letter letter(const std::string& key) const;
    Word word(const std::string& key) const;

private:
    const std::string& raw(const std::string& key) const;
    const Params& params_;
};

const std::vector<std::string>& identity_keys(IdentityId id);

struct SymbolicSides {
    WordPoly lhs;
    WordPoly rhs;
};

struct ExactSides {
    ExactSides() = default;
    ExactSides(Rational l, Rational r) : lhs(std::move(l)), rhs(std::move(r)) {}

    Rational lhs;
    Rational rhs;
    // Secondary equalities some identities carry (intermediate forms, pointwise steps).
    bool auxiliary_holds = true;
    std::string note;
};

struct TruncatedSides {
    CertifiedValue lhs;
    CertifiedValue rhs;
};

struct TruncatedPlan {
    long minimum_terms = 1;
    // Tail bounds of (lhs, rhs) at a given truncation; cheap, used to choose M_max.
    std::function<std::pair<Rational, Rational>(long)> tails;
    std::function<TruncatedSides(long)> evaluate;
    std::string note;
};

SymbolicSides symbolic_sides(IdentityId id, const ParamReader& p);
ExactSides exact_sides(IdentityId id, const ParamReader& p, const QContext& ctx);
TruncatedPlan truncated_plan(IdentityId id, const ParamReader& p, const QContext& ctx);

}  // namespace qmzv::detail
