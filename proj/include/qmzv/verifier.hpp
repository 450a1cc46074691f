#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmzv/qseries.hpp"
#include "qmzv/rational.hpp"

namespace qmzv {

// Registered identities. S*: word algebra, E*: finite sums, T*: infinite sums.
enum class IdentityId {
    S1, S2, S3, S4, S5, S6, S7, S8, S9,
    E1, E2, E3, E4, E5, E6, E7, E8,
    T1, T2, T3, T4, T5, T6,
};

enum class Mode { Symbolic, Exact, Truncated };
enum class Verdict { Pass, Fail, Indeterminate };

using Params = std::map<std::string, std::string>;

std::string_view to_string(IdentityId id);
std::string_view to_string(Mode mode);
std::string_view to_string(Verdict verdict);
std::optional<IdentityId> parse_identity(std::string_view tag);
Mode mode_of(IdentityId id);
// One-line description of the identity.
std::string_view describe(IdentityId id);
const std::vector<IdentityId>& all_identities();

struct CheckResult {
    IdentityId identity{};
    Params params;
    Mode mode{};
    Verdict verdict = Verdict::Indeterminate;
    std::string lhs;  // exact rational "p/r" or word polynomial
    std::string rhs;
    std::optional<std::string> lhs_tail;  // truncated mode only
    std::optional<std::string> rhs_tail;
    std::optional<Rational> slack;        // (lhs_tail + rhs_tail) - |lhs - rhs|
    std::optional<Rational> doubled_slack;
    long terms_used = 0;
    std::string message;
    std::chrono::duration<double, std::milli> elapsed{0};
};

struct CheckOptions {
    // Truncation: fixed M_max or (when empty) the smallest one meeting tail_target.
    std::optional<long> terms;
    Rational tail_target = default_tail_target();
    // Tails above this make a truncated check indeterminate unless the intervals are disjoint.
    Rational tail_ceiling = default_tail_target();
};

// Parameter keys always accepted besides the identity's own: q, terms, double, mutate.
// `mutate=1` adds a deliberate perturbation to the right-hand side (negative control):
// +1 on the leading word (symbolic), an extra J_{xi_1}(1) = q term (exact and truncated).
// `double=1` (truncated) re-checks at twice the truncation; both runs must pass.
CheckResult check_symbolic(IdentityId id, const Params& params);
CheckResult check_exact(IdentityId id, const Params& params, const QContext& ctx);
CheckResult check_truncated(IdentityId id, const Params& params, const QContext& ctx,
                            const CheckOptions& options = {});

// Dispatches on the identity's mode; ctx is ignored for symbolic identities.
CheckResult run_check(IdentityId id, const Params& params, const QContext* ctx, const CheckOptions& options = {});

// Throws std::invalid_argument when params do not match the identity's schema.
void validate_params(IdentityId id, const Params& params);

// The restricted-sum right-hand side written two ways as index multisets:
// {(n-s, gamma) : 0 <= s < b, gamma in I(a, s+a)} and {(beta_1+n-b-1, beta_2, ...) : beta in I_0(a+1, a+b+1)}.
bool restricted_sum_index_sets_match(int a, int b, int n);

}  // namespace qmzv
