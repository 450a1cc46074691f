#include "qmzv/verifier.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "identities.hpp"
#include "qmzv/indices.hpp"

namespace qmzv {

namespace {

struct IdentityInfo {
    IdentityId id;
    std::string_view tag;
    Mode mode;
    std::string_view description;
};

constexpr std::array<IdentityInfo, 23> registry = {{
    {IdentityId::S1, "S1", Mode::Symbolic, "d(xi1^k) is the sum of xi_c over all compositions c of k"},
    {IdentityId::S2, "S2", Mode::Symbolic, "d(xi1^k) = sum_a xi_a d(xi1^(k-a))"},
    {IdentityId::S3, "S3", Mode::Symbolic, "Z_s(1) = 1 for s = 0 and 0 otherwise"},
    {IdentityId::S4, "S4", Mode::Symbolic, "Phi_l(1) = (-xi1)^l"},
    {IdentityId::S5, "S5", Mode::Symbolic, "Phi_l(z1 w) = sum_j (-xi1)^(l-j) z1 Phi_j(w)"},
    {IdentityId::S6, "S6", Mode::Symbolic,
     "sum_l (-1)^l rho(d(xi1^(k-l)), xi1^l z1 w) = sum_l z_(l+1) rho(d(xi1^(k-l)), w)"},
    {IdentityId::S7, "S7", Mode::Symbolic, "Z_s(z1 w) = sum_l z_(l+1) Z_(s-l)(w)"},
    {IdentityId::S8, "S8", Mode::Symbolic, "Z_s(z1^a) is the sum of z_g over all g in I(a, s+a)"},
    {IdentityId::S9, "S9", Mode::Symbolic,
     "phi_s(xi1^a z1 w) = sum_t (eta(a, s-t) + eta(a+1, s-t-1)) z1 phi_t(w)"},
    {IdentityId::E1, "E1", Mode::Exact, "A_v(M) A_w(M) = A_rho(v,w)(M)"},
    {IdentityId::E2, "E2", Mode::Exact, "A*_v(M) = A_d(v)(M)"},
    {IdentityId::E3, "E3", Mode::Exact, "one-letter recursion for A_uw(M) and A*_uw(M)"},
    {IdentityId::E4, "E4", Mode::Exact, "f-chain exchange for the kernels p"},
    {IdentityId::E5, "E5", Mode::Exact, "sum f_s'(N,M1) f_s(M1,M2) A_w(M2) = sum f_s'(N,M) A_phi_s(w)(M)"},
    {IdentityId::E6, "E6", Mode::Exact, "g_(j,n)(M) = sum_t J_z(n+j-t-1)(M) A*_(xi1^t)(M)"},
    {IdentityId::E7, "E7", Mode::Exact, "partial fractions for sum over I(2,k) of J_z(b1)(m1) J_z(b2)(m2)"},
    {IdentityId::E8, "E8", Mode::Exact, "telescoping sum of q^(l+m)/[l+m] / [l+n]"},
    {IdentityId::T1, "T1", Mode::Truncated, "restricted sum formula"},
    {IdentityId::T2, "T2", Mode::Truncated, "sum formula: restricted sum with a = 0"},
    {IdentityId::T3, "T3", Mode::Truncated, "K_(b,n)(M) decomposes into g_(b,n-b+1)(M)"},
    {IdentityId::T4, "T4", Mode::Truncated, "K_(b,m)(M) expands in g and h with alternating signs"},
    {IdentityId::T5, "T5", Mode::Truncated, "restricted sum with right side written through Z_s(z1^a)"},
    {IdentityId::T6, "T6", Mode::Truncated, "sum g f_s A_w = sum g A_phi_s(w)"},
}};

const IdentityInfo& info(IdentityId id)
{
    return registry[static_cast<std::size_t>(id)];
}

const std::set<std::string>& common_keys()
{
    static const std::set<std::string> keys = {"q", "terms", "double", "mutate"};
    return keys;
}

bool optional_key(IdentityId id, const std::string& key)
{
    return (id == IdentityId::E3 && (key == "w" || key == "star")) || (id == IdentityId::E8 && key == "L");
}

bool flag(const Params& params, const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end())
        return false;
    if (it->second == "0")
        return false;
    if (it->second == "1")
        return true;
    throw std::invalid_argument("parameter '" + key + "' must be 0 or 1");
}

WordPoly symbolic_perturbation(const WordPoly& rhs)
{
    if (rhs.is_zero())
        return WordPoly::unit();
    return WordPoly(rhs.terms().begin()->first);
}

Verdict combine(Verdict a, Verdict b)
{
    if (a == Verdict::Fail || b == Verdict::Fail)
        return Verdict::Fail;
    if (a == Verdict::Indeterminate || b == Verdict::Indeterminate)
        return Verdict::Indeterminate;
    return Verdict::Pass;
}

struct Comparison {
    Verdict verdict;
    Rational slack;
};

// Intervals [L, L + lt] and [R, R + rt] hold the true sides.
Comparison compare(const detail::TruncatedSides& sides, const Rational& ceiling)
{
    const auto& l = sides.lhs;
    const auto& r = sides.rhs;
    const Rational gap = abs(l.partial - r.partial);
    Comparison out{Verdict::Pass, l.tail + r.tail - gap};
    const bool intersect = l.partial <= r.upper() && r.partial <= l.upper();
    if (!intersect)
        out.verdict = Verdict::Fail;
    else if (l.tail > ceiling || r.tail > ceiling)
        out.verdict = Verdict::Indeterminate;
    return out;
}

}  // namespace

std::string_view to_string(IdentityId id) { return info(id).tag; }

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::Symbolic:
        return "symbolic";
    case Mode::Exact:
        return "exact";
    case Mode::Truncated:
        return "truncated";
    }
    return "?";
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::Indeterminate:
        return "indeterminate";
    }
    return "?";
}

std::optional<IdentityId> parse_identity(std::string_view tag)
{
    for (const auto& entry : registry)
        if (entry.tag == tag)
            return entry.id;
    return std::nullopt;
}

Mode mode_of(IdentityId id) { return info(id).mode; }

std::string_view describe(IdentityId id) { return info(id).description; }

const std::vector<IdentityId>& all_identities()
{
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> out;
        for (const auto& entry : registry)
            out.push_back(entry.id);
        return out;
    }();
    return ids;
}

void validate_params(IdentityId id, const Params& params)
{
    const auto& keys = detail::identity_keys(id);
    for (const auto& [key, value] : params) {
        if (common_keys().count(key) != 0)
            continue;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw std::invalid_argument(std::string(to_string(id)) + " does not take parameter '" + key + "'");
    }
    for (const auto& key : keys)
        if (params.count(key) == 0 && !optional_key(id, key))
            throw std::invalid_argument(std::string(to_string(id)) + " needs parameter '" + key + "'");
    flag(params, "double");
    flag(params, "mutate");
    if (params.count("terms") != 0)
        detail::ParamReader(params).at_least("terms", 1);
    if (params.count("q") != 0) {
        const Rational q = parse_ratio(params.at("q"));
        if (q <= 0 || q >= 1)
            throw std::invalid_argument("q must lie strictly between 0 and 1");
    }
}

CheckResult check_symbolic(IdentityId id, const Params& params)
{
    if (mode_of(id) != Mode::Symbolic)
        throw std::invalid_argument(std::string(to_string(id)) + " is not symbolic");
    validate_params(id, params);
    auto sides = detail::symbolic_sides(id, detail::ParamReader(params));
    if (flag(params, "mutate"))
        sides.rhs += symbolic_perturbation(sides.rhs);
    CheckResult out;
    out.identity = id;
    out.params = params;
    out.mode = Mode::Symbolic;
    out.verdict = sides.lhs == sides.rhs ? Verdict::Pass : Verdict::Fail;
    out.lhs = sides.lhs.to_string();
    out.rhs = sides.rhs.to_string();
    return out;
}

CheckResult check_exact(IdentityId id, const Params& params, const QContext& ctx)
{
    if (mode_of(id) != Mode::Exact)
        throw std::invalid_argument(std::string(to_string(id)) + " is not exact");
    validate_params(id, params);
    auto sides = detail::exact_sides(id, detail::ParamReader(params), ctx);
    if (flag(params, "mutate"))
        sides.rhs += ctx.q();
    CheckResult out;
    out.identity = id;
    out.params = params;
    out.mode = Mode::Exact;
    out.verdict = sides.lhs == sides.rhs && sides.auxiliary_holds ? Verdict::Pass : Verdict::Fail;
    out.lhs = to_string(sides.lhs);
    out.rhs = to_string(sides.rhs);
    out.message = sides.note;
    return out;
}

CheckResult check_truncated(IdentityId id, const Params& params, const QContext& ctx, const CheckOptions& options)
{
    if (mode_of(id) != Mode::Truncated)
        throw std::invalid_argument(std::string(to_string(id)) + " is not truncated");
    validate_params(id, params);
    const detail::ParamReader reader(params);
    const auto plan = detail::truncated_plan(id, reader, ctx);

    std::optional<long> fixed = options.terms;
    if (reader.has("terms"))
        fixed = reader.integer("terms");
    long M_max = 0;
    if (fixed) {
        if (*fixed < plan.minimum_terms)
            throw std::invalid_argument(std::string(to_string(id)) + " needs terms >= " +
                                        std::to_string(plan.minimum_terms));
        M_max = *fixed;
    } else {
        const auto total_tail = [&plan](long m) {
            const auto [l, r] = plan.tails(m);
            return Rational(l + r);
        };
        M_max = auto_terms(ctx, total_tail, options.tail_target, plan.minimum_terms);
    }

    const bool mutate = flag(params, "mutate");
    auto run = [&](long m) {
        auto sides = plan.evaluate(m);
        if (mutate)
            sides.rhs.partial += ctx.q();
        return sides;
    };

    const auto sides = run(M_max);
    const auto first = compare(sides, options.tail_ceiling);
    CheckResult out;
    out.identity = id;
    out.params = params;
    out.mode = Mode::Truncated;
    out.verdict = first.verdict;
    out.lhs = to_string(sides.lhs.partial);
    out.rhs = to_string(sides.rhs.partial);
    out.lhs_tail = to_string(sides.lhs.tail);
    out.rhs_tail = to_string(sides.rhs.tail);
    out.slack = first.slack;
    out.terms_used = M_max;
    out.message = plan.note;
    if (flag(params, "double")) {
        const auto doubled = compare(run(2 * M_max), options.tail_ceiling);
        out.doubled_slack = doubled.slack;
        out.verdict = combine(out.verdict, doubled.verdict);
        if (doubled.verdict != first.verdict)
            out.message += (out.message.empty() ? "" : "; ") + std::string("doubled truncation gives ") +
                           std::string(to_string(doubled.verdict));
    }
    return out;
}

CheckResult run_check(IdentityId id, const Params& params, const QContext* ctx, const CheckOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    CheckResult out;
    if (mode_of(id) == Mode::Symbolic) {
        out = check_symbolic(id, params);
    } else {
        if (ctx == nullptr)
            throw std::invalid_argument(std::string(to_string(id)) + " needs a value of q");
        out = mode_of(id) == Mode::Exact ? check_exact(id, params, *ctx) : check_truncated(id, params, *ctx, options);
    }
    out.elapsed = std::chrono::steady_clock::now() - start;
    return out;
}

bool restricted_sum_index_sets_match(int a, int b, int n)
{
    if (a < 0 || b < 1 || n < b + 1)
        throw std::invalid_argument("index sets need a >= 0, b >= 1, n >= b + 1");
    std::vector<std::vector<int>> left, right;
    for (int s = 0; s < b; ++s) {
        if (a == 0) {
            if (s == 0)
                left.push_back({n});
            continue;
        }
        for (const auto& g : enumerate_compositions(a, s + a)) {
            std::vector<int> parts{n - s};
            parts.insert(parts.end(), g.parts().begin(), g.parts().end());
            left.push_back(std::move(parts));
        }
    }
    for (const auto& beta : enumerate_admissible(a + 1, a + b + 1)) {
        std::vector<int> parts = beta.parts();
        parts[0] += n - b - 1;
        right.push_back(std::move(parts));
    }
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return left == right;
}

}  // namespace qmzv
