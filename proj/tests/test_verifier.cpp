#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <stdexcept>

#include "qmzv/indices.hpp"
#include "qmzv/verifier.hpp"

using namespace qmzv;

namespace {

// zeta_q(alpha) truncated at m_1 <= M_max, by plain nested loops and its own weights.
Rational brute_zeta(const Rational& q, const std::vector<int>& alpha, long M_max)
{
    auto qpow = [&](long e) {
        Rational out = 1;
        for (long i = 0; i < e; ++i)
            out *= q;
        return out;
    };
    auto bracket = [&](long m) -> Rational { return (1 - qpow(m)) / (1 - q); };
    std::function<Rational(std::size_t, long)> rec = [&](std::size_t i, long upper) -> Rational {
        if (i == alpha.size())
            return 1;
        Rational s = 0;
        for (long m = 1; m <= upper; ++m) {
            Rational t = qpow((alpha[i] - 1) * m);
            for (int j = 0; j < alpha[i]; ++j)
                t /= bracket(m);
            s += t * rec(i + 1, m - 1);
        }
        return s;
    };
    return rec(0, M_max);
}

CheckResult run(const std::string& tag, Params params, const QContext* ctx = nullptr, CheckOptions options = {})
{
    return run_check(*parse_identity(tag), params, ctx, options);
}

}  // namespace

TEST_CASE("registry")
{
    CHECK(all_identities().size() == 23);
    for (IdentityId id : all_identities()) {
        CHECK(parse_identity(to_string(id)) == id);
        CHECK_FALSE(describe(id).empty());
    }
    CHECK(mode_of(IdentityId::S4) == Mode::Symbolic);
    CHECK(mode_of(IdentityId::E8) == Mode::Exact);
    CHECK(mode_of(IdentityId::T6) == Mode::Truncated);
    CHECK_FALSE(parse_identity("T7").has_value());
    CHECK(to_string(Verdict::Indeterminate) == "indeterminate");
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(validate_params(IdentityId::S3, {}), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(IdentityId::S3, {{"s", "1"}, {"k", "2"}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(IdentityId::S3, {{"s", "1"}, {"mutate", "2"}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(IdentityId::E1, {{"v", "xi1"}, {"w", "z1"}, {"M", "3"}, {"q", "0.5"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_params(IdentityId::E1, {{"v", "xi1"}, {"w", "z1"}, {"M", "3"}, {"q", "3/2"}}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_params(IdentityId::E3, {{"u", "z1"}, {"M", "3"}}));
    CHECK_NOTHROW(validate_params(IdentityId::E8, {{"m", "3"}, {"n", "1"}}));
    CHECK_THROWS_AS(run("S3", {{"s", "-1"}}), std::invalid_argument);
    CHECK_THROWS_AS(run("S5", {{"l", "1"}, {"w", "z2"}}), std::invalid_argument);
    const QContext ctx(Rational(1, 2));
    CHECK_THROWS_AS(run("E1", {{"v", "z1"}, {"w", "z1"}, {"M", "3"}}, &ctx), std::invalid_argument);
    CHECK_THROWS_AS(run("E1", {{"v", "xi1"}, {"w", "z1"}, {"M", "3"}}), std::invalid_argument);
    CHECK_THROWS_AS(run("T1", {{"a", "0"}, {"b", "3"}, {"n", "3"}}, &ctx), std::invalid_argument);
    CHECK_THROWS_AS(run("T6", {{"s", "1"}, {"l", "1"}, {"beta", "1"}, {"w", "z1"}}, &ctx), std::invalid_argument);
    CHECK_THROWS_AS(run("T6", {{"s", "1"}, {"l", "1"}, {"beta", "2"}, {"w", "z1 - xi1"}}, &ctx),
                    std::invalid_argument);
}

TEST_CASE("symbolic checks")
{
    const auto r = run("S3", {{"s", "4"}});
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.lhs == "0");
    CHECK(r.rhs == "0");
    CHECK(r.mode == Mode::Symbolic);
    CHECK(run("S8", {{"s", "2"}, {"a", "2"}}).lhs == "z1*z3 + z2*z2 + z3*z1");
    CHECK(run("S1", {{"k", "2"}}).rhs == "xi1*xi1 + xi2");
    CHECK(run("S9", {{"s", "3"}, {"a", "2"}, {"w", "xi1*z1"}}).verdict == Verdict::Pass);
    const auto mutated = run("S8", {{"s", "2"}, {"a", "2"}, {"mutate", "1"}});
    CHECK(mutated.verdict == Verdict::Fail);
    CHECK(mutated.rhs == "2*z1*z3 + z2*z2 + z3*z1");
    CHECK(run("S3", {{"s", "2"}, {"mutate", "1"}}).verdict == Verdict::Fail);
}

TEST_CASE("exact checks")
{
    const QContext third(Rational(1, 3)), half(Rational(1, 2));
    CHECK(run("E1", {{"v", "xi1"}, {"w", "z2"}, {"M", "6"}, {"q", "1/3"}}, &third).verdict == Verdict::Pass);
    CHECK(run("E2", {{"v", "xi1*xi2"}, {"M", "7"}, {"q", "1/2"}}, &half).verdict == Verdict::Pass);
    CHECK(run("E4", {{"s", "1"}, {"v", "z1"}, {"N", "6"}, {"M", "1"}, {"q", "1/2"}}, &half).verdict ==
          Verdict::Pass);
    const auto e7 = run("E7", {{"k", "4"}, {"m1", "5"}, {"m2", "2"}}, &half);
    CHECK(e7.verdict == Verdict::Pass);
    CHECK(e7.lhs == e7.rhs);
    const auto mutated = run("E6", {{"j", "2"}, {"n", "2"}, {"M", "4"}, {"mutate", "1"}}, &half);
    CHECK(mutated.verdict == Verdict::Fail);
    CHECK(parse_ratio(mutated.rhs) - parse_ratio(mutated.lhs) == Rational(1, 2));
    CHECK(run("E8", {{"m", "6"}, {"n", "2"}, {"L", "1"}}, &half).verdict == Verdict::Pass);
    CHECK(run("E3", {{"u", "xi2"}, {"M", "5"}}, &half).verdict == Verdict::Pass);
}

TEST_CASE("truncated checks")
{
    const QContext half(Rational(1, 2)), two_thirds(Rational(2, 3));
    CheckOptions eighty;
    eighty.terms = 80;
    const auto sum = run("T1", {{"a", "0"}, {"b", "2"}, {"n", "3"}}, &half, eighty);
    CHECK(sum.verdict == Verdict::Pass);
    CHECK(sum.terms_used == 80);
    REQUIRE(sum.slack.has_value());
    CHECK(*sum.slack >= 0);
    // zeta_q(2,1) on the left and zeta_q(3) on the right.
    CHECK(parse_ratio(sum.lhs) == brute_zeta(half.q(), {2, 1}, 80));
    CHECK(parse_ratio(sum.rhs) == brute_zeta(half.q(), {3}, 80));

    CheckOptions wide;
    wide.terms = 120;
    CHECK(run("T1", {{"a", "1"}, {"b", "2"}, {"n", "4"}}, &two_thirds, wide).verdict == Verdict::Pass);
    CHECK(run("T3", {{"b", "2"}, {"n", "3"}, {"M", "1"}, {"terms", "80"}}, &half).verdict == Verdict::Pass);

    const auto doubled = run("T6", {{"s", "1"}, {"l", "2"}, {"beta", "2"}, {"w", "z1"}, {"double", "1"}}, &half);
    CHECK(doubled.verdict == Verdict::Pass);
    REQUIRE(doubled.doubled_slack.has_value());
    CHECK(parse_ratio(*doubled.lhs_tail) <= default_tail_target());

    const auto mutated = run("T4", {{"b", "2"}, {"m", "4"}, {"M", "1"}, {"mutate", "1"}}, &half);
    CHECK(mutated.verdict == Verdict::Fail);

    // Too few terms: the intervals overlap but the tails are far above the ceiling.
    const auto shallow = run("T1", {{"a", "1"}, {"b", "1"}, {"n", "3"}, {"terms", "6"}}, &half);
    CHECK(shallow.verdict == Verdict::Indeterminate);
    CHECK_THROWS_AS(run("T3", {{"b", "3"}, {"n", "4"}, {"M", "3"}, {"terms", "5"}}, &half), std::invalid_argument);
}

TEST_CASE("truncated left side of the restricted sum matches nested loops")
{
    const QContext ctx(Rational(1, 2));
    const int a = 1, b = 2, n = 4;
    const long M_max = 14;
    Rational expected = 0;
    for (const auto& alpha : enumerate_admissible(b, n)) {
        std::vector<int> parts = alpha.parts();
        parts.insert(parts.end(), static_cast<std::size_t>(a), 1);
        expected += brute_zeta(ctx.q(), parts, M_max);
    }
    const auto r = run("T1", {{"a", "1"}, {"b", "2"}, {"n", "4"}, {"terms", "14"}}, &ctx);
    CHECK(parse_ratio(r.lhs) == expected);
}

TEST_CASE("restricted-sum index sets agree")
{
    for (int a = 0; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b)
            for (int n = b + 1; n <= 8; ++n)
                CHECK(restricted_sum_index_sets_match(a, b, n));
    CHECK_THROWS_AS(restricted_sum_index_sets_match(1, 2, 2), std::invalid_argument);
}
