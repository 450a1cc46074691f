#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <stdexcept>

#include "qmzv/indices.hpp"
#include "qmzv/rational.hpp"

using namespace qmzv;

namespace {

// Every r-tuple over [lo, n] summing to n, by plain odometer.
std::vector<std::vector<int>> brute_tuples(int r, int n, int lo)
{
    std::vector<std::vector<int>> out;
    if (r == 0) {
        if (n == 0)
            out.push_back({});
        return out;
    }
    std::vector<int> t(static_cast<std::size_t>(r), lo);
    while (true) {
        int sum = 0;
        for (int x : t)
            sum += x;
        if (sum == n)
            out.push_back(t);
        std::size_t i = 0;
        while (i < t.size() && ++t[i] > n) {
            t[i] = lo;
            ++i;
        }
        if (i == t.size())
            return out;
    }
}

}  // namespace

TEST_CASE("compositions match brute force enumeration and order")
{
    for (int r = 1; r <= 5; ++r)
        for (int n = 0; n <= 9; ++n) {
            const auto got = enumerate_compositions(r, n);
            auto expected = brute_tuples(r, n, 1);
            std::set<std::vector<int>> sorted(expected.begin(), expected.end());
            REQUIRE(got.size() == sorted.size());
            CHECK(got.size() == static_cast<std::size_t>(n >= r ? binomial(n - 1, r - 1).get_ui() : 0));
            auto it = sorted.begin();
            for (const auto& c : got) {
                CHECK(c.parts() == *it++);
                CHECK(c.weight() == n);
                CHECK(c.depth() == static_cast<std::size_t>(r));
            }
        }
}

TEST_CASE("admissible compositions are those with first part at least two")
{
    for (int r = 1; r <= 4; ++r)
        for (int n = 1; n <= 8; ++n) {
            std::vector<std::vector<int>> expected;
            for (const auto& c : enumerate_compositions(r, n))
                if (c[0] >= 2)
                    expected.push_back(c.parts());
            const auto got = enumerate_admissible(r, n);
            REQUIRE(got.size() == expected.size());
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(got[i].parts() == expected[i]);
            CHECK(got.size() == static_cast<std::size_t>(n >= r + 1 ? binomial(n - 2, r - 1).get_ui() : 0));
        }
}

TEST_CASE("weak compositions")
{
    CHECK(enumerate_weak_compositions(0, 0).size() == 1);
    CHECK(enumerate_weak_compositions(0, 2).empty());
    for (int r = 1; r <= 4; ++r)
        for (int n = 0; n <= 6; ++n) {
            const auto got = enumerate_weak_compositions(r, n);
            std::set<std::vector<int>> expected;
            for (auto& t : brute_tuples(r, n, 0))
                expected.insert(t);
            CHECK(std::set<std::vector<int>>(got.begin(), got.end()) == expected);
            CHECK(got.size() == binomial(n + r - 1, r - 1).get_ui());
        }
}

TEST_CASE("composition basics and parsing")
{
    const Composition c({2, 1, 1});
    CHECK(c.to_string() == "(2,1,1)");
    CHECK(c.admissible());
    CHECK_FALSE(Composition({1, 2}).admissible());
    CHECK(parse_composition("2,1,1") == c);
    CHECK(parse_composition("3").parts() == std::vector<int>{3});
    CHECK_THROWS_AS(parse_composition("2, 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_composition(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_composition("2,,1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_composition("2,1,"), std::invalid_argument);
    CHECK_THROWS_AS(parse_composition("2,0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_composition("2,x"), std::invalid_argument);
    CHECK_THROWS_AS(Composition({1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(AdmissibleIndex(std::vector<int>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_compositions(0, 3), std::invalid_argument);
    CHECK(AdmissibleIndex(std::vector<int>{3, 1}).weight() == 4);
}
