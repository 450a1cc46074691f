#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "qmzv/word.hpp"

using namespace qmzv;

namespace {

WordPoly random_poly(std::mt19937& rng, int terms, int max_len)
{
    const std::vector<Letter> alphabet = {Letter::z(1), Letter::z(2), Letter::xi(1), Letter::xi(3)};
    std::uniform_int_distribution<int> len(0, max_len), pick(0, 3), coef(-3, 3);
    WordPoly p;
    for (int i = 0; i < terms; ++i) {
        std::vector<Letter> letters;
        for (int j = len(rng); j > 0; --j)
            letters.push_back(alphabet[static_cast<std::size_t>(pick(rng))]);
        p.add_term(Word(letters), coef(rng));
    }
    return p;
}

}  // namespace

TEST_CASE("letters")
{
    CHECK(Letter::z(3).to_string() == "z3");
    CHECK(Letter::xi(1).to_string() == "xi1");
    CHECK(Letter::xi(7) < Letter::z(1));
    CHECK(Letter::z(2) < Letter::z(10));
    CHECK_THROWS_AS(Letter::z(0), std::invalid_argument);
    CHECK(parse_letter("xi12") == Letter::xi(12));
    CHECK_THROWS_AS(parse_letter("x1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_letter("z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_letter("z0"), std::invalid_argument);
}

TEST_CASE("words")
{
    const Word w{Letter::z(2), Letter::xi(1)};
    CHECK(w.to_string() == "z2*xi1");
    CHECK(Word{}.to_string() == "1");
    CHECK(w.weight() == 3);
    CHECK(w.tail() == Word{Letter::xi(1)});
    CHECK(w.prepend(Letter::z(1)).to_string() == "z1*z2*xi1");
    CHECK(w.concat(w).length() == 4);
    CHECK(power(Letter::xi(1), 3).to_string() == "xi1*xi1*xi1");
    CHECK(parse_word("z1*xi2") == Word{Letter::z(1), Letter::xi(2)});
    CHECK(parse_word("1").empty());
}

TEST_CASE("canonical printing and order")
{
    CHECK(WordPoly{}.to_string() == "0");
    CHECK(WordPoly::unit().to_string() == "1");
    CHECK(WordPoly::constant(-3).to_string() == "-3");
    CHECK(parse_poly("z2 + z1*xi1 + xi1*z1").to_string() == "xi1*z1 + z1*xi1 + z2");
    CHECK(parse_poly("xi2 + xi1*xi1").to_string() == "xi1*xi1 + xi2");
    CHECK(parse_poly("z3*z1 + z2*z2 + z1*z3").to_string() == "z1*z3 + z2*z2 + z3*z1");
    CHECK(parse_poly("-z1 + 2*xi1 - 3").to_string() == "2*xi1 - z1 - 3");
    CHECK(parse_poly("-z1").to_string() == "-z1");
    CHECK(parse_poly("z1 - z1").to_string() == "0");
    CHECK(parse_poly("2*z1*z1 - z1*z1 + 0*z2").to_string() == "z1*z1");
}

TEST_CASE("parser rejects malformed input")
{
    for (const char* bad : {"", "z1 +", "+", "z1**z2", "2*", "z1 z2", "y1", "z1 + - z2", "xi", "3*4"})
        CHECK_THROWS_AS(parse_poly(bad), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("z1 + z2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("2*z1"), std::invalid_argument);
}

TEST_CASE("printing round-trips through the parser")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        const WordPoly p = random_poly(rng, 6, 4);
        CHECK(parse_poly(p.to_string()) == p);
    }
}

TEST_CASE("ring axioms on random polynomials")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) {
        const WordPoly a = random_poly(rng, 4, 3), b = random_poly(rng, 4, 3), c = random_poly(rng, 4, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a - a == WordPoly{});
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * WordPoly::unit() == a);
        CHECK(poly_scale(a, 3) == a + a + a);
        CHECK(poly_power(a, 2) == a * a);
        CHECK(poly_concat(a, b) == a * b);
        CHECK(poly_add(a, b) == a + b);
    }
}

TEST_CASE("concatenation of single words")
{
    const WordPoly p = parse_poly("2*z1 + xi1");
    const WordPoly q = parse_poly("z2 - 1");
    CHECK((p * q).to_string() == "xi1*z2 + 2*z1*z2 - xi1 - 2*z1");
    CHECK(parse_poly("3").coefficient(Word{}) == 3);
}

TEST_CASE("subalgebra predicates")
{
    CHECK(in_xi_subalgebra(parse_poly("xi1*xi3 + 1")));
    CHECK_FALSE(in_xi_subalgebra(parse_poly("xi1*z1")));
    CHECK(in_d1_subalgebra(parse_poly("xi1*z1 + z1")));
    CHECK_FALSE(in_d1_subalgebra(parse_poly("xi2")));
    CHECK(in_z_subalgebra(parse_poly("z3*z1")));
    CHECK_FALSE(in_z_subalgebra(parse_poly("z3*xi1")));
}

TEST_CASE("word enumeration")
{
    const std::vector<Letter> alphabet = {Letter::z(1), Letter::xi(1)};
    const auto words = enumerate_words(alphabet, 3);
    CHECK(words.size() == 1 + 2 + 4 + 8);
    CHECK(words.front().empty());
    for (std::size_t i = 1; i < words.size(); ++i)
        CHECK(words[i - 1].length() <= words[i].length());
    std::set<std::string> distinct;
    for (const auto& w : words)
        distinct.insert(w.to_string());
    CHECK(distinct.size() == words.size());
}
