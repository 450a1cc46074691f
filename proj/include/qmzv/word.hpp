#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qmzv/rational.hpp"

namespace qmzv {

enum class LetterKind : unsigned char { Xi = 0, Z = 1 };

// z_k or xi_k with k >= 1.
struct Letter {
    LetterKind kind = LetterKind::Z;
    int index = 1;

    Letter() = default;
    Letter(LetterKind kind, int index);

    static Letter z(int k) { return {LetterKind::Z, k}; }
    static Letter xi(int k) { return {LetterKind::Xi, k}; }

    bool is_z() const noexcept { return kind == LetterKind::Z; }
    bool is_xi() const noexcept { return kind == LetterKind::Xi; }

    std::string to_string() const;  // "z3", "xi1"

    // xi before z, then by index.
    auto operator<=>(const Letter&) const = default;
};

// Finite letter sequence; the empty word is the unit 1.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t length() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    const Letter& front() const { return letters_.front(); }
    const Letter& operator[](std::size_t i) const { return letters_[i]; }

    // Sum of letter indices.
    int weight() const noexcept;

    Word tail() const;  // drops the first letter
    Word concat(const Word& other) const;
    Word prepend(const Letter& u) const;

    std::string to_string() const;  // "z1*xi2", "1" for the empty word

    bool operator==(const Word&) const = default;

private:
    std::vector<Letter> letters_;
};

// Display order: longer words first, then lexicographic on letters.
struct WordOrder {
    bool operator()(const Word& a, const Word& b) const;
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

Word power(const Letter& u, int n);

// Element of the free algebra over the integers: canonical map Word -> nonzero coefficient.
class WordPoly {
public:
    using Terms = std::map<Word, Integer, WordOrder>;

    WordPoly() = default;
    WordPoly(const Word& w) { add_term(w, 1); }  // NOLINT(implicit)
    WordPoly(const Letter& u) { add_term(Word{u}, 1); }  // NOLINT(implicit)

    static WordPoly unit() { return WordPoly(Word{}); }
    static WordPoly constant(const Integer& c);

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    Integer coefficient(const Word& w) const;

    void add_term(const Word& w, const Integer& c);

    WordPoly& operator+=(const WordPoly& other);
    WordPoly& operator-=(const WordPoly& other);
    WordPoly& operator*=(const Integer& c);

    friend WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }
    friend WordPoly operator-(WordPoly a, const WordPoly& b) { return a -= b; }
    friend WordPoly operator-(WordPoly a) { return a *= Integer(-1); }
    friend WordPoly operator*(WordPoly a, const Integer& c) { return a *= c; }
    friend WordPoly operator*(const Integer& c, WordPoly a) { return a *= c; }

    // Concatenation product, bilinear.
    friend WordPoly operator*(const WordPoly& a, const WordPoly& b);

    // Applies a linear map given on words.
    WordPoly map_words(const std::function<WordPoly(const Word&)>& f) const;

    std::string to_string() const;

    bool operator==(const WordPoly& other) const { return terms_ == other.terms_; }

private:
    Terms terms_;
};

WordPoly poly_add(const WordPoly& p, const WordPoly& q);
WordPoly poly_scale(const WordPoly& p, const Integer& c);
WordPoly poly_concat(const WordPoly& p, const WordPoly& q);
WordPoly poly_power(const WordPoly& p, int n);

// Every letter is some xi_k.
bool in_xi_subalgebra(const WordPoly& p);
// Every letter is z_1 or xi_1.
bool in_d1_subalgebra(const WordPoly& p);
// Every letter is some z_k.
bool in_z_subalgebra(const WordPoly& p);

bool in_xi_subalgebra(const Word& w);
bool in_d1_subalgebra(const Word& w);
bool in_z_subalgebra(const Word& w);

// Text syntax: letters z<k>, xi<k> joined by '*', signed integer sums, "1" for the unit.
// Throws std::invalid_argument on malformed input.
WordPoly parse_poly(std::string_view text);
Word parse_word(std::string_view text);
Letter parse_letter(std::string_view text);

// All words of length <= max_length over the given letters, shortest first, then lexicographic.
std::vector<Word> enumerate_words(const std::vector<Letter>& alphabet, int max_length);

}  // namespace qmzv
