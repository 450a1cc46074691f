#include "qmzv/word.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace qmzv {

Letter::Letter(LetterKind kind_, int index_) : kind(kind_), index(index_)
{
    if (index < 1)
        throw std::invalid_argument("letter index must be >= 1");
}

std::string Letter::to_string() const
{
    return (is_z() ? "z" : "xi") + std::to_string(index);
}

int Word::weight() const noexcept
{
    int w = 0;
    for (const auto& u : letters_)
        w += u.index;
    return w;
}

Word Word::tail() const { return Word(std::vector<Letter>(letters_.begin() + 1, letters_.end())); }

Word Word::concat(const Word& other) const
{
    std::vector<Letter> out;
    out.reserve(letters_.size() + other.letters_.size());
    out.insert(out.end(), letters_.begin(), letters_.end());
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(out));
}

Word Word::prepend(const Letter& u) const
{
    std::vector<Letter> out;
    out.reserve(letters_.size() + 1);
    out.push_back(u);
    out.insert(out.end(), letters_.begin(), letters_.end());
    return Word(std::move(out));
}

std::string Word::to_string() const
{
    if (letters_.empty())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i)
            s += '*';
        s += letters_[i].to_string();
    }
    return s;
}

bool WordOrder::operator()(const Word& a, const Word& b) const
{
    if (a.length() != b.length())
        return a.length() > b.length();
    return a.letters() < b.letters();
}

std::size_t WordHash::operator()(const Word& w) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (const auto& u : w.letters()) {
        h ^= static_cast<std::size_t>(u.index) * 2 + static_cast<std::size_t>(u.kind);
        h *= 1099511628211ull;
    }
    return h;
}

Word power(const Letter& u, int n) { return Word(std::vector<Letter>(static_cast<std::size_t>(std::max(n, 0)), u)); }

WordPoly WordPoly::constant(const Integer& c)
{
    WordPoly p;
    p.add_term(Word{}, c);
    return p;
}

Integer WordPoly::coefficient(const Word& w) const
{
    auto it = terms_.find(w);
    return it == terms_.end() ? Integer(0) : it->second;
}

void WordPoly::add_term(const Word& w, const Integer& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

WordPoly& WordPoly::operator+=(const WordPoly& other)
{
    for (const auto& [w, c] : other.terms_)
        add_term(w, c);
    return *this;
}

WordPoly& WordPoly::operator-=(const WordPoly& other)
{
    for (const auto& [w, c] : other.terms_)
        add_term(w, -c);
    return *this;
}

WordPoly& WordPoly::operator*=(const Integer& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, coef] : terms_)
        coef *= c;
    return *this;
}

WordPoly operator*(const WordPoly& a, const WordPoly& b)
{
    WordPoly out;
    for (const auto& [u, cu] : a.terms_)
        for (const auto& [v, cv] : b.terms_)
            out.add_term(u.concat(v), cu * cv);
    return out;
}

WordPoly WordPoly::map_words(const std::function<WordPoly(const Word&)>& f) const
{
    WordPoly out;
    for (const auto& [w, c] : terms_) {
        WordPoly image = f(w);
        image *= c;
        out += image;
    }
    return out;
}

std::string WordPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        Integer mag = abs(c);
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        if (w.empty())
            s += mag.get_str();
        else if (mag == 1)
            s += w.to_string();
        else
            s += mag.get_str() + "*" + w.to_string();
        first = false;
    }
    return s;
}

WordPoly poly_add(const WordPoly& p, const WordPoly& q) { return p + q; }
WordPoly poly_scale(const WordPoly& p, const Integer& c) { return p * c; }
WordPoly poly_concat(const WordPoly& p, const WordPoly& q) { return p * q; }

WordPoly poly_power(const WordPoly& p, int n)
{
    WordPoly out = WordPoly::unit();
    for (int i = 0; i < n; ++i)
        out = out * p;
    return out;
}

namespace {

template <typename Pred>
bool all_letters(const Word& w, Pred pred)
{
    return std::all_of(w.letters().begin(), w.letters().end(), pred);
}

template <typename Pred>
bool all_letters(const WordPoly& p, Pred pred)
{
    for (const auto& [w, c] : p.terms())
        if (!all_letters(w, pred))
            return false;
    return true;
}

const auto is_xi = [](const Letter& u) { return u.is_xi(); };
const auto is_z = [](const Letter& u) { return u.is_z(); };
const auto is_d1 = [](const Letter& u) { return u.index == 1; };

}  // namespace

bool in_xi_subalgebra(const WordPoly& p) { return all_letters(p, is_xi); }
bool in_d1_subalgebra(const WordPoly& p) { return all_letters(p, is_d1); }
bool in_z_subalgebra(const WordPoly& p) { return all_letters(p, is_z); }
bool in_xi_subalgebra(const Word& w) { return all_letters(w, is_xi); }
bool in_d1_subalgebra(const Word& w) { return all_letters(w, is_d1); }
bool in_z_subalgebra(const Word& w) { return all_letters(w, is_z); }

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    WordPoly parse_poly()
    {
        WordPoly out;
        skip_space();
        if (at_end())
            fail("empty polynomial");
        bool first = true;
        while (!at_end()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_space();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            auto [coef, word] = parse_term();
            out.add_term(word, coef * sign);
            first = false;
            skip_space();
        }
        return out;
    }

    Word parse_word_only()
    {
        skip_space();
        Word w = parse_factors();
        skip_space();
        if (!at_end())
            fail("trailing input");
        return w;
    }

private:
    std::pair<Integer, Word> parse_term()
    {
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            Integer c = parse_integer();
            skip_space();
            if (!at_end() && peek() == '*') {
                ++pos_;
                skip_space();
                return {c, parse_factors()};
            }
            return {c, Word{}};
        }
        return {Integer(1), parse_factors()};
    }

    // letter ('*' letter)*; a lone "1" stands for the unit word.
    Word parse_factors()
    {
        std::vector<Letter> letters;
        if (!at_end() && peek() == '1') {
            ++pos_;
            return Word{};
        }
        letters.push_back(parse_one_letter());
        skip_space();
        while (!at_end() && peek() == '*') {
            ++pos_;
            skip_space();
            letters.push_back(parse_one_letter());
            skip_space();
        }
        return Word(std::move(letters));
    }

    Letter parse_one_letter()
    {
        LetterKind kind;
        if (text_.substr(pos_, 2) == "xi") {
            kind = LetterKind::Xi;
            pos_ += 2;
        } else if (!at_end() && peek() == 'z') {
            kind = LetterKind::Z;
            pos_ += 1;
        } else {
            fail("expected a letter z<k> or xi<k>");
        }
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail("letter is missing its index");
        Integer k = parse_integer();
        if (k < 1 || k > 1000000)
            fail("letter index out of range");
        return Letter(kind, static_cast<int>(k.get_si()));
    }

    Integer parse_integer()
    {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("cannot parse '" + std::string(text_) + "' at offset " +
                                    std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

WordPoly parse_poly(std::string_view text) { return PolyParser(text).parse_poly(); }

Word parse_word(std::string_view text) { return PolyParser(text).parse_word_only(); }

Letter parse_letter(std::string_view text)
{
    Word w = parse_word(text);
    if (w.length() != 1)
        throw std::invalid_argument("expected a single letter, got '" + std::string(text) + "'");
    return w.front();
}

std::vector<Word> enumerate_words(const std::vector<Letter>& alphabet, int max_length)
{
    std::vector<Word> out{Word{}};
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= max_length; ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (const auto& u : alphabet)
                next.push_back(w.concat(Word{u}));
        std::sort(next.begin(), next.end(), [](const Word& a, const Word& b) { return a.letters() < b.letters(); });
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

}  // namespace qmzv
