#include "qmzv/word_maps.hpp"

#include <map>
#include <stdexcept>
#include <string>

#include "qmzv/memo.hpp"

namespace qmzv {

namespace {

struct WordPairHash {
    std::size_t operator()(const std::pair<Word, Word>& key) const noexcept
    {
        WordHash h;
        return h(key.first) * 31 + h(key.second);
    }
};

struct IntWordHash {
    std::size_t operator()(const std::pair<int, Word>& key) const noexcept
    {
        return WordHash{}(key.second) * 131 + static_cast<std::size_t>(key.first);
    }
};

detail::ConcurrentMemo<std::pair<Word, Word>, WordPoly, WordPairHash> rho_cache;
detail::ConcurrentMemo<Word, WordPoly, WordHash> d_cache;
detail::ConcurrentMemo<std::pair<int, Word>, WordPoly, IntWordHash> phi_cache;
detail::ConcurrentMemo<std::pair<int, Word>, WordPoly, IntWordHash> Phi_cache;

WordPoly prepend(const Letter& u, const WordPoly& p)
{
    WordPoly out;
    for (const auto& [w, c] : p.terms())
        out.add_term(w.prepend(u), c);
    return out;
}

WordPoly prepend(const Word& prefix, const WordPoly& p)
{
    WordPoly out;
    for (const auto& [w, c] : p.terms())
        out.add_term(prefix.concat(w), c);
    return out;
}

void require_xi(const WordPoly& v, const char* what)
{
    if (!in_xi_subalgebra(v))
        throw std::invalid_argument(std::string(what) + ": argument " + v.to_string() + " is not in d_xi");
}

void require_d1(const WordPoly& w, const char* what)
{
    if (!in_d1_subalgebra(w))
        throw std::invalid_argument(std::string(what) + ": argument " + w.to_string() + " is not in d_1");
}

const WordPoly& rho_word(const Word& v, const Word& w);

WordPoly rho_compute(const Word& v, const Word& w)
{
    if (v.empty())
        return WordPoly(w);
    if (w.empty())
        return WordPoly(v);
    const int k = v.front().index;
    const Letter u = w.front();
    const Word v_rest = v.tail();
    const Word w_rest = w.tail();
    const Letter merged(u.kind, k + u.index);

    WordPoly out = prepend(Letter::xi(k), rho_word(v_rest, w));
    out += prepend(u, rho_word(v, w_rest));
    out += prepend(merged, rho_word(v_rest, w_rest));
    return out;
}

const WordPoly& rho_word(const Word& v, const Word& w)
{
    auto key = std::make_pair(v, w);
    return *rho_cache.get_or_compute(key, [&] { return rho_compute(v, w); });
}

WordPoly circ_word(int k, const Word& v)
{
    if (v.empty())
        return {};
    std::vector<Letter> letters = v.letters();
    letters.front() = Letter::xi(k + letters.front().index);
    return WordPoly(Word(std::move(letters)));
}

const WordPoly& d_word(const Word& v)
{
    return *d_cache.get_or_compute(v, [&] {
        if (v.empty())
            return WordPoly::unit();
        const int k = v.front().index;
        const WordPoly& rest = d_word(v.tail());
        WordPoly out = prepend(Letter::xi(k), rest);
        out += rest.map_words([k](const Word& x) { return circ_word(k, x); });
        return out;
    });
}

const WordPoly& phi_word(int s, const Word& w);

WordPoly phi_compute(int s, const Word& w)
{
    const Letter z1 = Letter::z(1);
    const Letter xi1 = Letter::xi(1);
    if (s == 0)
        return WordPoly(w);
    if (w.empty())
        return WordPoly(power(z1, s - 1).prepend(xi1));
    const Word rest = w.tail();
    WordPoly out;
    if (w.front() == z1) {
        out += prepend(z1, phi_word(s, rest));
        for (int i = 1; i <= s; ++i)
            out += prepend(power(z1, i).prepend(xi1), phi_word(s - i, rest));
    } else {
        for (int i = 0; i <= s; ++i)
            out += prepend(power(z1, i).prepend(xi1), phi_word(s - i, rest));
    }
    return out;
}

const WordPoly& phi_word(int s, const Word& w)
{
    return *phi_cache.get_or_compute({s, w}, [&] { return phi_compute(s, w); });
}

WordPoly phi_poly(int s, const WordPoly& p)
{
    return p.map_words([s](const Word& x) { return phi_word(s, x); });
}

// Definition as a signed sum over compositions; compositions sharing a suffix share
// the partial image phi_{c_j} ... phi_{c_r}(w).
WordPoly Phi_compute(int l, const Word& w)
{
    if (l == 0)
        return WordPoly(w);
    std::map<std::vector<int>, WordPoly> suffix_image;
    auto image = [&](const std::vector<int>& parts) -> const WordPoly& {
        for (std::size_t start = parts.size(); start-- > 0;) {
            std::vector<int> suffix(parts.begin() + static_cast<long>(start), parts.end());
            if (suffix_image.count(suffix))
                continue;
            std::vector<int> inner(suffix.begin() + 1, suffix.end());
            const WordPoly base = inner.empty() ? WordPoly(w) : suffix_image.at(inner);
            suffix_image.emplace(suffix, phi_poly(suffix.front(), base));
        }
        return suffix_image.at(parts);
    };
    WordPoly out;
    for (int r = 1; r <= l; ++r) {
        const Integer sign = (r % 2 == 0) ? 1 : -1;
        for (const auto& c : enumerate_compositions(r, l))
            out += image(c.parts()) * sign;
    }
    return out;
}

const WordPoly& Phi_word(int l, const Word& w)
{
    return *Phi_cache.get_or_compute({l, w}, [&] { return Phi_compute(l, w); });
}

}  // namespace

WordPoly rho(const WordPoly& v, const WordPoly& w)
{
    require_xi(v, "rho");
    WordPoly out;
    for (const auto& [vw, vc] : v.terms())
        for (const auto& [ww, wc] : w.terms())
            out += rho_word(vw, ww) * (vc * wc);
    return out;
}

WordPoly circ(int k, const WordPoly& v)
{
    if (k < 1)
        throw std::invalid_argument("circ: k must be >= 1");
    require_xi(v, "circ");
    return v.map_words([k](const Word& x) { return circ_word(k, x); });
}

WordPoly d_map(const WordPoly& v)
{
    require_xi(v, "d");
    return v.map_words([](const Word& x) { return d_word(x); });
}

WordPoly phi(int s, const WordPoly& w)
{
    if (s < 0)
        throw std::invalid_argument("phi: s must be >= 0");
    require_d1(w, "phi");
    return phi_poly(s, w);
}

WordPoly Phi(int l, const WordPoly& w)
{
    if (l < 0)
        throw std::invalid_argument("Phi: l must be >= 0");
    require_d1(w, "Phi");
    return w.map_words([l](const Word& x) { return Phi_word(l, x); });
}

WordPoly Z_map(int s, const WordPoly& w)
{
    if (s < 0)
        throw std::invalid_argument("Z: s must be >= 0");
    require_d1(w, "Z");
    WordPoly out;
    for (int l = 0; l <= s; ++l)
        out += rho(d_word(power(Letter::xi(1), s - l)), Phi(l, w));
    return out;
}

WordPoly eta(int a, int n)
{
    if (a < 0)
        throw std::invalid_argument("eta: a must be >= 0");
    if (n < 0)
        return {};
    if (a == 0)
        return n == 0 ? WordPoly::unit() : WordPoly{};
    WordPoly out;
    for (const auto& c : enumerate_weak_compositions(a, n)) {
        std::vector<Letter> letters;
        for (int part : c) {
            letters.push_back(Letter::xi(1));
            letters.insert(letters.end(), static_cast<std::size_t>(part), Letter::z(1));
        }
        out.add_term(Word(std::move(letters)), 1);
    }
    return out;
}

std::vector<std::pair<Integer, Composition>> poly_to_index_combination(const WordPoly& p, bool require_admissible)
{
    std::vector<std::pair<Integer, Composition>> out;
    for (const auto& [w, c] : p.terms()) {
        if (w.empty())
            throw std::invalid_argument("the unit word has no index");
        if (!in_z_subalgebra(w))
            throw std::invalid_argument("word " + w.to_string() + " contains a non-z letter");
        if (require_admissible && w.front().index < 2)
            throw std::invalid_argument("word " + w.to_string() + " is not admissible");
        std::vector<int> parts;
        for (const auto& u : w.letters())
            parts.push_back(u.index);
        out.emplace_back(c, Composition(std::move(parts)));
    }
    return out;
}

void clear_word_map_caches()
{
    rho_cache.clear();
    d_cache.clear();
    phi_cache.clear();
    Phi_cache.clear();
}

}  // namespace qmzv
