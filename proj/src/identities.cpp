#include "identities.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "qmzv/indices.hpp"
#include "qmzv/word_maps.hpp"

namespace qmzv::detail {

// ---------------------------------------------------------------------------
// Parameters

const std::string& ParamReader::raw(const std::string& key) const
{
    auto it = params_.find(key);
    if (it == params_.end())
        throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
}

long ParamReader::integer(const std::string& key) const
{
    const std::string& text = raw(key);
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::invalid_argument("parameter '" + key + "' must be an integer, got '" + text + "'");
    return v;
}

long ParamReader::integer_or(const std::string& key, long fallback) const
{
    return has(key) ? integer(key) : fallback;
}

long ParamReader::at_least(const std::string& key, long minimum) const
{
    const long v = integer(key);
    if (v < minimum)
        throw std::invalid_argument("parameter '" + key + "' must be >= " + std::to_string(minimum));
    return v;
}

WordPoly ParamReader::poly(const std::string& key) const { return parse_poly(raw(key)); }

Letter ParamReader::letter(const std::string& key) const { return parse_letter(raw(key)); }

Word ParamReader::word(const std::string& key) const { return parse_word(raw(key)); }

const std::vector<std::string>& identity_keys(IdentityId id)
{
    static const std::map<IdentityId, std::vector<std::string>> keys = {
        {IdentityId::S1, {"k"}},
        {IdentityId::S2, {"k"}},
        {IdentityId::S3, {"s"}},
        {IdentityId::S4, {"l"}},
        {IdentityId::S5, {"l", "w"}},
        {IdentityId::S6, {"k", "w"}},
        {IdentityId::S7, {"s", "w"}},
        {IdentityId::S8, {"s", "a"}},
        {IdentityId::S9, {"s", "a", "w"}},
        {IdentityId::E1, {"v", "w", "M"}},
        {IdentityId::E2, {"v", "M"}},
        {IdentityId::E3, {"u", "w", "M", "star"}},
        {IdentityId::E4, {"s", "v", "N", "M"}},
        {IdentityId::E5, {"s", "sp", "w", "N"}},
        {IdentityId::E6, {"j", "n", "M"}},
        {IdentityId::E7, {"k", "m1", "m2"}},
        {IdentityId::E8, {"m", "n", "L"}},
        {IdentityId::T1, {"a", "b", "n"}},
        {IdentityId::T2, {"b", "n"}},
        {IdentityId::T3, {"b", "n", "M"}},
        {IdentityId::T4, {"b", "m", "M"}},
        {IdentityId::T5, {"a", "b", "n"}},
        {IdentityId::T6, {"s", "l", "beta", "w"}},
    };
    return keys.at(id);
}

namespace {

const Letter z1 = Letter::z(1);
const Letter xi1 = Letter::xi(1);

WordPoly xi1_power(int k) { return WordPoly(power(xi1, k)); }

// (-xi_1)^k
WordPoly neg_xi1_power(int k) { return xi1_power(k) * Integer(k % 2 == 0 ? 1 : -1); }

WordPoly d1_argument(const ParamReader& p, const std::string& key)
{
    WordPoly w = p.poly(key);
    if (!in_d1_subalgebra(w))
        throw std::invalid_argument("parameter '" + key + "' must lie in d_1 (letters z1, xi1)");
    return w;
}

// ---------------------------------------------------------------------------
// Symbolic identities

SymbolicSides d_expansion(int k)
{
    WordPoly rhs;
    for (int r = 1; r <= k; ++r)
        for (const auto& c : enumerate_compositions(r, k)) {
            std::vector<Letter> letters;
            for (int part : c.parts())
                letters.push_back(Letter::xi(part));
            rhs.add_term(Word(std::move(letters)), 1);
        }
    return {d_map(xi1_power(k)), rhs};
}

SymbolicSides d_recursion(int k)
{
    WordPoly rhs;
    for (int a = 1; a <= k; ++a)
        rhs += WordPoly(Letter::xi(a)) * d_map(xi1_power(k - a));
    return {d_map(xi1_power(k)), rhs};
}

SymbolicSides phi_recursion(int l, const WordPoly& w)
{
    WordPoly rhs;
    for (int j = 0; j <= l; ++j)
        rhs += neg_xi1_power(l - j) * WordPoly(z1) * Phi(j, w);
    return {Phi(l, WordPoly(z1) * w), rhs};
}

SymbolicSides rho_to_z(int k, const WordPoly& w)
{
    WordPoly lhs, rhs;
    for (int l = 0; l <= k; ++l) {
        const WordPoly left = d_map(xi1_power(k - l));
        lhs += rho(left, xi1_power(l) * WordPoly(z1) * w) * Integer(l % 2 == 0 ? 1 : -1);
        rhs += WordPoly(Letter::z(l + 1)) * rho(left, w);
    }
    return {lhs, rhs};
}

SymbolicSides z_shift(int s, const WordPoly& w)
{
    WordPoly rhs;
    for (int l = 0; l <= s; ++l)
        rhs += WordPoly(Letter::z(l + 1)) * Z_map(s - l, w);
    return {Z_map(s, WordPoly(z1) * w), rhs};
}

SymbolicSides z_closed_form(int s, int a)
{
    WordPoly rhs;
    for (const auto& g : enumerate_compositions(a, s + a)) {
        std::vector<Letter> letters;
        for (int part : g.parts())
            letters.push_back(Letter::z(part));
        rhs.add_term(Word(std::move(letters)), 1);
    }
    return {Z_map(s, WordPoly(power(z1, a))), rhs};
}

SymbolicSides eta_phi(int s, int a, const WordPoly& w)
{
    WordPoly rhs;
    for (int t = 0; t <= s; ++t)
        rhs += (eta(a, s - t) + eta(a + 1, s - t - 1)) * WordPoly(z1) * phi(t, w);
    return {phi(s, xi1_power(a) * WordPoly(z1) * w), rhs};
}

}  // namespace

SymbolicSides symbolic_sides(IdentityId id, const ParamReader& p)
{
    switch (id) {
    case IdentityId::S1:
        return d_expansion(static_cast<int>(p.at_least("k", 1)));
    case IdentityId::S2:
        return d_recursion(static_cast<int>(p.at_least("k", 1)));
    case IdentityId::S3: {
        const int s = static_cast<int>(p.at_least("s", 0));
        return {Z_map(s, WordPoly::unit()), s == 0 ? WordPoly::unit() : WordPoly{}};
    }
    case IdentityId::S4: {
        const int l = static_cast<int>(p.at_least("l", 0));
        return {Phi(l, WordPoly::unit()), neg_xi1_power(l)};
    }
    case IdentityId::S5:
        return phi_recursion(static_cast<int>(p.at_least("l", 0)), d1_argument(p, "w"));
    case IdentityId::S6:
        return rho_to_z(static_cast<int>(p.at_least("k", 0)), d1_argument(p, "w"));
    case IdentityId::S7:
        return z_shift(static_cast<int>(p.at_least("s", 0)), d1_argument(p, "w"));
    case IdentityId::S8:
        return z_closed_form(static_cast<int>(p.at_least("s", 0)), static_cast<int>(p.at_least("a", 1)));
    case IdentityId::S9:
        return eta_phi(static_cast<int>(p.at_least("s", 0)), static_cast<int>(p.at_least("a", 0)),
                       d1_argument(p, "w"));
    default:
        throw std::invalid_argument(std::string(to_string(id)) + " is not a symbolic identity");
    }
}

// ---------------------------------------------------------------------------
// Exact identities

namespace {

// Calls f on every chain hi > c_1 > ... > c_len > lo.
void for_each_chain(int len, long lo, long hi, std::vector<long>& chain,
                    const std::function<void(const std::vector<long>&)>& f)
{
    if (static_cast<int>(chain.size()) == len) {
        f(chain);
        return;
    }
    const long upper = chain.empty() ? hi - 1 : chain.back() - 1;
    const long remaining = len - static_cast<long>(chain.size());
    for (long c = upper; c - remaining >= lo; --c) {
        chain.push_back(c);
        for_each_chain(len, lo, hi, chain, f);
        chain.pop_back();
    }
}

ExactSides stuffle(const ParamReader& p, const QContext& ctx)
{
    const WordPoly v = p.poly("v");
    const WordPoly w = p.poly("w");
    const long M = p.at_least("M", 1);
    if (!in_xi_subalgebra(v))
        throw std::invalid_argument("parameter 'v' must lie in d_xi");
    return {A_eval(ctx, v, M, false) * A_eval(ctx, w, M, false), A_eval(ctx, rho(v, w), M, false)};
}

ExactSides star_to_A(const ParamReader& p, const QContext& ctx)
{
    const WordPoly v = p.poly("v");
    const long M = p.at_least("M", 1);
    if (!in_xi_subalgebra(v))
        throw std::invalid_argument("parameter 'v' must lie in d_xi");
    return {A_eval(ctx, v, M, true), A_eval(ctx, d_map(v), M, false)};
}

ExactSides A_recursion(const ParamReader& p, const QContext& ctx)
{
    const Letter u = p.letter("u");
    const Word w = p.has("w") ? p.word("w") : Word{};
    const long M = p.at_least("M", 1);
    const long star = p.integer_or("star", 0);
    if (star != 0 && star != 1)
        throw std::invalid_argument("parameter 'star' must be 0 or 1");
    // Left side by literal nested loops, right side through the one-letter recursion.
    Rational lhs = A_eval_direct(ctx, w.prepend(u), M, star == 1);
    const auto inner = A_table(ctx, WordPoly(w), M, star == 1);
    Rational rhs = 0;
    for (long m = 1; m < M; ++m)
        rhs += J_letter(ctx, u, m) * inner[static_cast<std::size_t>(star == 1 ? m + 1 : m)];
    return {lhs, rhs};
}

ExactSides f_through(const ParamReader& p, const QContext& ctx)
{
    const long s = p.at_least("s", 1);
    const Letter v = p.letter("v");
    const long N = p.at_least("N", 1);
    const long M = p.at_least("M", 1);
    if (v != z1 && v != xi1)
        throw std::invalid_argument("parameter 'v' must be z1 or xi1");
    if (N <= M)
        throw std::invalid_argument("f-through needs N > M");
    const int len = static_cast<int>(s) + 1;

    Rational lhs = 0;
    std::vector<long> chain;
    for_each_chain(len, M, N, chain, [&](const std::vector<long>& n) {
        const std::span<const long> head(n.data(), static_cast<std::size_t>(s));
        lhs += p_eval(ctx, head, n.back()) * J_letter(ctx, v, n.back());
    });

    Rational rhs = 0;
    chain.clear();
    for_each_chain(len, M, N, chain, [&](const std::vector<long>& k) {
        const std::span<const long> all(k);
        rhs += J_letter(ctx, v, k[0]) * p_eval(ctx, all.subspan(1), M);
        for (long i = 1; i <= s; ++i) {
            Rational term = J_letter(ctx, xi1, k[0]);
            for (long j = 1; j <= i; ++j)
                term /= q_int(ctx, k[static_cast<std::size_t>(j)]);
            term *= p_eval(ctx, all.subspan(static_cast<std::size_t>(i) + 1), M);
            rhs += term;
        }
    });
    return {lhs, rhs};
}

ExactSides contraction_f(const ParamReader& p, const QContext& ctx)
{
    const int s = static_cast<int>(p.at_least("s", 1));
    const int sp = static_cast<int>(p.at_least("sp", 1));
    const WordPoly w = d1_argument(p, "w");
    const long N = p.at_least("N", 1);
    const auto f_outer = f_table(ctx, sp, N);
    const auto f_inner = f_table(ctx, s, N);
    const auto A_w = A_table(ctx, w, N, false);
    const auto A_phi = A_table(ctx, phi(s, w), N, false);

    Rational lhs = 0, rhs = 0;
    for (long M1 = 1; M1 < N; ++M1) {
        const Rational& outer = f_outer[static_cast<std::size_t>(N - M1)];
        if (sgn(outer) == 0)
            continue;
        Rational inner = 0;
        for (long M2 = 1; M2 < M1; ++M2)
            inner += f_inner[static_cast<std::size_t>(M1 - M2)] * A_w[static_cast<std::size_t>(M2)];
        lhs += outer * inner;
        rhs += outer * A_phi[static_cast<std::size_t>(M1)];
    }
    return {lhs, rhs};
}

ExactSides g_expansion(const ParamReader& p, const QContext& ctx)
{
    const int j = static_cast<int>(p.at_least("j", 1));
    const int n = static_cast<int>(p.at_least("n", 1));
    const long M = p.at_least("M", 1);
    Rational rhs = 0;
    for (int t = 0; t <= j - 1; ++t)
        rhs += J_letter(ctx, Letter::z(n + j - t - 1), M) * A_eval(ctx, xi1_power(t), M, true);
    return {g_eval(ctx, j, n, M), rhs};
}

ExactSides partial_fraction(const ParamReader& p, const QContext& ctx)
{
    const int k = static_cast<int>(p.at_least("k", 2));
    const long m1 = p.at_least("m1", 1);
    const long m2 = p.at_least("m2", 1);
    if (m1 <= m2)
        throw std::invalid_argument("partial fraction needs m1 > m2");
    Rational lhs = 0;
    for (const auto& beta : enumerate_compositions(2, k))
        lhs += J_letter(ctx, Letter::z(beta[0]), m1) * J_letter(ctx, Letter::z(beta[1]), m2);

    const Rational x1 = J_letter(ctx, xi1, m1);
    const Rational x2 = J_letter(ctx, xi1, m2);
    const Rational middle = (power(x1, static_cast<unsigned long>(k - 1)) - power(x2, static_cast<unsigned long>(k - 1))) /
                            (x1 - x2) / (q_int(ctx, m1) * q_int(ctx, m2));
    const Rational rhs = J_letter(ctx, Letter::z(k - 1), m2) / q_int(ctx, m1 - m2) -
                         J_letter(ctx, Letter::z(k - 1), m1) * J_letter(ctx, xi1, m1 - m2);
    ExactSides out{lhs, rhs};
    out.auxiliary_holds = middle == lhs;
    if (!out.auxiliary_holds)
        out.note = "geometric-quotient form differs from the sum";
    return out;
}

ExactSides telescoping(const ParamReader& p, const QContext& ctx)
{
    const long m = p.at_least("m", 1);
    const long n = p.at_least("n", 1);
    if (m <= n)
        throw std::invalid_argument("telescoping needs m > n");
    const long L = p.has("L") ? p.at_least("L", 1) : m + 5;
    auto a = [&](long j) { return J_letter(ctx, xi1, j); };
    const Rational c = a(m - n);

    ExactSides out;
    bool pointwise = true;
    Rational partial = 0;
    for (long l = 1; l <= L; ++l) {
        const Rational term = a(l + m) / q_int(ctx, l + n);
        pointwise = pointwise && term == (a(l + n) - a(l + m)) * c;
        partial += term;
    }
    // sum_{l<=L} = c (sum_{j=n+1..m} a_j - sum_{j=n+L+1..m+L} a_j) for every L >= 0.
    Rational remainder = 0;
    for (long j = n + L + 1; j <= m + L; ++j)
        remainder += a(j);
    out.lhs = partial + c * remainder;
    Rational head = 0;
    for (long j = n + 1; j <= m; ++j)
        head += a(j);
    out.rhs = c * head;
    out.auxiliary_holds = pointwise;
    if (!pointwise)
        out.note = "pointwise telescoping step fails";
    return out;
}

}  // namespace

ExactSides exact_sides(IdentityId id, const ParamReader& p, const QContext& ctx)
{
    switch (id) {
    case IdentityId::E1:
        return stuffle(p, ctx);
    case IdentityId::E2:
        return star_to_A(p, ctx);
    case IdentityId::E3:
        return A_recursion(p, ctx);
    case IdentityId::E4:
        return f_through(p, ctx);
    case IdentityId::E5:
        return contraction_f(p, ctx);
    case IdentityId::E6:
        return g_expansion(p, ctx);
    case IdentityId::E7:
        return partial_fraction(p, ctx);
    case IdentityId::E8:
        return telescoping(p, ctx);
    default:
        throw std::invalid_argument(std::string(to_string(id)) + " is not an exact identity");
    }
}

// ---------------------------------------------------------------------------
// Truncated identities

namespace {

bool nonnegative(const std::vector<Integer>& values)
{
    return std::all_of(values.begin(), values.end(), [](const Integer& v) { return sgn(v) >= 0; });
}

std::size_t max_bits(const std::vector<Integer>& values)
{
    std::size_t out = 0;
    for (const auto& v : values)
        out = std::max(out, mpz_sizeinbase(v.get_mpz_t(), 2));
    return out;
}

// Kronecker substitution: values[i] (nonnegative, entry 0 dropped) placed at limb offset i * slot.
Integer pack(const std::vector<Integer>& values, std::size_t slot)
{
    std::vector<mp_limb_t> buffer(values.size() * slot, 0);
    for (std::size_t i = 1; i < values.size(); ++i)
        mpz_export(&buffer[i * slot], nullptr, -1, sizeof(mp_limb_t), 0, 0, values[i].get_mpz_t());
    Integer out;
    mpz_import(out.get_mpz_t(), buffer.size(), -1, sizeof(mp_limb_t), 0, 0, buffer.data());
    return out;
}

// out[n] = sum_{k=1..n-1} kernel[n-k] * values[k] for n = 0..size-1.
ScaledTable convolve(const ScaledTable& kernel, const ScaledTable& values)
{
    const std::size_t size = values.numerators.size();
    ScaledTable out;
    out.denominator = kernel.denominator * values.denominator;
    out.numerators.assign(size, Integer(0));
    if (size < 3)
        return out;
    if (!nonnegative(kernel.numerators) || !nonnegative(values.numerators)) {
        for (std::size_t n = 2; n < size; ++n)
            for (std::size_t k = 1; k < n; ++k)
                mpz_addmul(out.numerators[n].get_mpz_t(), kernel.numerators[n - k].get_mpz_t(),
                           values.numerators[k].get_mpz_t());
        return out;
    }
    // Every coefficient of the product is a sum of fewer than `size` products, so it fits a slot.
    const std::size_t bits = max_bits(kernel.numerators) + max_bits(values.numerators) +
                             mpz_sizeinbase(Integer(size).get_mpz_t(), 2) + 1;
    const std::size_t slot = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
    std::vector<Integer> head(kernel.numerators.begin(),
                              kernel.numerators.begin() + static_cast<std::ptrdiff_t>(std::min(size, kernel.numerators.size())));
    const Integer product = pack(head, slot) * pack(values.numerators, slot);
    std::vector<mp_limb_t> limbs(mpz_size(product.get_mpz_t()) + 1, 0);
    mpz_export(limbs.data(), nullptr, -1, sizeof(mp_limb_t), 0, 0, product.get_mpz_t());
    for (std::size_t n = 2; n < size; ++n) {
        const std::size_t begin = n * slot;
        if (begin >= limbs.size())
            break;
        const std::size_t count = std::min(slot, limbs.size() - begin);
        mpz_import(out.numerators[n].get_mpz_t(), count, -1, sizeof(mp_limb_t), 0, 0, &limbs[begin]);
    }
    return out;
}

// sum_{i=lo..hi} x[i] * y[i]
Rational dot(const ScaledTable& x, const ScaledTable& y, long lo, long hi)
{
    Integer acc = 0;
    for (long i = lo; i <= hi; ++i) {
        const auto k = static_cast<std::size_t>(i);
        mpz_addmul(acc.get_mpz_t(), x.numerators[k].get_mpz_t(), y.numerators[k].get_mpz_t());
    }
    Rational out(acc, x.denominator * y.denominator);
    out.canonicalize();
    return out;
}

// sum over chains m_1 > ... > m_r > 0 with m_1 <= M_max of the weights of a nonnegative
// combination of words whose first letter weight is at most q^{m_1}.
Rational leading_sum(const QContext& ctx, const WordPoly& p, long M_max)
{
    return A_eval(ctx, p, M_max + 1, false);
}

Rational leading_tail(const QContext& ctx, const WordPoly& p, long M_max)
{
    Rational out = 0;
    for (const auto& [w, c] : p.terms())
        out += tail_closed_form(ctx, static_cast<int>(w.length()), M_max) * c;
    return out;
}

void require_nonnegative(const WordPoly& p, const char* what)
{
    for (const auto& [w, c] : p.terms())
        if (c < 0)
            throw std::invalid_argument(std::string(what) + ": coefficients must be nonnegative");
}

WordPoly z_word(const std::vector<int>& parts)
{
    std::vector<Letter> letters;
    for (int k : parts)
        letters.push_back(Letter::z(k));
    return WordPoly(Word(std::move(letters)));
}

// sum_{alpha in I_0(b,n)} z_alpha z_1^a
WordPoly restricted_lhs_words(int a, int b, int n)
{
    WordPoly out;
    for (const auto& alpha : enumerate_admissible(b, n))
        out += z_word(alpha.parts()) * WordPoly(power(z1, a));
    return out;
}

// sum_{beta in I_0(a+1, a+b+1)} z_{beta_1+n-b-1} z_{beta_2} ... z_{beta_{a+1}}
WordPoly restricted_rhs_words(int a, int b, int n)
{
    WordPoly out;
    for (const auto& beta : enumerate_admissible(a + 1, a + b + 1)) {
        std::vector<int> parts = beta.parts();
        parts[0] += n - b - 1;
        out += z_word(parts);
    }
    return out;
}

void require_restricted_params(int a, int b, int n)
{
    if (a < 0 || b < 1 || n < b + 1)
        throw std::invalid_argument("restricted sum needs a >= 0, b >= 1, n >= b + 1");
}

TruncatedPlan zeta_combination_plan(const QContext& ctx, WordPoly lhs, WordPoly rhs)
{
    long minimum = 1;
    for (const auto* side : {&lhs, &rhs})
        for (const auto& [w, c] : side->terms())
            minimum = std::max(minimum, static_cast<long>(w.length()));
    TruncatedPlan plan;
    plan.minimum_terms = minimum;
    plan.tails = [&ctx, lhs, rhs](long M_max) {
        return std::make_pair(leading_tail(ctx, lhs, M_max), leading_tail(ctx, rhs, M_max));
    };
    plan.evaluate = [&ctx, lhs, rhs](long M_max) {
        TruncatedSides out;
        out.lhs = {leading_sum(ctx, lhs, M_max), leading_tail(ctx, lhs, M_max), M_max};
        out.rhs = {leading_sum(ctx, rhs, M_max), leading_tail(ctx, rhs, M_max), M_max};
        return out;
    };
    return plan;
}

TruncatedPlan restricted_sum(const ParamReader& p, const QContext& ctx, bool sum_formula)
{
    const int a = sum_formula ? 0 : static_cast<int>(p.at_least("a", 0));
    const int b = static_cast<int>(p.at_least("b", 1));
    const int n = static_cast<int>(p.integer("n"));
    require_restricted_params(a, b, n);
    WordPoly rhs = sum_formula ? WordPoly(Letter::z(n)) : restricted_rhs_words(a, b, n);
    return zeta_combination_plan(ctx, restricted_lhs_words(a, b, n), rhs);
}

TruncatedPlan restricted_sum_through_z(const ParamReader& p, const QContext& ctx)
{
    const int a = static_cast<int>(p.at_least("a", 0));
    const int b = static_cast<int>(p.at_least("b", 1));
    const int n = static_cast<int>(p.integer("n"));
    require_restricted_params(a, b, n);
    WordPoly lhs = restricted_lhs_words(a, b, n);
    WordPoly rhs_signed;
    for (int s = 0; s <= b - 1; ++s)
        rhs_signed += WordPoly(Letter::z(n - s)) * Z_map(s, WordPoly(power(z1, a)));
    std::string note;
    if (!in_z_subalgebra(rhs_signed))
        note = "Z_s(z_1^a) left the z-subalgebra";
    // Negative coefficients move across so both sides stay nonnegative series.
    WordPoly rhs;
    for (const auto& [w, c] : rhs_signed.terms()) {
        if (c > 0)
            rhs.add_term(w, c);
        else
            lhs.add_term(w, -c);
    }
    TruncatedPlan plan = zeta_combination_plan(ctx, lhs, rhs);
    plan.note = note;
    return plan;
}

Rational g_bound(const QContext& ctx, int l)
{
    // sum over any m_2..m_l >= 1 of prod q^{m_j}/[m_j] <= (q/(1-q))^{l-1}
    return power(ctx.q() / (1 - ctx.q()), static_cast<unsigned long>(l - 1));
}

TruncatedPlan kernel_decomposition(const ParamReader& p, const QContext& ctx)
{
    const int b = static_cast<int>(p.at_least("b", 1));
    const int n = static_cast<int>(p.integer("n"));
    const long M = p.at_least("M", 1);
    if (n < b + 1)
        throw std::invalid_argument("kernel decomposition needs n >= b + 1");
    TruncatedPlan plan;
    plan.minimum_terms = M + b + 1;
    auto lhs_tail = [&ctx, b, n, M](long M_max) {
        Rational t = K_tail(ctx, b, n, M, M_max);
        for (int s = 1; s <= b - 1; ++s)
            t += chain_tail(ctx, b - 1, M, M_max) * binomial(n - s - 2, b - s - 1);
        return t;
    };
    plan.tails = [lhs_tail](long M_max) { return std::make_pair(lhs_tail(M_max), Rational(0)); };
    plan.evaluate = [&ctx, b, n, M, lhs_tail](long M_max) {
        Rational lhs = K_table(ctx, b, n, M_max)[static_cast<std::size_t>(M)];
        for (int s = 1; s <= b - 1; ++s) {
            const auto K = K_table(ctx, b - s, n - s, M_max);
            const auto f = f_table(ctx, s, M_max);
            for (long N = M + 1; N <= M_max; ++N)
                lhs += K[static_cast<std::size_t>(N)] * f[static_cast<std::size_t>(N - M)];
        }
        TruncatedSides out;
        out.lhs = {lhs, lhs_tail(M_max), M_max};
        out.rhs = {g_eval(ctx, b, n - b + 1, M), Rational(0), M_max};
        return out;
    };
    return plan;
}

// sum over N_1 > ... > N_r > M, N_1 <= M_max, of g(N_1) h_{r,l}(N_1, ..., N_r, M).
Rational g_h_sum(const QContext& ctx, const ScaledTable& g, int r, int l, long M, long M_max)
{
    const auto size = static_cast<std::size_t>(M_max) + 1;
    Rational total = 0;
    for (const auto& c : enumerate_compositions(r, l)) {
        // chain[N] = sum over N > N_{j+1} > ... > N_r > M of prod_{i>=j} f_{c_i}(N_i, N_{i+1}) with N_j = N.
        const auto last = f_table_scaled(ctx, c[static_cast<std::size_t>(r) - 1], M_max);
        ScaledTable chain;
        chain.denominator = last.denominator;
        chain.numerators.assign(size, Integer(0));
        for (long N = M + 1; N <= M_max; ++N)
            chain.numerators[static_cast<std::size_t>(N)] = last.numerators[static_cast<std::size_t>(N - M)];
        for (int j = r - 2; j >= 0; --j)
            chain = convolve(f_table_scaled(ctx, c[static_cast<std::size_t>(j)], M_max), chain);
        total += dot(g, chain, M + 1, M_max);
    }
    return total;
}

TruncatedPlan kernel_expansion(const ParamReader& p, const QContext& ctx)
{
    const int b = static_cast<int>(p.at_least("b", 1));
    const int m = static_cast<int>(p.integer("m"));
    const long M = p.at_least("M", 1);
    if (m < b + 1)
        throw std::invalid_argument("kernel expansion needs m >= b + 1");
    const int beta = m - b + 1;
    TruncatedPlan plan;
    plan.minimum_terms = M + b + 1;
    // Terms with sign (-1)^r: odd r join K on the left, even r join g on the right.
    auto tails = [&ctx, b, m, M](long M_max) {
        Rational lhs = K_tail(ctx, b, m, M, M_max), rhs = 0;
        for (int l = 1; l <= b - 1; ++l)
            for (int r = 1; r <= l; ++r) {
                const Rational t = g_bound(ctx, b - l) * binomial(l - 1, r - 1) * chain_tail(ctx, l, M, M_max);
                (r % 2 == 1 ? lhs : rhs) += t;
            }
        return std::make_pair(lhs, rhs);
    };
    plan.tails = tails;
    plan.evaluate = [&ctx, b, m, M, beta, tails](long M_max) {
        Rational lhs = K_table(ctx, b, m, M_max)[static_cast<std::size_t>(M)];
        Rational rhs = g_eval(ctx, b, beta, M);
        for (int l = 1; l <= b - 1; ++l) {
            const auto g = scale(g_table(ctx, b - l, beta, M_max));
            for (int r = 1; r <= l; ++r)
                (r % 2 == 1 ? lhs : rhs) += g_h_sum(ctx, g, r, l, M, M_max);
        }
        const auto [lt, rt] = tails(M_max);
        TruncatedSides out;
        out.lhs = {lhs, lt, M_max};
        out.rhs = {rhs, rt, M_max};
        return out;
    };
    return plan;
}

TruncatedPlan contraction_g(const ParamReader& p, const QContext& ctx)
{
    const int s = static_cast<int>(p.at_least("s", 1));
    const int l = static_cast<int>(p.at_least("l", 1));
    const int beta = static_cast<int>(p.at_least("beta", 2));
    const WordPoly w = d1_argument(p, "w");
    require_nonnegative(w, "T6");
    const WordPoly image = phi(s, w);
    TruncatedPlan plan;
    plan.minimum_terms = 2;
    // g_{l,beta}(M) <= G q^{(beta-1)M} <= G q^{(beta-2)(M_max+1)} q^M for M > M_max;
    // a word u gives A_u(M) <= C(M-1, |u|); sum_{M2 < M1} f_s(M1, M2) A_w(M2) <= (q/(1-q))^s A_w(M1).
    auto tails = [&ctx, s, l, beta, w, image](long M_max) {
        const Rational G = g_bound(ctx, l) * ctx.q_power((beta - 2) * (M_max + 1));
        const Rational f_mass = power(ctx.q() / (1 - ctx.q()), static_cast<unsigned long>(s));
        Rational lhs = 0, rhs = 0;
        for (const auto& [u, c] : w.terms())
            lhs += tail_closed_form(ctx, static_cast<int>(u.length()) + 1, M_max) * c;
        for (const auto& [u, c] : image.terms())
            rhs += tail_closed_form(ctx, static_cast<int>(u.length()) + 1, M_max) * c;
        return std::make_pair(Rational(lhs * G * f_mass), Rational(rhs * G));
    };
    plan.tails = tails;
    plan.evaluate = [&ctx, s, l, beta, w, image, tails](long M_max) {
        const auto g = scale(g_table(ctx, l, beta, M_max));
        const auto inner = convolve(f_table_scaled(ctx, s, M_max), A_table_scaled(ctx, w, M_max, false));
        const Rational lhs = dot(g, inner, 1, M_max);
        const Rational rhs = dot(g, A_table_scaled(ctx, image, M_max, false), 1, M_max);
        const auto [lt, rt] = tails(M_max);
        TruncatedSides out;
        out.lhs = {lhs, lt, M_max};
        out.rhs = {rhs, rt, M_max};
        return out;
    };
    return plan;
}

}  // namespace

TruncatedPlan truncated_plan(IdentityId id, const ParamReader& p, const QContext& ctx)
{
    switch (id) {
    case IdentityId::T1:
        return restricted_sum(p, ctx, false);
    case IdentityId::T2:
        return restricted_sum(p, ctx, true);
    case IdentityId::T3:
        return kernel_decomposition(p, ctx);
    case IdentityId::T4:
        return kernel_expansion(p, ctx);
    case IdentityId::T5:
        return restricted_sum_through_z(p, ctx);
    case IdentityId::T6:
        return contraction_g(p, ctx);
    default:
        throw std::invalid_argument(std::string(to_string(id)) + " is not a truncated identity");
    }
}

}  // namespace qmzv::detail
