#include "qmzv/qseries.hpp"

#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace qmzv {

// ---------------------------------------------------------------------------
// QContext

const Rational& QContext::Sequence::at(long m) const
{
    const auto index = static_cast<std::size_t>(m);
    {
        std::shared_lock lock(mutex_);
        if (index < values_.size() && values_[index])
            return *values_[index];
    }
    auto value = std::make_unique<Rational>(gen_(m));
    std::unique_lock lock(mutex_);
    if (index >= values_.size())
        values_.resize(index + 1);
    if (!values_[index])
        values_[index] = std::move(value);
    return *values_[index];
}

QContext::QContext(const Rational& q)
    : q_(q),
      powers_([this](long m) { return power(q_, static_cast<unsigned long>(m)); }),
      integers_([this](long m) { return Rational((1 - q_power(m)) / (1 - q_)); })
{
    if (!(q_ > 0 && q_ < 1))
        throw std::invalid_argument("q must satisfy 0 < q < 1, got " + to_string(q_));
}

const Rational& QContext::q_power(long m) const
{
    if (m < 0)
        throw std::invalid_argument("q_power: negative exponent");
    return powers_.at(m);
}

const Rational& QContext::q_integer(long m) const
{
    if (m < 1)
        throw std::invalid_argument("q-integer [m] requires m >= 1, got " + std::to_string(m));
    return integers_.at(m);
}

const QContext::Sequence& QContext::letter_sequence(const Letter& u) const
{
    {
        std::shared_lock lock(letters_mutex_);
        auto it = letters_.find(u);
        if (it != letters_.end())
            return *it->second;
    }
    std::unique_lock lock(letters_mutex_);
    auto& slot = letters_[u];
    if (!slot) {
        slot = std::make_unique<Sequence>([this, u](long m) {
            const long k = u.index;
            const long exponent = u.is_z() ? (k - 1) * m : k * m;
            return Rational(q_power(exponent) / power(q_integer(m), static_cast<unsigned long>(k)));
        });
    }
    return *slot;
}

const Rational& QContext::letter_weight(const Letter& u, long m) const
{
    if (m < 1)
        throw std::invalid_argument("letter weight J_u(m) requires m >= 1, got " + std::to_string(m));
    return letter_sequence(u).at(m);
}

// ---------------------------------------------------------------------------
// CertifiedValue

CertifiedValue& CertifiedValue::operator+=(const CertifiedValue& other)
{
    partial += other.partial;
    tail += other.tail;
    terms_used = std::max(terms_used, other.terms_used);
    return *this;
}

CertifiedValue& CertifiedValue::operator*=(const Integer& c)
{
    if (c < 0)
        throw std::invalid_argument("certified values only scale by nonnegative integers");
    partial *= c;
    tail *= c;
    return *this;
}

// ---------------------------------------------------------------------------
// Basic weights

Rational q_int(const QContext& ctx, long m) { return ctx.q_integer(m); }

Rational J_letter(const QContext& ctx, const Letter& u, long m) { return ctx.letter_weight(u, m); }

// ---------------------------------------------------------------------------
// Harmonic sums A_w(M), A*_w(M)

namespace {

// Letter weights J_u(m), m = 0..M_max, over one denominator (entry 0 is zero).
ScaledTable scaled_letter(const QContext& ctx, const Letter& u, long M_max)
{
    std::vector<Rational> values(static_cast<std::size_t>(M_max) + 1);
    for (long m = 1; m <= M_max; ++m)
        values[static_cast<std::size_t>(m)] = ctx.letter_weight(u, m);
    return scale(values);
}

// Tables for all suffixes of the requested words, shared within one evaluation.
class SuffixTables {
public:
    SuffixTables(const QContext& ctx, long M_max, bool star) : ctx_(ctx), M_max_(M_max), star_(star) {}

    const ScaledTable& table(const Word& w)
    {
        auto it = tables_.find(w);
        if (it != tables_.end())
            return it->second;
        ScaledTable out;
        out.numerators.resize(static_cast<std::size_t>(M_max_) + 1);
        if (w.empty()) {
            for (auto& x : out.numerators)
                x = 1;
        } else {
            const ScaledTable& inner = table(w.tail());
            const ScaledTable& weight = letter(w.front());
            out.denominator = inner.denominator * weight.denominator;
            Integer acc = 0;
            // Strict: A_{u w}(M) = sum_{m<M} J_u(m) A_w(m).  Star: ... J_u(m) A*_w(m+1).
            for (long M = 2; M <= M_max_; ++M) {
                const Integer& next = inner.numerators[static_cast<std::size_t>(star_ ? M : M - 1)];
                const Integer& j = weight.numerators[static_cast<std::size_t>(M - 1)];
                if (sgn(next) != 0)
                    mpz_addmul(acc.get_mpz_t(), j.get_mpz_t(), next.get_mpz_t());
                out.numerators[static_cast<std::size_t>(M)] = acc;
            }
        }
        return tables_.emplace(w, std::move(out)).first->second;
    }

private:
    const ScaledTable& letter(const Letter& u)
    {
        auto it = letters_.find(u);
        if (it == letters_.end())
            it = letters_.emplace(u, scaled_letter(ctx_, u, M_max_)).first;
        return it->second;
    }

    const QContext& ctx_;
    long M_max_;
    bool star_;
    std::unordered_map<Word, ScaledTable, WordHash> tables_;
    std::map<Letter, ScaledTable> letters_;
};

Rational direct_weight(const Rational& q, const Letter& u, long m)
{
    // Straight from the definition, bypassing the context caches.
    const Rational qm = power(q, static_cast<unsigned long>(m));
    const Rational bracket = (1 - qm) / (1 - q);
    const long k = u.index;
    const long exponent = u.is_z() ? (k - 1) * m : k * m;
    return power(q, static_cast<unsigned long>(exponent)) / power(bracket, static_cast<unsigned long>(k));
}

void direct_loops(const Rational& q, const Word& w, std::size_t depth, long upper, bool star,
                  const Rational& prefix, Rational& sum)
{
    if (depth == w.length()) {
        sum += prefix;
        return;
    }
    for (long m = 1; m <= upper; ++m) {
        Rational term = prefix * direct_weight(q, w[depth], m);
        direct_loops(q, w, depth + 1, star ? m : m - 1, star, term, sum);
    }
}

}  // namespace

Rational ScaledTable::at(std::size_t i) const
{
    Rational out(numerators.at(i), denominator);
    out.canonicalize();
    return out;
}

std::vector<Rational> ScaledTable::to_rationals() const
{
    std::vector<Rational> out;
    out.reserve(numerators.size());
    for (std::size_t i = 0; i < numerators.size(); ++i)
        out.push_back(at(i));
    return out;
}

ScaledTable scale(const std::vector<Rational>& values)
{
    ScaledTable out;
    for (const auto& v : values)
        if (out.denominator % v.get_den() != 0)
            mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), v.get_den_mpz_t());
    out.numerators.reserve(values.size());
    for (const auto& v : values)
        out.numerators.push_back(v.get_num() * (out.denominator / v.get_den()));
    return out;
}

ScaledTable A_table_scaled(const QContext& ctx, const WordPoly& p, long M_max, bool star)
{
    if (M_max < 1)
        throw std::invalid_argument("A_table: M_max must be >= 1");
    SuffixTables tables(ctx, M_max, star);
    ScaledTable out;
    out.numerators.assign(static_cast<std::size_t>(M_max) + 1, Integer(0));
    for (const auto& [w, c] : p.terms())
        mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(),
                tables.table(w).denominator.get_mpz_t());
    for (const auto& [w, c] : p.terms()) {
        const auto& t = tables.table(w);
        const Integer factor = c * (out.denominator / t.denominator);
        for (long M = 1; M <= M_max; ++M) {
            const auto i = static_cast<std::size_t>(M);
            mpz_addmul(out.numerators[i].get_mpz_t(), t.numerators[i].get_mpz_t(), factor.get_mpz_t());
        }
    }
    out.numerators[0] = out.numerators[1];
    return out;
}

std::vector<Rational> A_table(const QContext& ctx, const WordPoly& p, long M_max, bool star)
{
    return A_table_scaled(ctx, p, M_max, star).to_rationals();
}

Rational A_eval(const QContext& ctx, const WordPoly& p, long M, bool star)
{
    if (M < 1)
        throw std::invalid_argument("A_eval: M must be >= 1");
    return A_table_scaled(ctx, p, M, star).at(static_cast<std::size_t>(M));
}

Rational A_eval_direct(const QContext& ctx, const Word& w, long M, bool star, std::size_t max_length)
{
    if (M < 1)
        throw std::invalid_argument("A_eval_direct: M must be >= 1");
    if (w.length() > max_length)
        throw std::invalid_argument("A_eval_direct: word " + w.to_string() + " exceeds the length limit " +
                                    std::to_string(max_length));
    Rational sum = 0;
    direct_loops(ctx.q(), w, 0, M - 1, star, Rational(1), sum);
    return sum;
}

// ---------------------------------------------------------------------------
// f, g, p, h

ScaledTable f_table_scaled(const QContext& ctx, int l, long D_max)
{
    if (l < 1)
        throw std::invalid_argument("f: l must be >= 1");
    ScaledTable out;
    out.numerators.assign(static_cast<std::size_t>(std::max(D_max, 0L)) + 1, Integer(0));
    if (D_max < 1)
        return out;
    // Shifting k_j -> k_j - M turns the inner chain into A_{z_1^{l-1}}(D).
    const auto inner = A_table_scaled(ctx, WordPoly(power(Letter::z(1), l - 1)), D_max, false);
    const auto weight = scaled_letter(ctx, Letter::xi(1), D_max);
    out.denominator = inner.denominator * weight.denominator;
    for (long D = l; D <= D_max; ++D) {
        const auto i = static_cast<std::size_t>(D);
        out.numerators[i] = weight.numerators[i] * inner.numerators[i];
    }
    return out;
}

std::vector<Rational> f_table(const QContext& ctx, int l, long D_max)
{
    return f_table_scaled(ctx, l, D_max).to_rationals();
}

Rational f_eval(const QContext& ctx, int l, long N, long M)
{
    if (l < 1)
        throw std::invalid_argument("f: l must be >= 1");
    const long D = N - M;
    if (D < l)
        return 0;
    return f_table(ctx, l, D)[static_cast<std::size_t>(D)];
}

std::vector<Rational> g_table(const QContext& ctx, int l, int beta, long M_max)
{
    if (l < 1 || beta < 1)
        throw std::invalid_argument("g: l and beta must be >= 1");
    const auto size = static_cast<std::size_t>(std::max(M_max, 0L)) + 1;
    std::vector<Rational> out(size);
    const Letter lead = Letter::z(beta);
    const Letter xi1 = Letter::xi(1);
    // cumulative[m] = sum_{m' <= m} V(m') for the current innermost block of the weak chain.
    std::vector<Rational> cumulative(size, Rational(1));
    cumulative[0] = 0;
    bool have_inner = false;
    for (int j = l; j >= 2; --j) {
        std::vector<Rational> next(size);
        Rational acc = 0;
        for (long m = 1; m <= M_max; ++m) {
            Rational v = ctx.letter_weight(xi1, m);
            if (have_inner)
                v *= cumulative[static_cast<std::size_t>(m)];
            acc += v;
            next[static_cast<std::size_t>(m)] = acc;
        }
        cumulative = std::move(next);
        have_inner = true;
    }
    for (long M = 1; M <= M_max; ++M) {
        out[static_cast<std::size_t>(M)] = ctx.letter_weight(lead, M);
        if (have_inner)
            out[static_cast<std::size_t>(M)] *= cumulative[static_cast<std::size_t>(M)];
    }
    return out;
}

Rational g_eval(const QContext& ctx, int l, int beta, long M)
{
    if (M < 1)
        throw std::invalid_argument("g: M must be >= 1");
    return g_table(ctx, l, beta, M)[static_cast<std::size_t>(M)];
}

Rational p_eval(const QContext& ctx, std::span<const long> ns, long n_last)
{
    if (n_last < 1)
        throw std::invalid_argument("p: last argument must be >= 1");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const long next = i + 1 < ns.size() ? ns[i + 1] : n_last;
        if (ns[i] <= next)
            throw std::invalid_argument("p: arguments must be strictly decreasing");
    }
    if (ns.empty())
        return 1;
    Rational out = ctx.letter_weight(Letter::xi(1), ns[0] - n_last);
    for (std::size_t j = 1; j < ns.size(); ++j)
        out /= ctx.q_integer(ns[j] - n_last);
    return out;
}

Rational h_eval(const QContext& ctx, int r, int l, std::span<const long> Ns, long M)
{
    if (r < 1 || l < r || static_cast<std::size_t>(r) != Ns.size())
        throw std::invalid_argument("h: need 1 <= r <= l and exactly r upper arguments");
    for (int j = 0; j < r; ++j) {
        const long next = j + 1 < r ? Ns[static_cast<std::size_t>(j) + 1] : M;
        if (Ns[static_cast<std::size_t>(j)] <= next)
            throw std::invalid_argument("h: arguments must be strictly decreasing");
    }
    Rational out = 0;
    for (const auto& c : enumerate_compositions(r, l)) {
        Rational term = 1;
        for (int j = 0; j < r && sgn(term) != 0; ++j) {
            const long upper = Ns[static_cast<std::size_t>(j)];
            const long lower = j + 1 < r ? Ns[static_cast<std::size_t>(j) + 1] : M;
            term *= f_eval(ctx, c[static_cast<std::size_t>(j)], upper, lower);
        }
        out += term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tails

Rational tail_closed_form(const QContext& ctx, int r, long M)
{
    if (r < 1 || M < 0)
        throw std::invalid_argument("tail_closed_form: need r >= 1 and M >= 0");
    Rational out = power(ctx.q() / (1 - ctx.q()), static_cast<unsigned long>(r));
    for (long m = r; m <= M; ++m)
        out -= ctx.q_power(m) * binomial(m - 1, r - 1);
    return out;
}

Rational chain_tail(const QContext& ctx, int depth, long floor, long M_max)
{
    if (depth < 1)
        return 0;
    return ctx.q_power(floor) * tail_closed_form(ctx, depth, std::max(M_max - floor, 0L));
}

// ---------------------------------------------------------------------------
// K_{b,n}(M)

std::vector<Rational> K_table(const QContext& ctx, int b, int n, long M_max)
{
    if (b < 1 || n < b + 1)
        throw std::invalid_argument("K: need b >= 1 and n >= b + 1");
    const auto size = static_cast<std::size_t>(std::max(M_max, 0L)) + 1;
    std::vector<Rational> out(size);
    for (const auto& alpha : enumerate_admissible(b, n)) {
        const auto& parts = alpha.parts();
        // suffix[m] = sum over chains M_max >= m_1 > ... > m_j >= m of the weights of the first j letters.
        std::vector<Rational> suffix(size + 1);
        for (int j = 0; j + 1 < b; ++j) {
            const Letter u = Letter::z(parts[static_cast<std::size_t>(j)]);
            std::vector<Rational> next(size + 1);
            Rational acc = 0;
            for (long m = M_max; m >= 1; --m) {
                Rational v = ctx.letter_weight(u, m);
                if (j > 0)
                    v *= suffix[static_cast<std::size_t>(m) + 1];
                acc += v;
                next[static_cast<std::size_t>(m)] = acc;
            }
            suffix = std::move(next);
        }
        const Letter last = Letter::z(parts.back());
        for (long M = 1; M <= M_max; ++M) {
            Rational v = ctx.letter_weight(last, M);
            if (b > 1)
                v *= suffix[static_cast<std::size_t>(M) + 1];
            out[static_cast<std::size_t>(M)] += v;
        }
    }
    return out;
}

Rational K_tail(const QContext& ctx, int b, int n, long M, long M_max)
{
    if (b <= 1)
        return 0;
    return chain_tail(ctx, b - 1, M, M_max) * binomial(n - 2, b - 1);
}

CertifiedValue K_eval(const QContext& ctx, int b, int n, long M, long M_max)
{
    if (b < 1 || n < b + 1)
        throw std::invalid_argument("K: need b >= 1 and n >= b + 1");
    if (M < 1)
        throw std::invalid_argument("K: M must be >= 1");
    if (b == 1)
        return {ctx.letter_weight(Letter::z(n), M), Rational(0), M};
    if (M_max <= M + b)
        throw std::invalid_argument("K: M_max must exceed M + b");
    return {K_table(ctx, b, n, M_max)[static_cast<std::size_t>(M)], K_tail(ctx, b, n, M, M_max), M_max};
}

// ---------------------------------------------------------------------------
// zeta_q

CertifiedValue zeta_q(const QContext& ctx, const AdmissibleIndex& alpha, long M_max)
{
    const auto depth = static_cast<long>(alpha.depth());
    if (M_max < depth)
        throw std::invalid_argument("zeta_q: M_max must be at least the depth");
    std::vector<Letter> letters;
    for (int k : alpha.parts())
        letters.push_back(Letter::z(k));
    Rational partial = A_eval(ctx, WordPoly(Word(std::move(letters))), M_max + 1, false);
    return {std::move(partial), tail_closed_form(ctx, static_cast<int>(depth), M_max), M_max};
}

// ---------------------------------------------------------------------------
// Truncation policy

Rational default_tail_target()
{
    return Rational(Integer(1), Integer("1000000000000000"));
}

long auto_terms(const QContext& ctx, const std::function<Rational(long)>& tail, const Rational& target,
                long minimum, long limit)
{
    auto meets_target = [&](long m) { return tail(m) <= target; };
    long lo = minimum, hi = std::max(minimum, 1L);
    while (!meets_target(hi)) {
        lo = hi + 1;
        hi *= 2;
        if (hi > limit)
            throw std::runtime_error("auto_terms: no truncation below the limit meets the tail target");
    }
    while (lo < hi) {
        const long mid = lo + (hi - lo) / 2;
        if (meets_target(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    for (long m = hi; m <= limit; ++m) {
        const Rational t = tail(m);
        if (t <= target && t * t <= ctx.q_power(m))
            return m;
    }
    throw std::runtime_error("auto_terms: no truncation below the limit meets the tail target");
}

}  // namespace qmzv
