#pragma once

#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include "qmzv/indices.hpp"
#include "qmzv/rational.hpp"
#include "qmzv/word.hpp"

namespace qmzv {

// Exact deformation parameter 0 < q < 1 with memoized q^m, [m] and letter weights.
// The caches are pure memos: concurrent readers may fill them in any order.
class QContext {
public:
    explicit QContext(const Rational& q);
    QContext(const QContext&) = delete;
    QContext& operator=(const QContext&) = delete;

    const Rational& q() const noexcept { return q_; }

    const Rational& q_power(long m) const;         // q^m, m >= 0
    const Rational& q_integer(long m) const;       // [m] = (1 - q^m) / (1 - q), m >= 1
    const Rational& letter_weight(const Letter& u, long m) const;

private:
    class Sequence {
    public:
        explicit Sequence(std::function<Rational(long)> gen) : gen_(std::move(gen)) {}
        const Rational& at(long m) const;

    private:
        std::function<Rational(long)> gen_;
        mutable std::shared_mutex mutex_;
        mutable std::vector<std::unique_ptr<Rational>> values_;
    };

    const Sequence& letter_sequence(const Letter& u) const;

    Rational q_;
    Sequence powers_;
    Sequence integers_;
    mutable std::shared_mutex letters_mutex_;
    mutable std::map<Letter, std::unique_ptr<Sequence>> letters_;
};

// Exact partial sum of a nonnegative series plus an exact bound on the discarded remainder:
// the true value lies in [partial, partial + tail].
struct CertifiedValue {
    Rational partial;
    Rational tail;
    long terms_used = 0;

    CertifiedValue& operator+=(const CertifiedValue& other);
    friend CertifiedValue operator+(CertifiedValue a, const CertifiedValue& b) { return a += b; }

    // Scales by a nonnegative integer.
    CertifiedValue& operator*=(const Integer& c);

    Rational upper() const { return partial + tail; }
    bool contains(const Rational& x) const { return partial <= x && x <= upper(); }
};

// [m]
Rational q_int(const QContext& ctx, long m);

// J_{z_k}(m) = q^{(k-1)m}/[m]^k,  J_{xi_k}(m) = q^{km}/[m]^k.
Rational J_letter(const QContext& ctx, const Letter& u, long m);

// Values numerators[i] / denominator over one shared (not necessarily reduced) denominator.
// Long sums of products over such tables need integer multiply-adds only.
struct ScaledTable {
    Integer denominator = 1;
    std::vector<Integer> numerators;

    Rational at(std::size_t i) const;  // reduced
    std::vector<Rational> to_rationals() const;
};

// Rewrites values over the least common denominator.
ScaledTable scale(const std::vector<Rational>& values);

// A_w(M) (strict: M > m_1 > ... > m_r > 0) or A*_w(M) (star: M > m_1 >= ... >= m_r >= 1),
// extended linearly with A_1 = A*_1 = 1.
Rational A_eval(const QContext& ctx, const WordPoly& p, long M, bool star);

// Values A_p(M) for M = 0..M_max (entry 0 is unused and set to A_p(1)).
std::vector<Rational> A_table(const QContext& ctx, const WordPoly& p, long M_max, bool star);

ScaledTable A_table_scaled(const QContext& ctx, const WordPoly& p, long M_max, bool star);

// Literal nested loops over index chains; independent of A_eval. Words longer than
// max_length are rejected.
Rational A_eval_direct(const QContext& ctx, const Word& w, long M, bool star, std::size_t max_length = 4);

// f_l(N, M): sum over N = k_1 > ... > k_l > M of q^{k_1-M}/[k_1-M] prod_{j>=2} 1/[k_j-M];
// zero unless N - M >= l.
ScaledTable f_table_scaled(const QContext& ctx, int l, long D_max);

Rational f_eval(const QContext& ctx, int l, long N, long M);

// f_l depends on N - M only; entry D holds f_l(M + D, M) for D = 0..D_max.
std::vector<Rational> f_table(const QContext& ctx, int l, long D_max);

// g_{l,beta}(M): sum over M = m_1 >= m_2 >= ... >= m_l >= 1 of
// q^{(beta-1)m_1}/[m_1]^beta prod_{j>=2} q^{m_j}/[m_j].
Rational g_eval(const QContext& ctx, int l, int beta, long M);

// Entries g_{l,beta}(M) for M = 0..M_max (entry 0 unused, zero).
std::vector<Rational> g_table(const QContext& ctx, int l, int beta, long M_max);

// p(n_1,...,n_s; n_last) = q^{n_1-n_last}/[n_1-n_last] prod_{j=2..s} 1/[n_j-n_last]; p(empty; M) = 1.
Rational p_eval(const QContext& ctx, std::span<const long> ns, long n_last);

// h_{r,l}(N_1,...,N_r, M) = sum_{c in I(r,l)} prod_{j<r} f_{c_j}(N_j, N_{j+1}) * f_{c_r}(N_r, M).
Rational h_eval(const QContext& ctx, int r, int l, std::span<const long> Ns, long M);

// sum_{m > M} C(m-1, r-1) q^m, computed as q^r/(1-q)^r - sum_{m=1..M} C(m-1, r-1) q^m.
Rational tail_closed_form(const QContext& ctx, int r, long M);

// Bound for a series over `depth` strictly decreasing variables above `floor` whose terms are
// each at most q^{top variable}, truncated at top <= M_max: q^floor * tail_closed_form(depth, M_max - floor).
Rational chain_tail(const QContext& ctx, int depth, long floor, long M_max);

// K_{b,n}(M) truncated at m_1 <= M_max. Requires n >= b + 1 and M_max > M + b (b >= 2).
CertifiedValue K_eval(const QContext& ctx, int b, int n, long M, long M_max);

// Partial sums of K_{b,n}(M) with m_1 <= M_max, for M = 0..M_max (entry 0 unused).
std::vector<Rational> K_table(const QContext& ctx, int b, int n, long M_max);

// Tail bound for K_{b,n}(M) truncated at m_1 <= M_max: C(n-2, b-1) q^M T(b-1, M_max - M); zero for b = 1.
Rational K_tail(const QContext& ctx, int b, int n, long M, long M_max);

// zeta_q(alpha) truncated at m_1 <= M_max, with tail tail_closed_form(depth, M_max).
CertifiedValue zeta_q(const QContext& ctx, const AdmissibleIndex& alpha, long M_max);

// Smallest M_max >= minimum with tail(M_max) <= target and tail(M_max)^2 <= q^{M_max}.
// `tail` must be nonincreasing in M_max. Throws std::runtime_error past `limit`.
long auto_terms(const QContext& ctx, const std::function<Rational(long)>& tail, const Rational& target,
                long minimum = 1, long limit = 100000);

// Default tail target 10^{-15}.
Rational default_tail_target();

}  // namespace qmzv
