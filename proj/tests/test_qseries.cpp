#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <stdexcept>

#include "qmzv/indices.hpp"
#include "qmzv/qseries.hpp"

using namespace qmzv;

namespace {

Rational qpow(const Rational& q, long e)
{
    Rational out = 1;
    for (long i = 0; i < e; ++i)
        out *= q;
    return out;
}

Rational bracket(const Rational& q, long m)
{
    Rational out = 0;
    for (long i = 0; i < m; ++i)
        out += qpow(q, i);
    return out;
}

Rational weight(const Rational& q, const Letter& u, long m)
{
    Rational out = qpow(q, u.is_z() ? (u.index - 1) * m : u.index * m);
    for (int i = 0; i < u.index; ++i)
        out /= bracket(q, m);
    return out;
}

// Sum over M > m_1 > ... > m_r > 0 (or >= for star) by recursion on the first index.
Rational brute_A(const Rational& q, const Word& w, long M, bool star)
{
    std::function<Rational(std::size_t, long)> rec = [&](std::size_t i, long upper) -> Rational {
        if (i == w.length())
            return 1;
        Rational s = 0;
        for (long m = 1; m <= upper; ++m)
            s += weight(q, w[i], m) * rec(i + 1, star ? m : m - 1);
        return s;
    };
    return rec(0, M - 1);
}

// Sum over all strictly decreasing chains hi > c_1 > ... > c_len > lo.
void chains(int len, long lo, long hi, std::vector<long>& c, const std::function<void(const std::vector<long>&)>& f)
{
    if (static_cast<int>(c.size()) == len) {
        f(c);
        return;
    }
    for (long x = (c.empty() ? hi : c.back()) - 1; x > lo; --x) {
        c.push_back(x);
        chains(len, lo, hi, c, f);
        c.pop_back();
    }
}

}  // namespace

TEST_CASE("context basics")
{
    CHECK_THROWS_AS(QContext(Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(QContext(Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(QContext(Rational(-1, 2)), std::invalid_argument);
    const QContext ctx(Rational(1, 3));
    for (long m = 1; m <= 12; ++m) {
        CHECK(q_int(ctx, m) == bracket(ctx.q(), m));
        CHECK(ctx.q_power(m) == qpow(ctx.q(), m));
        for (const Letter& u : {Letter::z(1), Letter::z(3), Letter::xi(1), Letter::xi(2)})
            CHECK(J_letter(ctx, u, m) == weight(ctx.q(), u, m));
    }
}

TEST_CASE("hand-computed harmonic sums at q = 1/2")
{
    const QContext ctx(Rational(1, 2));
    // [1] = 1, [2] = 3/2, so A_{z1}(3) = 1 + 2/3.
    CHECK(A_eval(ctx, WordPoly(Letter::z(1)), 3, false) == Rational(5, 3));
    // A*_{xi1}(2) = q/[1] + q^2/[2] = 1/2 + 1/6.
    CHECK(A_eval(ctx, WordPoly(Letter::xi(1)), 2, true) == Rational(1, 2));
    CHECK(A_eval(ctx, WordPoly(Letter::xi(1)), 3, true) == Rational(2, 3));
    CHECK(A_eval(ctx, WordPoly::unit(), 5, false) == 1);
    CHECK(A_eval(ctx, parse_poly("z1*z1"), 2, false) == 0);
    CHECK_THROWS_AS(A_eval(ctx, WordPoly::unit(), 0, false), std::invalid_argument);
}

TEST_CASE("A_eval agrees with brute-force nested sums")
{
    const auto words = enumerate_words({Letter::z(1), Letter::z(2), Letter::xi(1), Letter::xi(2)}, 3);
    for (const char* qs : {"1/2", "3/7"}) {
        const QContext ctx(parse_ratio(qs));
        for (const auto& w : words)
            for (long M : {1L, 2L, 5L, 7L})
                for (bool star : {false, true})
                    CHECK(A_eval(ctx, w, M, star) == brute_A(ctx.q(), w, M, star));
    }
}

TEST_CASE("A_eval is linear and tables are consistent")
{
    const QContext ctx(Rational(2, 5));
    const WordPoly a = parse_poly("z2*xi1 - 3*z1"), b = parse_poly("xi2 + 2");
    const auto ta = A_table(ctx, a, 9, false), tb = A_table(ctx, b, 9, false), tab = A_table(ctx, a + b, 9, false);
    for (long M = 1; M <= 9; ++M) {
        CHECK(tab[static_cast<std::size_t>(M)] == ta[static_cast<std::size_t>(M)] + tb[static_cast<std::size_t>(M)]);
        CHECK(A_eval(ctx, a, M, true) == A_table(ctx, a, 9, true)[static_cast<std::size_t>(M)]);
    }
    const auto scaled = A_table_scaled(ctx, a, 9, false);
    CHECK(scaled.to_rationals() == ta);
    const auto rescaled = scale(ta);
    CHECK(rescaled.to_rationals() == ta);
}

TEST_CASE("direct evaluator guards its length")
{
    const QContext ctx(Rational(1, 2));
    CHECK_THROWS_AS(A_eval_direct(ctx, parse_word("z1*z1*z1*z1*z1"), 4, false), std::invalid_argument);
    CHECK(A_eval_direct(ctx, parse_word("z1*z1*z1*z1*z1"), 4, false, 5) == 0);
}

TEST_CASE("f, g, p and h against their defining sums")
{
    const QContext ctx(Rational(1, 3));
    const Rational& q = ctx.q();
    for (int l = 1; l <= 3; ++l)
        for (long M = 1; M <= 3; ++M)
            for (long N = M + 1; N <= M + 6; ++N) {
                // f_l(N, M) with k_1 = N fixed.
                Rational expected = 0;
                std::vector<long> c{N};
                chains(l, M, N + 1, c, [&](const std::vector<long>& k) {
                    Rational t = qpow(q, k[0] - M) / bracket(q, k[0] - M);
                    for (std::size_t j = 1; j < k.size(); ++j)
                        t /= bracket(q, k[j] - M);
                    expected += t;
                });
                CHECK(f_eval(ctx, l, N, M) == expected);
            }
    for (int l = 1; l <= 3; ++l)
        for (int beta = 1; beta <= 3; ++beta)
            for (long M = 1; M <= 5; ++M) {
                // M = m_1 >= m_2 >= ... >= m_l >= 1
                std::function<Rational(int, long)> rest = [&](int left, long upper) -> Rational {
                    if (left == 0)
                        return 1;
                    Rational s = 0;
                    for (long m = 1; m <= upper; ++m)
                        s += qpow(q, m) / bracket(q, m) * rest(left - 1, m);
                    return s;
                };
                const Rational lead = qpow(q, (beta - 1) * M) / qpow(bracket(q, M), beta);
                CHECK(g_eval(ctx, l, beta, M) == lead * rest(l - 1, M));
            }
    CHECK(f_eval(ctx, 1, 4, 4) == 0);
    CHECK(f_eval(ctx, 3, 6, 4) == 0);
    const std::vector<long> ns{9, 7, 4};
    CHECK(p_eval(ctx, ns, 2) == qpow(q, 7) / bracket(q, 7) / bracket(q, 5) / bracket(q, 2));
    CHECK(p_eval(ctx, std::span<const long>(), 3) == 1);
    CHECK_THROWS_AS(p_eval(ctx, std::vector<long>{3, 5}, 1), std::invalid_argument);
    // h_{2,3}(N1, N2, M) = f1(N1,N2) f2(N2,M) + f2(N1,N2) f1(N2,M)
    const std::vector<long> Ns{9, 5};
    CHECK(h_eval(ctx, 2, 3, Ns, 1) ==
          f_eval(ctx, 1, 9, 5) * f_eval(ctx, 2, 5, 1) + f_eval(ctx, 2, 9, 5) * f_eval(ctx, 1, 5, 1));
}

TEST_CASE("tail bounds")
{
    const QContext ctx(Rational(2, 3));
    for (int r = 1; r <= 4; ++r)
        for (long M = 0; M <= 20; M += 5) {
            Rational block = 0;
            for (long m = M + 1; m <= M + 30; ++m)
                block += qpow(ctx.q(), m) * binomial(m - 1, r - 1);
            CHECK(tail_closed_form(ctx, r, M) - tail_closed_form(ctx, r, M + 30) == block);
            CHECK(tail_closed_form(ctx, r, M + 30) > 0);
        }
    CHECK(chain_tail(ctx, 0, 3, 10) == 0);
    CHECK(chain_tail(ctx, 2, 3, 10) == qpow(ctx.q(), 3) * tail_closed_form(ctx, 2, 7));
}

TEST_CASE("zeta intervals nest as the truncation grows")
{
    for (const char* qs : {"1/2", "2/3"}) {
        const QContext ctx(parse_ratio(qs));
        for (const auto& parts : {std::vector<int>{2}, std::vector<int>{2, 1}, std::vector<int>{3, 1, 2}}) {
            const AdmissibleIndex alpha(parts);
            const auto coarse = zeta_q(ctx, alpha, 20);
            const auto fine = zeta_q(ctx, alpha, 40);
            CHECK(coarse.partial <= fine.partial);
            CHECK(fine.upper() <= coarse.upper());
            CHECK(coarse.terms_used == 20);
        }
    }
    const QContext ctx(Rational(1, 2));
    CHECK_THROWS_AS(zeta_q(ctx, AdmissibleIndex(std::vector<int>{2, 1, 1}), 2), std::invalid_argument);
}

TEST_CASE("K matches its defining truncated sum")
{
    const QContext ctx(Rational(1, 2));
    const Rational& q = ctx.q();
    const long M_max = 9;
    for (int b = 1; b <= 3; ++b)
        for (int n = b + 1; n <= 5; ++n)
            for (long M = 1; M <= 3; ++M) {
                // sum over alpha in I_0(b, n), M_max >= m_1 > ... > m_{b-1} > M of prod J_{z_alpha_j}(m_j) * J_{z_alpha_b}(M)
                Rational expected = 0;
                for (const auto& alpha : enumerate_admissible(b, n)) {
                    std::vector<long> c;
                    chains(b - 1, M, M_max + 1, c, [&](const std::vector<long>& ms) {
                        Rational t = weight(q, Letter::z(alpha.parts().back()), M);
                        for (std::size_t j = 0; j < ms.size(); ++j)
                            t *= weight(q, Letter::z(alpha.parts()[j]), ms[j]);
                        expected += t;
                    });
                }
                if (b == 1) {
                    CHECK(K_eval(ctx, b, n, M, M_max).partial == expected);
                    CHECK(K_eval(ctx, b, n, M, M_max).tail == 0);
                } else if (M_max > M + b) {
                    const auto k = K_eval(ctx, b, n, M, M_max);
                    CHECK(k.partial == expected);
                    CHECK(k.tail == K_tail(ctx, b, n, M, M_max));
                    CHECK(k.upper() >= K_eval(ctx, b, n, M, 3 * M_max).partial);
                }
            }
    CHECK_THROWS_AS(K_eval(ctx, 2, 2, 1, 9), std::invalid_argument);
}

TEST_CASE("automatic truncation picks the first admissible M")
{
    const QContext ctx(Rational(1, 2));
    const auto tail = [&](long m) { return tail_closed_form(ctx, 2, m); };
    const Rational target = default_tail_target();
    const long M = auto_terms(ctx, tail, target, 2);
    CHECK(tail(M) <= target);
    CHECK(tail(M) * tail(M) <= ctx.q_power(M));
    const bool earlier = tail(M - 1) <= target && tail(M - 1) * tail(M - 1) <= ctx.q_power(M - 1);
    CHECK_FALSE(earlier);
    CHECK(auto_terms(ctx, tail, Rational(1, 2), 7) >= 7);
    CHECK_THROWS_AS(auto_terms(ctx, [](long) { return Rational(1); }, target, 1, 64), std::runtime_error);
}

TEST_CASE("CertifiedValue arithmetic")
{
    CertifiedValue a{Rational(1, 2), Rational(1, 8), 10}, b{Rational(1, 3), Rational(1, 9), 12};
    a += b;
    CHECK(a.partial == Rational(5, 6));
    CHECK(a.tail == Rational(17, 72));
    CHECK(a.contains(Rational(1)));
    CHECK_FALSE(a.contains(Rational(2)));
    a *= Integer(2);
    CHECK(a.partial == Rational(5, 3));
    CHECK(a.tail == Rational(17, 36));
}

TEST_CASE("worked values")
{
    const QContext half(Rational(1, 2)), third(Rational(1, 3));
    CHECK(q_int(half, 1) == 1);
    CHECK(q_int(half, 3) == Rational(7, 4));
    CHECK(q_int(third, 2) == Rational(4, 3));
    CHECK_THROWS_AS(q_int(half, 0), std::invalid_argument);
    CHECK(J_letter(half, Letter::z(1), 2) == Rational(2, 3));
    CHECK(J_letter(half, Letter::xi(1), 1) == Rational(1, 2));
    CHECK(J_letter(half, Letter::z(2), 1) == Rational(1, 2));
    CHECK_THROWS_AS(J_letter(half, Letter::z(1), 0), std::invalid_argument);
    CHECK(A_eval(half, parse_poly("z1"), 1, false) == 0);
    CHECK(A_eval(half, parse_poly("z1*z1"), 5, false) == A_eval_direct(half, parse_word("z1*z1"), 5, false));
    CHECK(A_eval(third, parse_poly("xi2*z1"), 6, true) == A_eval_direct(third, parse_word("xi2*z1"), 6, true));
    CHECK(f_eval(half, 2, 5, 3) == Rational(1, 6));
    CHECK(f_eval(half, 1, 7, 3) == J_letter(half, Letter::xi(1), 4));
    CHECK_THROWS_AS(f_eval(half, 0, 5, 3), std::invalid_argument);
    CHECK(g_eval(half, 2, 1, 2) == Rational(4, 9));
    CHECK(g_eval(half, 3, 2, 1) == Rational(1, 8));
    CHECK(g_eval(half, 1, 3, 4) == K_eval(half, 1, 3, 4, 10).partial);
    CHECK_THROWS_AS(g_eval(half, 0, 1, 2), std::invalid_argument);
    CHECK(p_eval(half, std::vector<long>{3}, 1) == Rational(1, 6));
    CHECK(p_eval(half, std::vector<long>{4, 3}, 2) == Rational(1, 6));
    CHECK(h_eval(half, 1, 3, std::vector<long>{6}, 2) == f_eval(half, 3, 6, 2));
    CHECK(h_eval(half, 2, 2, std::vector<long>{4, 3}, 1) == f_eval(half, 1, 4, 3) * f_eval(half, 1, 3, 1));
    CHECK(tail_closed_form(half, 1, 0) == 1);
    CHECK(tail_closed_form(half, 1, 3) == Rational(1, 8));
    CHECK(K_tail(half, 2, 3, 1, 80) <= K_tail(half, 2, 3, 1, 40));

    const auto z2 = zeta_q(half, AdmissibleIndex(std::vector<int>{2}), 64);
    Rational direct = 0;
    for (long m = 1; m <= 64; ++m)
        direct += 1 / (q_int(half, m) * q_int(half, m)) * half.q_power(m);
    CHECK(z2.partial == direct);
    CHECK(z2.tail < Rational(1, 1) / power(Rational(2), 60));

    const auto k = K_eval(half, 2, 3, 1, 60);
    Rational oracle = 0;
    for (long m1 = 2; m1 <= 60; ++m1)
        oracle += weight(half.q(), Letter::z(2), m1) * weight(half.q(), Letter::z(1), 1);
    CHECK(k.partial == oracle);
    CHECK(k.contains(oracle));
}
