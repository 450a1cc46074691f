#include "qmzv/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace qmzv {

std::string to_string(const Rational& x)
{
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_string(const Integer& x) { return x.get_str(); }

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

}  // namespace

Rational parse_ratio(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        throw std::invalid_argument("expected a ratio p/r, got '" + std::string(text) + "'");
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
        negative = num.front() == '-';
        num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed ratio '" + std::string(text) + "'");
    Integer n{std::string(num)}, d{std::string(den)};
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    if (negative)
        n = -n;
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_decimal(const Rational& x, int digits)
{
    Integer num = x.get_num();
    const Integer& den = x.get_den();
    std::string out;
    if (num < 0) {
        out += '-';
        num = -num;
    }
    Integer whole = num / den;
    Integer rem = num % den;
    out += whole.get_str();
    if (digits > 0) {
        out += '.';
        for (int i = 0; i < digits; ++i) {
            rem *= 10;
            Integer d = rem / den;
            rem %= den;
            out += d.get_str();
        }
    }
    return out;
}

Rational power(const Rational& base, unsigned long exponent)
{
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    return r;
}

Integer binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

}  // namespace qmzv
