#include "bilap/params.hpp"

#include "bilap/errors.hpp"

#include <string>

namespace bilap {

Params::Params(int n_, Rational s_, int p_) : n(n_), s(std::move(s_)), p(p_) { validate(); }

void Params::validate() const
{
    if (n < 5) throw DomainError("dimension n must be at least 5, got " + std::to_string(n));
    if (s <= 1) throw DomainError("exponent s must exceed 1, got " + to_string(s));
    if (p < 1) throw DomainError("component count p must be positive, got " + std::to_string(p));
}

SpecialExponents special_exponents(int n)
{
    if (n < 5) throw DomainError("special exponents need n >= 5, got " + std::to_string(n));
    Rational lower(n, n - 4);
    return {2 * lower, lower};
}

Rational fowler_gamma(const Rational& s)
{
    if (s == 1) throw DomainError("s = 1 makes the Fowler exponent singular");
    return Rational(4) / (s - 1);
}

double fowler_gamma(double s)
{
    if (s == 1.0) throw DomainError("s = 1 makes the Fowler exponent singular");
    return 4.0 / (s - 1.0);
}

Rational second_order_upper(int n)
{
    if (n < 3) throw DomainError("second-order exponents need n >= 3");
    return Rational(2 * n, n - 2);
}

Rational second_order_lower(int n)
{
    if (n < 3) throw DomainError("second-order exponents need n >= 3");
    return Rational(n, n - 2);
}

}  // namespace bilap
