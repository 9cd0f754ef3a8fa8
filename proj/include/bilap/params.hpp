#pragma once

#include "bilap/rational.hpp"

namespace bilap {

struct Params {
    int n = 5;
    Rational s = 2;
    int p = 1;

    Params() = default;
    Params(int n_, Rational s_, int p_ = 1);

    double s_value() const { return to_double(s); }
    void validate() const;
};

struct SpecialExponents {
    Rational upper;  // 2n/(n-4)
    Rational lower;  // n/(n-4)

    Rational critical() const { return upper - 1; }
};

SpecialExponents special_exponents(int n);

// Fowler exponent 4/(s-1).
Rational fowler_gamma(const Rational& s);
double fowler_gamma(double s);

// Second-order analogues: 2* = 2n/(n-2), 2*-1 = (n+2)/(n-2), 2_* = n/(n-2).
Rational second_order_upper(int n);
Rational second_order_lower(int n);

}  // namespace bilap
