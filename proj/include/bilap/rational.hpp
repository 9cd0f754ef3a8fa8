#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bilap {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q", integers and finite decimals (optionally with an exponent);
// decimals are read exactly, so "1.5" is 3/2 and not its binary neighbour.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Fixed 17 significant digits, the format used in every report.
std::string format_double(double x);

Rational ipow(const Rational& base, int exponent);
int sign(const Rational& q);
bool is_integer(const Rational& q);

// Dense univariate polynomial over the rationals, lowest degree first.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Rational> coeffs);
    explicit Poly(std::vector<Rational> coeffs);

    int degree() const;
    Rational coeff(int k) const;
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational operator()(const Rational& x) const;
    double operator()(double x) const;
    Poly derivative() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rational& k, const Poly& a);
    friend Poly operator-(const Poly& a);
    friend bool operator==(const Poly& a, const Poly& b);

private:
    void trim();
    std::vector<Rational> c_;
};

// Finite Laurent series sum_k c_k t^k over the rationals, for the
// t-dependent coefficient families.
class Laurent {
public:
    Laurent() = default;
    void set(int power, const Rational& c);
    Rational coeff(int power) const;
    int min_power() const;
    int max_power() const;
    bool is_zero() const { return terms_.empty(); }

    double operator()(double t) const;
    Rational operator()(const Rational& t) const;
    Laurent derivative() const;
    Laurent shifted(int k) const;  // multiply by t^k

    friend Laurent operator+(const Laurent& a, const Laurent& b);
    friend Laurent operator-(const Laurent& a, const Laurent& b);
    friend Laurent operator*(const Rational& k, const Laurent& a);

    const std::map<int, Rational>& terms() const { return terms_; }

private:
    std::map<int, Rational> terms_;
};

// coeff * base^exponent with all three parts rational. Used where a closed
// form carries a fractional power (equilibria, energy levels) and equality
// must still be decided exactly.
struct PowerTerm {
    Rational coeff;
    Rational base;
    Rational exponent;

    double value() const;
};

// Adds two terms sharing base and exponent; throws otherwise.
PowerTerm combine_like(const PowerTerm& a, const PowerTerm& b);
bool exactly_equal(const PowerTerm& a, const PowerTerm& b);

}  // namespace bilap
