#include "bilap/rational.hpp"

#include "bilap/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace bilap {

namespace {

boost::multiprecision::cpp_int pow10(int k)
{
    boost::multiprecision::cpp_int r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

Rational parse_decimal(std::string_view t)
{
    std::size_t pos = 0;
    bool neg = false;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) neg = t[pos++] == '-';
    boost::multiprecision::cpp_int mant = 0;
    int frac_digits = 0, digits = 0;
    bool seen_dot = false;
    for (; pos < t.size(); ++pos) {
        char ch = t[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            mant = mant * 10 + (ch - '0');
            ++digits;
            if (seen_dot) ++frac_digits;
        } else if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (digits == 0) throw UsageError("not a number: '" + std::string(t) + "'");
    int exp10 = 0;
    if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E')) {
        ++pos;
        std::string rest(t.substr(pos));
        if (rest.empty()) throw UsageError("bad exponent in '" + std::string(t) + "'");
        std::size_t used = 0;
        try {
            exp10 = std::stoi(rest, &used);
        } catch (const std::exception&) {
            throw UsageError("bad exponent in '" + std::string(t) + "'");
        }
        if (used != rest.size() || std::abs(exp10) > 400)
            throw UsageError("bad exponent in '" + std::string(t) + "'");
        pos = t.size();
    }
    if (pos != t.size()) throw UsageError("not a number: '" + std::string(t) + "'");
    exp10 -= frac_digits;
    Rational q = exp10 >= 0 ? Rational(mant * pow10(exp10)) : Rational(mant, pow10(-exp10));
    return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw UsageError("empty number");
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

std::string to_string(const Rational& q)
{
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Rational ipow(const Rational& base, int exponent)
{
    if (exponent < 0) {
        if (base == 0) throw DomainError("zero to a negative power");
        return Rational(1) / ipow(base, -exponent);
    }
    Rational r = 1, b = base;
    while (exponent) {
        if (exponent & 1) r *= b;
        b *= b;
        exponent >>= 1;
    }
    return r;
}

int sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

Poly::Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }
Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int Poly::degree() const { return static_cast<int>(c_.size()) - 1; }

Rational Poly::coeff(int k) const
{
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
    return c_[k];
}

Rational Poly::operator()(const Rational& x) const
{
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Poly::operator()(double x) const
{
    double acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

Poly Poly::derivative() const
{
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<int>(k));
    return Poly(std::move(d));
}

Poly operator+(const Poly& a, const Poly& b)
{
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(k) + b.coeff(k);
    return Poly(std::move(r));
}

Poly operator-(const Poly& a) { return Rational(-1) * a; }
Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.c_.empty() || b.c_.empty()) return Poly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

Poly operator*(const Rational& k, const Poly& a)
{
    std::vector<Rational> r(a.c_);
    for (auto& x : r) x *= k;
    return Poly(std::move(r));
}

bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

double PowerTerm::value() const
{
    return to_double(coeff) * std::pow(to_double(base), to_double(exponent));
}

PowerTerm combine_like(const PowerTerm& a, const PowerTerm& b)
{
    if (a.base != b.base || a.exponent != b.exponent)
        throw DomainError("power terms differ in base or exponent");
    return {a.coeff + b.coeff, a.base, a.exponent};
}

bool exactly_equal(const PowerTerm& a, const PowerTerm& b)
{
    if (a.coeff == 0 || b.coeff == 0) return a.coeff == b.coeff;
    if (a.base == 1 || a.exponent == 0) {
        if (b.base == 1 || b.exponent == 0) return a.coeff == b.coeff;
    }
    return a.coeff == b.coeff && a.base == b.base && a.exponent == b.exponent;
}

}  // namespace bilap

namespace bilap {

void Laurent::set(int power, const Rational& c)
{
    if (c == 0)
        terms_.erase(power);
    else
        terms_[power] = c;
}

Rational Laurent::coeff(int power) const
{
    auto it = terms_.find(power);
    return it == terms_.end() ? Rational(0) : it->second;
}

int Laurent::min_power() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int Laurent::max_power() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

double Laurent::operator()(double t) const
{
    double acc = 0;
    for (const auto& [k, c] : terms_) acc += to_double(c) * std::pow(t, k);
    return acc;
}

Rational Laurent::operator()(const Rational& t) const
{
    Rational acc = 0;
    for (const auto& [k, c] : terms_) acc += c * ipow(t, k);
    return acc;
}

Laurent Laurent::derivative() const
{
    Laurent d;
    for (const auto& [k, c] : terms_)
        if (k != 0) d.set(k - 1, c * k);
    return d;
}

Laurent Laurent::shifted(int k) const
{
    Laurent d;
    for (const auto& [p, c] : terms_) d.set(p + k, c);
    return d;
}

Laurent operator+(const Laurent& a, const Laurent& b)
{
    Laurent r = a;
    for (const auto& [k, c] : b.terms_) r.set(k, r.coeff(k) + c);
    return r;
}

Laurent operator*(const Rational& k, const Laurent& a)
{
    Laurent r;
    for (const auto& [p, c] : a.terms_) r.set(p, k * c);
    return r;
}

Laurent operator-(const Laurent& a, const Laurent& b) { return a + Rational(-1) * b; }

}  // namespace bilap
