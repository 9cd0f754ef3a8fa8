#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace bilap {

// Truncated Taylor expansion in the independent variable; c[k] holds
// f^(k)(x0)/k!. Arithmetic propagates exact derivatives up to order N-1.
template <std::size_t N>
struct Jet {
    std::array<double, N> c{};

    static Jet variable(double x0)
    {
        Jet j;
        j.c[0] = x0;
        if constexpr (N > 1) j.c[1] = 1.0;
        return j;
    }
    static Jet constant(double v)
    {
        Jet j;
        j.c[0] = v;
        return j;
    }

    double derivative(std::size_t k) const
    {
        double f = 1.0;
        for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
        return c[k] * f;
    }

    friend Jet operator+(Jet a, const Jet& b)
    {
        for (std::size_t k = 0; k < N; ++k) a.c[k] += b.c[k];
        return a;
    }
    friend Jet operator-(Jet a, const Jet& b)
    {
        for (std::size_t k = 0; k < N; ++k) a.c[k] -= b.c[k];
        return a;
    }
    friend Jet operator-(Jet a)
    {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend Jet operator*(double s, Jet a)
    {
        for (auto& x : a.c) x *= s;
        return a;
    }
    friend Jet operator+(double s, Jet a)
    {
        a.c[0] += s;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r;
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b)
    {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) {
            double acc = a.c[k];
            for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * r.c[k - j];
            r.c[k] = acc / b.c[0];
        }
        return r;
    }
};

template <std::size_t N>
Jet<N> pow(const Jet<N>& f, double alpha)
{
    Jet<N> g;
    g.c[0] = std::pow(f.c[0], alpha);
    for (std::size_t k = 1; k < N; ++k) {
        double acc = 0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += ((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * f.c[j] * g.c[k - j];
        g.c[k] = acc / (static_cast<double>(k) * f.c[0]);
    }
    return g;
}

template <std::size_t N>
Jet<N> log(const Jet<N>& f)
{
    Jet<N> g;
    g.c[0] = std::log(f.c[0]);
    for (std::size_t k = 1; k < N; ++k) {
        double acc = f.c[k];
        for (std::size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * g.c[j] * f.c[k - j] / static_cast<double>(k);
        g.c[k] = acc / f.c[0];
    }
    return g;
}

template <std::size_t N>
Jet<N> exp(const Jet<N>& f)
{
    Jet<N> g;
    g.c[0] = std::exp(f.c[0]);
    for (std::size_t k = 1; k < N; ++k) {
        double acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * f.c[j] * g.c[k - j];
        g.c[k] = acc / static_cast<double>(k);
    }
    return g;
}

using Jet5 = Jet<5>;

}  // namespace bilap
