#include "homgibbs/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace homgibbs {

Rational pow(const Rational& x, unsigned e)
{
    Rational result = 1;
    Rational base = x;
    while (e) {
        if (e & 1U)
            result *= base;
        base *= base;
        e >>= 1U;
    }
    return result;
}

std::vector<BigInt> to_coprime_integers(std::span<const Rational> xs)
{
    BigInt l = 1;
    for (const auto& x : xs) {
        if (x <= 0)
            throw std::invalid_argument("to_coprime_integers needs positive entries");
        l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(x)));
    }
    std::vector<BigInt> out;
    BigInt g = 0;
    for (const auto& x : xs) {
        BigInt v = boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x));
        g = boost::multiprecision::gcd(g, v);
        out.push_back(v);
    }
    for (auto& v : out)
        v /= g;
    return out;
}

std::vector<double> to_doubles(std::span<const Rational> xs)
{
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& x : xs)
        out.push_back(x.convert_to<double>());
    return out;
}

Rational exact_rational(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("exact_rational needs a finite value");
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    // mant * 2^53 is an integer.
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    Rational r = Rational(scaled);
    exp -= 53;
    if (exp >= 0)
        r *= pow(Rational(2), static_cast<unsigned>(exp));
    else
        r /= pow(Rational(2), static_cast<unsigned>(-exp));
    return r;
}

}  // namespace homgibbs
