#pragma once
// Reference values computed independently of the library.

#include <cmath>
#include <numbers>

namespace oracle {

// Standard normal pdf written out directly.
inline double phi(double x, double mean = 0.0, double sd = 1.0)
{
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// Tabulated standard normal CDF values.
constexpr double Phi_1 = 0.8413447460685429;      // Phi(1)
constexpr double Phi_minus_1 = 0.15865525393145707;

// sqrt(2) by Newton's method in extended precision.
inline long double sqrt2()
{
    long double x = 1.5L;
    for (int i = 0; i < 8; ++i) x = 0.5L * (x + 2.0L / x);
    return x;
}

// E[exp(aX + b)] for X ~ N(m, s^2).
inline double lognormal_mean(double a, double b, double m, double s)
{
    return std::exp(a * m + b + 0.5 * a * a * s * s);
}

} // namespace oracle
