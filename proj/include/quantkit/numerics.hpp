#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace quantkit {

/// Raised when a bracket's endpoint values share a sign and neither is zero.
class NoSignChange : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an integrand produces NaN or infinity inside the truncated range.
class NonFinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bracket {
    double lo;
    double hi;
};

// Bisection. Terminates when the bracket width drops to tol or an exact zero
// is hit, so the result is independent of how steep f is near the root.
template <class F>
double find_root_bracketed(F&& f, Bracket bracket, double tol)
{
    if (!(bracket.lo < bracket.hi)) {
        throw std::invalid_argument("bracket requires lo < hi");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("root tolerance must be positive");
    }
    double lo = bracket.lo;
    double hi = bracket.hi;
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw NoSignChange("no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break; // bracket at double resolution
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

struct QuadratureSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    /// Half-width of the integration window in units of the integrand scale.
    double truncation_halfwidth = 12.0;

    void validate() const;
};

/// Location hint for an integrand whose mass is concentrated near `center`
/// with tails decaying at least like a Gaussian of width `scale`.
struct SupportHint {
    double center = 0.0;
    double scale = 1.0;
};

/// Integral of f over the real line, truncated to
/// [center - k*scale, center + k*scale] with k = spec.truncation_halfwidth.
double integrate_real_line(const std::function<double(double)>& f, SupportHint hint,
                           const QuadratureSpec& spec = {});

/// Integral of f over the finite interval [a, b].
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

/// Single non-adaptive 15-point Kronrod estimate over [a, b], for short
/// intervals on which f is smooth.
double integrate_fixed(const std::function<double(double)>& f, double a, double b);

inline double normal_pdf(double x, double mean = 0.0, double sd = 1.0)
{
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    const double z = (x - mean) / sd;
    return inv_sqrt_2pi / sd * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double x, double mean = 0.0, double sd = 1.0)
{
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return 0.5 * std::erfc(-(x - mean) / sd * inv_sqrt2);
}

/// Reproducible pseudo-random stream: xoshiro256** seeded through splitmix64
/// from (seed, stream_id). Gaussians come from Box-Muller on the uniform stream.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform();
    double next_gaussian();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t s_[4];
    double spare_gaussian_ = 0.0;
    bool has_spare_ = false;
};

} // namespace quantkit
