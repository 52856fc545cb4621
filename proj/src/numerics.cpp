#include "quantkit/numerics.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace quantkit {

namespace {

// 15-point Kronrod extension of the 7-point Gauss-Legendre rule on [-1, 1].
// Nodes are listed for x >= 0; odd indices are the Gauss nodes.
constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(const F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto eval = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw NonFinite("integrand is not finite at x = " + std::to_string(x));
        }
        return y;
    };

    const double f_center = eval(center);
    double kronrod = kronrod_weights[7] * f_center;
    double gauss = gauss_weights[3] * f_center;
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kronrod_nodes[i];
        const double pair = eval(center - dx) + eval(center + dx);
        kronrod += kronrod_weights[i] * pair;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

constexpr std::size_t max_segments = 4000;

} // namespace

void QuadratureSpec::validate() const
{
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature abs_tol must be positive");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature rel_tol must be positive");
    if (!(truncation_halfwidth >= 8.0)) {
        throw std::invalid_argument("quadrature truncation_halfwidth must be at least 8");
    }
}

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec)
{
    spec.validate();
    if (a == b) return 0.0;
    if (b < a) return -integrate_interval(f, b, a, spec);

    // Start from a few equal panels so narrow peaks away from the midpoint are seen.
    constexpr int initial_panels = 16;
    std::priority_queue<Segment> work;
    double total = 0.0;
    double total_error = 0.0;
    const double width = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == initial_panels) ? b : lo + width;
        Segment s = gauss_kronrod_15(f, lo, hi);
        total += s.value;
        total_error += s.error;
        work.push(s);
    }

    while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
           work.size() < max_segments) {
        const Segment worst = work.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;
        work.pop();
        const Segment left = gauss_kronrod_15(f, worst.a, mid);
        const Segment right = gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
    }

    // Re-sum from the segments to shed the drift of the running updates.
    double sum = 0.0;
    while (!work.empty()) {
        sum += work.top().value;
        work.pop();
    }
    return sum;
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b)
{
    if (a == b) return 0.0;
    return gauss_kronrod_15(f, a, b).value;
}

double integrate_real_line(const std::function<double(double)>& f, SupportHint hint,
                           const QuadratureSpec& spec)
{
    if (!(hint.scale > 0.0)) throw std::invalid_argument("support scale must be positive");
    const double half = spec.truncation_halfwidth * hint.scale;
    return integrate_interval(f, hint.center - half, hint.center + half, spec);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id)
{
    // The stream id is hashed before mixing so neighbouring ids land far apart.
    std::uint64_t id_state = stream_id ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t state = seed ^ splitmix64(id_state);
    for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_gaussian_;
    }
    constexpr double two_pi = 6.28318530717958647692;
    // 1 - u lies in (0, 1], keeping the logarithm finite.
    const double u1 = 1.0 - next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_gaussian_ = radius * std::sin(two_pi * u2);
    has_spare_ = true;
    return radius * std::cos(two_pi * u2);
}

} // namespace quantkit
