#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quantkit/shift.hpp"

using namespace quantkit;

namespace {
const NormalMixture envelope(NormalDensity{0.5, 1.4});
const DensityRatio binormal_ratio = binormal_density_ratio(BinormalParams{});
} // namespace

TEST_CASE("mixture weights of the two derived scenarios")
{
    CHECK(std::abs(decompose_mixture(envelope, binormal_ratio).q_star - 0.7239184) < 5e-7);
    CHECK(std::abs(decompose_mixture(envelope, binormal_ratio.power(0.5)).q_star - 0.8152434) < 5e-7);
    CHECK(solve_mixture_weight(envelope, binormal_ratio) ==
          doctest::Approx(decompose_mixture(envelope, binormal_ratio).q_star).epsilon(1e-15));
}

TEST_CASE("decomposing an explicit mixture recovers its parts")
{
    const NormalMixture mix({{0.3, NormalDensity{0.0, 1.0}}, {0.7, NormalDensity{2.0, 1.0}}});
    const MixtureDecomposition dec = decompose_mixture(mix, binormal_ratio);
    CHECK(std::abs(dec.q_star - 0.3) < 1e-8);
    for (double x : {-2.0, 0.0, 1.0, 3.0, 5.0}) {
        CHECK(std::abs(dec.h0.pdf(x) - oracle::phi(x, 0, 1)) < 1e-8);
        CHECK(std::abs(dec.h1.pdf(x) - oracle::phi(x, 2, 1)) < 1e-8);
    }
}

TEST_CASE("mixture, ratio and normalisation identities")
{
    for (const DensityRatio& r : {binormal_ratio, binormal_ratio.power(0.5)}) {
        const MixtureDecomposition dec = decompose_mixture(envelope, r);
        const double q = dec.q_star;
        double mix_err = 0.0, ratio_err = 0.0, env_err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = -6.0 + 14.0 * i / 999.0;
            const double h = oracle::phi(x, 0.5, 1.4);
            mix_err = std::max(mix_err, std::abs(q * dec.h0.pdf(x) + (1 - q) * dec.h1.pdf(x) - h));
            if (dec.h1.pdf(x) > 1e-12) {
                ratio_err = std::max(ratio_err, std::abs(dec.h0.pdf(x) / dec.h1.pdf(x) - r.eval(x)) / r.eval(x));
            }
            env_err = std::max({env_err, dec.h0.pdf(x) - h / q, dec.h1.pdf(x) - h / (1 - q)});
        }
        CHECK(mix_err < 1e-10);
        CHECK(ratio_err < 1e-8);
        CHECK(env_err <= 1e-15);
        CHECK(dec.h0.envelope_constant() == doctest::Approx(1.0 / q));
        CHECK(dec.h1.envelope_constant() == doctest::Approx(1.0 / (1.0 - q)));
        for (const MixtureComponentDensity* h : {&dec.h0, &dec.h1}) {
            const double total = integrate_real_line([h](double x) { return h->pdf(x); }, {0.5, 1.4});
            CHECK(std::abs(total - 1.0) < 1e-6);
            CHECK(h->cdf(-40.0) == doctest::Approx(0.0));
            CHECK(h->cdf(40.0) == doctest::Approx(1.0).epsilon(1e-9));
            // The tabulated CDF agrees with direct quadrature.
            const double direct = integrate_interval([h](double x) { return h->pdf(x); }, -20.0, 1.234);
            CHECK(h->cdf(1.234) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("the likelihood function is strictly decreasing in the weight")
{
    double prev = INFINITY;
    for (int i = 1; i <= 50; ++i) {
        const double q = i / 51.0;
        const double v = integrate_real_line(
            [&](double x) { return mixture_score_term(binormal_ratio.log_eval(x), q) * oracle::phi(x, 0.5, 1.4); },
            {0.5, 1.4});
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("bases that cannot be split are rejected")
{
    // A base equal to the class-0 density has E[1/R] = 1 exactly: no interior weight.
    CHECK_THROWS_AS(solve_mixture_weight(NormalMixture(NormalDensity{0.0, 1.0}), binormal_ratio), NoInteriorSolution);
    CHECK_THROWS_AS(solve_mixture_weight(NormalMixture(NormalDensity{6.0, 0.5}), binormal_ratio), NoInteriorSolution);
}

TEST_CASE("test populations per scenario")
{
    const auto train = PopulationModel::binormal(BinormalParams{}, 0.5);

    const auto prior = make_test_population({ShiftKind::PriorShift, train, 0.3});
    CHECK(prior.prevalence0 == 0.3);
    for (double x : {-1.0, 1.0, 3.0}) {
        CHECK(prior.pdf0(x) == train.pdf0(x));
        CHECK(prior.pdf1(x) == train.pdf1(x));
    }

    const auto inv = make_test_population({ShiftKind::InvariantRatio, train, 0.5});
    const auto sq = make_test_population({ShiftKind::SqrtRatio, train, 0.5});
    for (int i = 0; i < 200; ++i) {
        const double x = -4.0 + 10.0 * i / 199.0;
        const double rb = std::exp(-2.0 * x + 2.0);
        const double rs = std::exp((2.0 * x * (0.0 - 2.0) + 4.0) / 4.0);
        CHECK(std::abs(inv.pdf0(x) / inv.pdf1(x) - rb) <= 1e-10 * rb);
        CHECK(std::abs(sq.pdf0(x) / sq.pdf1(x) - rs) <= 1e-10 * rs);
    }
    CHECK(density_ratio(sq).slope() == doctest::Approx(-1.0));
}

TEST_CASE("covariate shift coincides with invariant ratio only at equal prevalence")
{
    const auto train = PopulationModel::binormal(BinormalParams{}, 0.5);
    CHECK(covariate_shift_identity_check(train, train) == 0.0);
    const auto inv = make_test_population({ShiftKind::InvariantRatio, train, 0.5});
    CHECK(covariate_shift_identity_check(train, inv) <= 1e-10);
    CHECK(covariate_shift_identity_check(train, inv.with_prevalence(0.3)) > 1e-3);
    CHECK(covariate_shift_identity_check(train, train.with_prevalence(0.3)) > 0.0);
}

TEST_CASE("shift kind names round-trip")
{
    for (ShiftKind k : {ShiftKind::PriorShift, ShiftKind::InvariantRatio, ShiftKind::SqrtRatio}) {
        CHECK(parse_shift_kind(to_string(k)) == k);
    }
    CHECK_THROWS(parse_shift_kind("covariate"));
}
