#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quantkit/metrics.hpp"

using namespace quantkit;

namespace {
const PopulationModel train = PopulationModel::binormal(BinormalParams{}, 0.5);
}

TEST_CASE("relative error")
{
    CHECK(relative_error(0.01, 0.165482) == doctest::Approx(15.5482).epsilon(1e-12));
    CHECK(relative_error(0.5, 0.5) == 0.0);
    // Published 0.2038 comes from the unrounded CDE limit, not from 0.2389.
    const double limit = cde_iterate(train, PopulationEvaluator(train.with_prevalence(0.3))).value;
    CHECK(std::abs(limit - 0.2389) < 5e-5);
    CHECK(std::abs(relative_error(0.3, limit) - 0.2038) < 5e-5);
    CHECK_THROWS(relative_error(0.0, 0.1));

    RngStream rng(8, 8);
    for (int i = 0; i < 1000; ++i) {
        const double q = 0.001 + 0.998 * rng.next_uniform();
        const double e = rng.next_uniform();
        const double d = std::abs(e - q);
        CHECK(std::abs(std::max(d / q, d / (1 - q)) - relative_error(q, e)) <= 1e-14 * std::max(1.0, relative_error(q, e)));
    }
}

TEST_CASE("accuracy")
{
    const PopulationEvaluator half(train);
    CHECK(accuracy(half, bayes_classifier(train, CostPair{})) == doctest::Approx(oracle::Phi_1).epsilon(1e-13));
    const PopulationEvaluator low(train.with_prevalence(0.01));
    CHECK(accuracy(low, ThresholdClassifier::always_class1()) == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(accuracy(low, ThresholdClassifier::always_class0()) == doctest::Approx(0.01).epsilon(1e-15));

    // Stratified decomposition.
    for (double cut : {-1.0, 0.4, 2.2}) {
        const ThresholdClassifier clf{cut, Side::Below, 0.5};
        const double q = 0.3;
        const double p0 = 0.5 * std::erfc(-cut / std::sqrt(2.0));
        const double p1 = 0.5 * std::erfc(-(cut - 2.0) / std::sqrt(2.0));
        const PopulationEvaluator ev(train.with_prevalence(q));
        CHECK(accuracy(ev, clf) == doctest::Approx(q * p0 + (1 - q) * (1 - p1)).epsilon(1e-12));
    }

    const SampleEvaluator hidden(LabeledDataset{{0.0}, {0}, 0, 0}, true);
    CHECK_THROWS_AS(accuracy(hidden, ThresholdClassifier::always_class0()), std::logic_error);
}

TEST_CASE("F-measure")
{
    const PopulationEvaluator low(train.with_prevalence(0.01));
    CHECK_FALSE(f_measure(low, ThresholdClassifier::always_class1()).has_value());

    // Disjoint supports: perfect classification.
    const PopulationModel apart = PopulationModel::binormal(BinormalParams{0.0, 100.0, 1.0}, 0.2);
    const PopulationEvaluator ev(apart);
    CHECK(*f_measure(ev, bayes_classifier(apart, CostPair{})) == doctest::Approx(1.0));

    const MetricReport em = evaluate_estimate(train, low, 0.01, 0.01);
    CHECK(std::abs(*em.f_measure - 0.1697) < 5e-5);
    CHECK(em.relative_error == 0.0);
    CHECK(std::abs(em.accuracy - 0.9905) < 5e-5);
}

TEST_CASE("sample accuracy tracks population accuracy")
{
    for (double q : {0.01, 0.1, 0.5, 0.9, 0.99}) {
        const PopulationModel test = train.with_prevalence(q);
        RngStream s(42, static_cast<std::uint64_t>(q * 1000));
        const SampleEvaluator smp(stratified_sample(test, 10000, s));
        const PopulationEvaluator pop(test);
        const ThresholdClassifier clf = adapt_threshold(train, q);
        CHECK(std::abs(accuracy(smp, clf) - accuracy(pop, clf)) < 0.02);
    }
}
