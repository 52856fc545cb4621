#include <doctest.h>

#include <cmath>

#include "quantkit/classify.hpp"

using namespace quantkit;

namespace {
const PopulationModel train = PopulationModel::binormal(BinormalParams{}, 0.5);

// Best cost-weighted error over a cut grid, both orientations.
double grid_minimum(const PopulationModel& m, double a0, double a1, int points)
{
    double best = INFINITY;
    for (int i = 0; i < points; ++i) {
        const double cut = -5.0 + 12.0 * i / (points - 1.0);
        for (Side s : {Side::Below, Side::Above}) {
            best = std::min(best, cost_weighted_error(m, ThresholdClassifier{cut, s, 0.5}, a0, a1));
        }
    }
    return best;
}
} // namespace

TEST_CASE("min-error Bayes classifier of the symmetric binormal model")
{
    const ThresholdClassifier clf = bayes_classifier(train, CostPair{});
    CHECK(clf.cut == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(clf.class0_side == Side::Below);
    CHECK(clf.posterior_threshold == doctest::Approx(0.5));
    CHECK(classify(clf, 0.0) == 0);
    CHECK(classify(clf, 1.0) == 1);
    CHECK(classify(clf, 2.0) == 1);
}

TEST_CASE("weighted classifier at the first iterate")
{
    // a0 = 0.1655, a1 = 0.8345: posterior > 0.8345, i.e. x < 1 + log(a0/a1)/2.
    const ThresholdClassifier clf = classifier_for_weights(train, 0.1655, 0.8345);
    CHECK(clf.posterior_threshold == doctest::Approx(0.8345).epsilon(1e-12));
    CHECK(clf.cut == doctest::Approx(1.0 + 0.5 * std::log(0.1655 / 0.8345)).epsilon(1e-12));
    CHECK(clf.cut == doctest::Approx(0.191).epsilon(1e-3));
}

TEST_CASE("Bayes classifiers beat every grid alternative")
{
    RngStream rng(5, 5);
    for (int i = 0; i < 30; ++i) {
        const double p = 0.05 + 0.9 * rng.next_uniform();
        const CostPair c{0.2 + 5.0 * rng.next_uniform(), 0.2 + 5.0 * rng.next_uniform()};
        const auto m = PopulationModel::binormal(BinormalParams{}, p);
        const double a0 = c.c0 * p, a1 = c.c1 * (1 - p);
        const double ours = cost_weighted_error(m, bayes_classifier(m, c), a0, a1);
        CHECK(ours <= grid_minimum(m, a0, a1, 200) + 1e-12);
        CHECK(ours <= grid_minimum(m, a0, a1, 50) + 1e-12);
    }
}

TEST_CASE("adapting the threshold to an estimated prevalence")
{
    CHECK(adapt_threshold(train, 0.1655).posterior_threshold == doctest::Approx(0.8345).epsilon(1e-12));
    const ThresholdClassifier same = adapt_threshold(train, 0.5);
    CHECK(same.posterior_threshold == doctest::Approx(0.5));
    CHECK(same.cut == doctest::Approx(bayes_classifier(train, CostPair{}).cut));

    const ThresholdClassifier never0 = adapt_threshold(train, 0.0);
    CHECK(never0.is_constant());
    for (double x : {-100.0, 0.0, 1.0, 100.0}) CHECK(classify(never0, x) == 1);
    CHECK(classify(adapt_threshold(train, 1.0), 50.0) == 0);
    CHECK(classify(adapt_threshold(train, -0.2), -50.0) == 1);

    double prev = 1.0;
    for (int i = 1; i < 100; ++i) {
        const double t = adapt_threshold(train, i / 100.0).posterior_threshold;
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("adapting to the true prevalence minimises test error")
{
    for (double q : {0.05, 0.3, 0.8}) {
        const PopulationModel test = train.with_prevalence(q);
        const double ours = cost_weighted_error(test, adapt_threshold(train, q), q, 1 - q);
        CHECK(ours <= grid_minimum(test, q, 1 - q, 200) + 1e-12);
    }
}

TEST_CASE("class-conditional rates")
{
    const ThresholdClassifier clf = bayes_classifier(train, CostPair{});
    CHECK(class_conditional_rate(train, clf, 0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
    CHECK(class_conditional_rate(train, clf, 1) == doctest::Approx(0.15865525393145707).epsilon(1e-13));
    CHECK(class_conditional_rate(train, ThresholdClassifier::always_class0(), 1) == 1.0);
    CHECK(class_conditional_rate(train, ThresholdClassifier::always_class1(), 0) == 0.0);
    CHECK_THROWS((CostPair{-1.0, 1.0}.validate()));
}
