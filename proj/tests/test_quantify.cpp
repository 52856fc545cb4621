#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quantkit/quantify.hpp"
#include "quantkit/shift.hpp"

using namespace quantkit;

namespace {

const PopulationModel train = PopulationModel::binormal(BinormalParams{}, 0.5);
const ThresholdClassifier base = bayes_classifier(train, CostPair{});

PopulationEvaluator evaluator(ShiftKind kind, double q)
{
    static const PopulationModel inv = make_test_population({ShiftKind::InvariantRatio, train, 0.5});
    static const PopulationModel sq = make_test_population({ShiftKind::SqrtRatio, train, 0.5});
    switch (kind) {
    case ShiftKind::PriorShift: return PopulationEvaluator(train.with_prevalence(q));
    case ShiftKind::InvariantRatio: return PopulationEvaluator(inv.with_prevalence(q));
    case ShiftKind::SqrtRatio: return PopulationEvaluator(sq.with_prevalence(q));
    }
    throw std::logic_error("kind");
}

const double grid[] = {0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99};

} // namespace

TEST_CASE("classify and count on populations")
{
    // Q[g=0] = q Phi(1) + (1 - q) Phi(-1) under prior shift.
    const double q = 0.01;
    const double expected = q * oracle::Phi_1 + (1 - q) * oracle::Phi_minus_1;
    CHECK(classify_and_count(evaluator(ShiftKind::PriorShift, q), base).value ==
          doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::abs(classify_and_count(evaluator(ShiftKind::PriorShift, q), base).value - 0.1655) < 5e-5);
    CHECK(classify_and_count(evaluator(ShiftKind::PriorShift, 0.5), base).value == doctest::Approx(0.5));
    CHECK(std::abs(classify_and_count(evaluator(ShiftKind::InvariantRatio, 0.01), base).value - 0.1641) < 5e-5);
}

TEST_CASE("training rates")
{
    const TrainingRates r = training_rates(train, base);
    CHECK(r.tpr == doctest::Approx(oracle::Phi_1).epsilon(1e-14));
    CHECK(r.fpr == doctest::Approx(oracle::Phi_minus_1).epsilon(1e-13));
    const TrainingRates all0 = training_rates(train, ThresholdClassifier::always_class0());
    CHECK((all0.tpr == 1.0 && all0.fpr == 1.0));
    const TrainingRates all1 = training_rates(train, ThresholdClassifier::always_class1());
    CHECK((all1.tpr == 0.0 && all1.fpr == 0.0));

    LabeledDataset d;
    d.features = {0.0, 0.5, 2.0, 0.2, 3.0, 1.5};
    d.labels = {0, 0, 0, 1, 1, 1};
    const TrainingRates s = training_rates(d, base);
    CHECK(s.tpr == doctest::Approx(2.0 / 3.0));
    CHECK(s.fpr == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ACC is Fisher consistent under prior shift for any cut")
{
    for (double cut : {-0.5, 0.3, 1.0, 1.7, 2.6}) {
        const ThresholdClassifier clf{cut, Side::Below, 0.5};
        const TrainingRates r = training_rates(train, clf);
        for (double q : grid) {
            const auto est = acc_estimate(evaluator(ShiftKind::PriorShift, q), clf, r.tpr, r.fpr);
            CHECK(std::abs(est.value - q) < 1e-9);
        }
    }
}

TEST_CASE("ACC is not consistent under invariant-ratio shift")
{
    const TrainingRates r = training_rates(train, base);
    const auto est = acc_estimate(evaluator(ShiftKind::InvariantRatio, 0.5), base, r.tpr, r.fpr);
    CHECK(std::abs(est.value - 0.4859) < 5e-5);
    CHECK_THROWS_AS(acc_estimate(evaluator(ShiftKind::PriorShift, 0.5), base, 0.4, 0.4), DegenerateClassifier);
}

TEST_CASE("ACC keeps raw out-of-range values")
{
    LabeledDataset d;
    d.features = {5.0, 5.0, 5.0, 5.0};
    d.labels = {0, 1, 1, 1};
    const SampleEvaluator s(d, true);
    const auto est = acc_estimate(s, base, oracle::Phi_1, oracle::Phi_minus_1);
    CHECK(est.value < 0.0);
    CHECK(est.status == EstimateStatus::RawOutOfRange);
}

TEST_CASE("EM estimator")
{
    const DensityRatio& r = density_ratio(train);
    for (ShiftKind kind : {ShiftKind::PriorShift, ShiftKind::InvariantRatio}) {
        for (double q : grid) CHECK(std::abs(em_estimate(evaluator(kind, q), r).value - q) < 1e-8);
    }
    CHECK(std::abs(em_estimate(evaluator(ShiftKind::SqrtRatio, 0.01), r).value - 0.1307) < 5e-5);
    CHECK(std::abs(em_estimate(evaluator(ShiftKind::SqrtRatio, 0.3), r).value - 0.3500) < 5e-5);

    // Samples far on the class-1 side: E[R] <= 1 pins the estimate to 0.
    LabeledDataset d;
    d.features = {4.0, 5.0, 6.0};
    d.labels = {1, 1, 1};
    const auto low = em_estimate(SampleEvaluator(d, true), r);
    CHECK(low.value == 0.0);
    CHECK(low.status == EstimateStatus::BoundaryLow);
    d.features = {-4.0, -5.0, -6.0};
    const auto high = em_estimate(SampleEvaluator(d, true), r);
    CHECK(high.value == 1.0);
    CHECK(high.status == EstimateStatus::BoundaryHigh);
}

TEST_CASE("CDE-Iterate traces")
{
    const auto low = cde_iterate(train, evaluator(ShiftKind::PriorShift, 0.01));
    CHECK(std::abs(low.trace.at(0) - 0.1655) < 5e-5);
    CHECK(std::abs(low.trace.at(1) - 0.0406) < 5e-5);
    CHECK(low.value == 0.0);

    const auto mid = cde_iterate(train, evaluator(ShiftKind::PriorShift, 0.5));
    for (double v : mid.trace) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(std::abs(cde_iterate(train, evaluator(ShiftKind::SqrtRatio, 0.5)).value - 0.4859) < 5e-5);
    CHECK(std::abs(cde_iterate(train, evaluator(ShiftKind::PriorShift, 0.3)).value - 0.2389) < 5e-5);

    for (ShiftKind kind : {ShiftKind::PriorShift, ShiftKind::InvariantRatio, ShiftKind::SqrtRatio}) {
        for (double q : grid) {
            const auto est = cde_iterate(train, evaluator(kind, q));
            CHECK(est.status == EstimateStatus::Converged);
            const auto& t = est.trace;
            const bool up = std::is_sorted(t.begin() + 1, t.end());
            const bool down = std::is_sorted(t.rbegin(), t.rend() - 1);
            CHECK((up || down));
        }
    }
}

TEST_CASE("fixed-point residual")
{
    CHECK(std::abs(fixed_point_residual(train, evaluator(ShiftKind::PriorShift, 0.3), 0.2389)) < 1e-3);
    CHECK(std::abs(fixed_point_residual(train, evaluator(ShiftKind::PriorShift, 0.5), 0.5)) < 1e-14);

    // A sign change of the residual on a q-grid brackets every interior limit.
    for (ShiftKind kind : {ShiftKind::PriorShift, ShiftKind::InvariantRatio, ShiftKind::SqrtRatio}) {
        for (double q : {0.3, 0.5, 0.7}) {
            const auto ev = evaluator(kind, q);
            const double limit = cde_iterate(train, ev).value;
            bool bracketed = false;
            for (int i = 0; i < 100; ++i) {
                const double a = (i + 0.5) / 101.0, b = (i + 1.5) / 101.0;
                if (a <= limit && limit <= b) {
                    bracketed = fixed_point_residual(train, ev, a) * fixed_point_residual(train, ev, b) <= 0.0;
                }
            }
            CHECK(bracketed);
        }
    }
}

TEST_CASE("sample evaluator hides labels on request")
{
    LabeledDataset d;
    d.features = {0.0, 2.0, 0.5, 3.0};
    d.labels = {0, 1, 0, 1};
    const SampleEvaluator open(d), hidden(d, true);
    CHECK(open.labeled_rates(base).has_value());
    CHECK_FALSE(hidden.labeled_rates(base).has_value());
    CHECK(hidden.predict_class0_rate(base) == 0.5);
    CHECK(hidden.expect([](double x) { return x; }) == doctest::Approx(1.375));
    CHECK(to_string(Method::CC) == std::string("CDE1"));
}
