#pragma once

#include <optional>

#include "quantkit/classify.hpp"
#include "quantkit/quantify.hpp"

namespace quantkit {

/// |est - true| / min(true, 1 - true); symmetric in the two classes and
/// finite for estimates of exactly 0 or 1.
double relative_error(double true_q, double est_q);

/// Q[g(X) = Y].
double accuracy(const TestEvaluator& evaluator, const ThresholdClassifier& clf);

/// Harmonic mean of recall Q[g=0|Y=0] and precision Q[Y=0|g=0].
/// nullopt ("NaN" in tables) when the classifier never predicts class 0.
std::optional<double> f_measure(const TestEvaluator& evaluator, const ThresholdClassifier& clf);

struct MetricReport {
    double relative_error;
    double accuracy;
    std::optional<double> f_measure;
};

/// Metrics of an estimate and of the training classifier adapted to it.
MetricReport evaluate_estimate(const PopulationModel& train, const TestEvaluator& evaluator,
                               double true_q, double est_q, const CostPair& costs = {});

} // namespace quantkit
