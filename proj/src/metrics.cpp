#include "quantkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quantkit {

namespace {

LabeledRates require_labels(const TestEvaluator& evaluator, const ThresholdClassifier& clf)
{
    auto rates = evaluator.labeled_rates(clf);
    if (!rates) throw std::logic_error("metric needs labels but the evaluator hides them");
    return *rates;
}

} // namespace

double relative_error(double true_q, double est_q)
{
    if (!(true_q > 0.0 && true_q < 1.0)) {
        throw std::invalid_argument("relative error needs a true prevalence in (0, 1)");
    }
    return std::abs(est_q - true_q) / std::min(true_q, 1.0 - true_q);
}

double accuracy(const TestEvaluator& evaluator, const ThresholdClassifier& clf)
{
    const LabeledRates r = require_labels(evaluator, clf);
    return r.prevalence0 * r.rate_given0 + (1.0 - r.prevalence0) * (1.0 - r.rate_given1);
}

std::optional<double> f_measure(const TestEvaluator& evaluator, const ThresholdClassifier& clf)
{
    const LabeledRates r = require_labels(evaluator, clf);
    const double true0 = r.prevalence0 * r.rate_given0;
    const double predicted0 = true0 + (1.0 - r.prevalence0) * r.rate_given1;
    if (predicted0 == 0.0) return std::nullopt;
    const double recall = r.rate_given0;
    const double precision = true0 / predicted0;
    if (recall + precision == 0.0) return 0.0;
    return 2.0 * recall * precision / (recall + precision);
}

MetricReport evaluate_estimate(const PopulationModel& train, const TestEvaluator& evaluator,
                               double true_q, double est_q, const CostPair& costs)
{
    const ThresholdClassifier clf = adapt_threshold(train, est_q, costs);
    return {relative_error(true_q, est_q), accuracy(evaluator, clf), f_measure(evaluator, clf)};
}

} // namespace quantkit
