#include "quantkit/classify.hpp"

#include <cmath>
#include <limits>

namespace quantkit {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double probability_class0_side(const ConditionalDensity& density, const ThresholdClassifier& clf)
{
    if (clf.class0_side == Side::Below) {
        if (clf.cut == -inf) return 0.0;
        if (clf.cut == inf) return 1.0;
        return density.cdf(clf.cut);
    }
    if (clf.cut == inf) return 0.0;
    if (clf.cut == -inf) return 1.0;
    return 1.0 - density.cdf(clf.cut);
}

} // namespace

void CostPair::validate() const
{
    if (!(c0 >= 0.0) || !(c1 >= 0.0)) throw std::invalid_argument("costs must be non-negative");
    if (!(c0 + c1 > 0.0)) throw std::invalid_argument("costs must satisfy c0 + c1 > 0");
}

ThresholdClassifier ThresholdClassifier::always_class0()
{
    return {inf, Side::Below, 0.0};
}

ThresholdClassifier ThresholdClassifier::always_class1()
{
    return {-inf, Side::Below, 1.0};
}

int classify(const ThresholdClassifier& clf, double x)
{
    if (clf.class0_side == Side::Below) return x < clf.cut ? 0 : 1;
    return x > clf.cut ? 0 : 1;
}

ThresholdClassifier classifier_for_weights(const PopulationModel& train, double a0, double a1)
{
    if (!(a0 >= 0.0) || !(a1 >= 0.0) || !(a0 + a1 > 0.0)) {
        throw std::invalid_argument("region weights must be non-negative and not both zero");
    }
    if (a0 == 0.0) return ThresholdClassifier::always_class1();
    if (a1 == 0.0) return ThresholdClassifier::always_class0();

    const double p = train.prevalence0;
    // a1 f1 < a0 f0  <=>  P[Y=0|x] > a1 p / (a0 (1-p) + a1 p)
    const double threshold = a1 * p / (a0 * (1.0 - p) + a1 * p);
    const double c = a1 / a0;
    if (!std::isfinite(c) || c == 0.0) {
        return c == 0.0 ? ThresholdClassifier::always_class0()
                        : ThresholdClassifier::always_class1();
    }
    const RatioCut cut = density_ratio(train).invert_threshold(c);
    return {cut.x, cut.class0_side, threshold};
}

ThresholdClassifier bayes_classifier(const PopulationModel& train, const CostPair& costs)
{
    costs.validate();
    const double p = train.prevalence0;
    return classifier_for_weights(train, costs.c0 * p, costs.c1 * (1.0 - p));
}

ThresholdClassifier adapt_threshold(const PopulationModel& train, double estimated_test_prevalence0,
                                    const CostPair& costs)
{
    costs.validate();
    const double q = estimated_test_prevalence0;
    if (std::isnan(q)) throw std::invalid_argument("estimated prevalence is NaN");
    if (q <= 0.0) return ThresholdClassifier::always_class1();
    if (q >= 1.0) return ThresholdClassifier::always_class0();
    // Test-set Bayes rule under prior shift: c0 q f0 > c1 (1-q) f1.
    return classifier_for_weights(train, costs.c0 * q, costs.c1 * (1.0 - q));
}

double class_conditional_rate(const PopulationModel& model, const ThresholdClassifier& clf,
                              int label)
{
    return probability_class0_side(label == 0 ? model.class0 : model.class1, clf);
}

double cost_weighted_error(const PopulationModel& model, const ThresholdClassifier& clf,
                           double a0, double a1)
{
    return a0 * (1.0 - class_conditional_rate(model, clf, 0)) +
           a1 * class_conditional_rate(model, clf, 1);
}

} // namespace quantkit
