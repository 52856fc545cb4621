#pragma once

#include "quantkit/models.hpp"

namespace quantkit {

/// c0: cost of predicting 1 when the true class is 0.
/// c1: cost of predicting 0 when the true class is 1.
struct CostPair {
    double c0 = 1.0;
    double c1 = 1.0;

    void validate() const;
};

/// "Class 0 iff x lies on `class0_side` of `cut`". Constant classifiers use an
/// infinite cut. Points exactly on the cut go to class 1.
struct ThresholdClassifier {
    double cut;
    Side class0_side;
    /// Threshold on the training posterior P[Y=0|x] that this rule realizes.
    double posterior_threshold;

    static ThresholdClassifier always_class0();
    static ThresholdClassifier always_class1();

    bool is_constant() const { return std::isinf(cut); }
};

int classify(const ThresholdClassifier& clf, double x);

/// Region {a1 f1 < a0 f0} of the training model as a cut-point rule.
/// a0 = 0 gives the empty region (always class 1); a1 = 0 the full one.
ThresholdClassifier classifier_for_weights(const PopulationModel& train, double a0, double a1);

/// Cost-weighted Bayes classifier with a0 = c0 P[Y=0], a1 = c1 P[Y=1];
/// equivalently P[Y=0|x] > c1 / (c0 + c1).
ThresholdClassifier bayes_classifier(const PopulationModel& train, const CostPair& costs);

/// Bayes classifier for a test set whose class-0 prevalence is believed to be
/// `estimated_test_prevalence0`, assuming prior probability shift. Estimates
/// at or below 0 give the always-class-1 rule; at or above 1 the always-class-0 rule.
ThresholdClassifier adapt_threshold(const PopulationModel& train, double estimated_test_prevalence0,
                                    const CostPair& costs = {});

/// a0 P0[g = 1] + a1 P1[g = 0] for a cut-point rule, from the class CDFs.
double cost_weighted_error(const PopulationModel& model, const ThresholdClassifier& clf,
                           double a0, double a1);

/// P[g(X) = 0 | Y = label] for a cut-point rule.
double class_conditional_rate(const PopulationModel& model, const ThresholdClassifier& clf,
                              int label);

} // namespace quantkit
