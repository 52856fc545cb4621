#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "quantkit/classify.hpp"
#include "quantkit/models.hpp"
#include "quantkit/sampling.hpp"

namespace quantkit {

class DegenerateClassifier : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Labelled rates of a classifier on a test distribution.
struct LabeledRates {
    double prevalence0;    // Q[Y=0]
    double rate_given0;    // Q[g=0 | Y=0]
    double rate_given1;    // Q[g=0 | Y=1]
};

/// Probabilities and expectations under a test distribution Q, computed either
/// exactly from a population model or empirically from a sample.
class TestEvaluator {
public:
    virtual ~TestEvaluator() = default;

    /// Q[g(X) = 0].
    virtual double predict_class0_rate(const ThresholdClassifier& clf) const = 0;
    /// E_Q[fn(X)].
    virtual double expect(const std::function<double(double)>& fn) const = 0;
    /// Label-aware rates for evaluation metrics; nullopt when labels are hidden.
    virtual std::optional<LabeledRates> labeled_rates(const ThresholdClassifier& clf) const = 0;
};

class PopulationEvaluator final : public TestEvaluator {
public:
    explicit PopulationEvaluator(PopulationModel model, QuadratureSpec spec = {});

    double predict_class0_rate(const ThresholdClassifier& clf) const override;
    double expect(const std::function<double(double)>& fn) const override;
    std::optional<LabeledRates> labeled_rates(const ThresholdClassifier& clf) const override;

    const PopulationModel& model() const { return model_; }

private:
    PopulationModel model_;
    QuadratureSpec spec_;
};

/// Empirical evaluator. Estimation only ever touches the features; labels are
/// consulted by labeled_rates() unless hidden.
class SampleEvaluator final : public TestEvaluator {
public:
    explicit SampleEvaluator(LabeledDataset data, bool labels_hidden = false);

    double predict_class0_rate(const ThresholdClassifier& clf) const override;
    double expect(const std::function<double(double)>& fn) const override;
    std::optional<LabeledRates> labeled_rates(const ThresholdClassifier& clf) const override;

    std::size_t size() const { return data_.size(); }

private:
    LabeledDataset data_;
    bool labels_hidden_;
    std::vector<double> sorted_; // all features, ascending
};

enum class Method { CC, CDE2, CDEInf, ACC, EM };
enum class EstimateStatus { Converged, MaxIterations, BoundaryLow, BoundaryHigh, RawOutOfRange };

const char* to_string(Method method);
const char* to_string(EstimateStatus status);

struct PrevalenceEstimate {
    double value;
    Method method;
    std::vector<double> trace; // CDE-Iterate iterates q_0, q_1, ...
    EstimateStatus status;
};

/// Q[g(X) = 0] by counting (population: exact).
PrevalenceEstimate classify_and_count(const TestEvaluator& evaluator, const ThresholdClassifier& clf);

struct TrainingRates {
    double tpr; // P[g=0 | Y=0]
    double fpr; // P[g=0 | Y=1]
};

TrainingRates training_rates(const PopulationModel& train, const ThresholdClassifier& clf);
TrainingRates training_rates(const LabeledDataset& train, const ThresholdClassifier& clf);

/// Adjusted classify & count, (Q[g=0] - fpr) / (tpr - fpr). Never clamped.
PrevalenceEstimate acc_estimate(const TestEvaluator& evaluator, const ThresholdClassifier& clf,
                                double tpr, double fpr);

/// Root in (0, 1) of E_Q[(R - 1) / (1 + q (R - 1))]; 0 when E_Q[R] <= 1 and
/// 1 when E_Q[1/R] <= 1.
PrevalenceEstimate em_estimate(const TestEvaluator& evaluator, const DensityRatio& ratio,
                               double tol = 1e-12);

struct CdeSettings {
    int max_iter = 1000;
    double tol = 1e-8;
};

/// CDE-Iterate: q_0 is classify & count with the minimum-error Bayes
/// classifier of the training model; then q_{k+1} = Q[(1 - q_k) f1 < q_k f0]. Stops when
/// |q_{k+1} - q_k| <= tol * min(q_{k+1}, 1 - q_{k+1}), on an exact repeat,
/// or after max_iter steps. The boundary-relative rule lets traces that run
/// to 0 or 1 land there exactly.
PrevalenceEstimate cde_iterate(const PopulationModel& train, const TestEvaluator& evaluator,
                               const CdeSettings& settings = {});

/// Q[R(X) > (1 - q)/q] - q; zero at interior CDE-Iterate limits.
double fixed_point_residual(const PopulationModel& train, const TestEvaluator& evaluator, double q);

} // namespace quantkit
