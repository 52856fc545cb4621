#include "quantkit/quantify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quantkit {

namespace {

double ratio(std::size_t num, std::size_t den)
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Count of sorted values on the class-0 side of the rule.
std::size_t count_class0(const std::vector<double>& sorted, const ThresholdClassifier& clf)
{
    if (clf.class0_side == Side::Below) {
        return static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), clf.cut) - sorted.begin());
    }
    return static_cast<std::size_t>(sorted.end() -
                                    std::upper_bound(sorted.begin(), sorted.end(), clf.cut));
}

} // namespace

PopulationEvaluator::PopulationEvaluator(PopulationModel model, QuadratureSpec spec)
    : model_(std::move(model)), spec_(spec)
{
    model_.validate();
    spec_.validate();
}

double PopulationEvaluator::predict_class0_rate(const ThresholdClassifier& clf) const
{
    const double q = model_.prevalence0;
    return q * class_conditional_rate(model_, clf, 0) +
           (1.0 - q) * class_conditional_rate(model_, clf, 1);
}

double PopulationEvaluator::expect(const std::function<double(double)>& fn) const
{
    const double q = model_.prevalence0;
    const double e0 = integrate_real_line([&](double x) { return fn(x) * model_.pdf0(x); },
                                          model_.class0.hint(), spec_);
    const double e1 = integrate_real_line([&](double x) { return fn(x) * model_.pdf1(x); },
                                          model_.class1.hint(), spec_);
    return q * e0 + (1.0 - q) * e1;
}

std::optional<LabeledRates> PopulationEvaluator::labeled_rates(const ThresholdClassifier& clf) const
{
    return LabeledRates{model_.prevalence0, class_conditional_rate(model_, clf, 0),
                        class_conditional_rate(model_, clf, 1)};
}

SampleEvaluator::SampleEvaluator(LabeledDataset data, bool labels_hidden)
    : data_(std::move(data)), labels_hidden_(labels_hidden), sorted_(data_.features)
{
    if (data_.features.empty()) throw std::invalid_argument("sample evaluator needs data");
    if (data_.labels.size() != data_.features.size()) {
        throw std::invalid_argument("features and labels differ in length");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double SampleEvaluator::predict_class0_rate(const ThresholdClassifier& clf) const
{
    return ratio(count_class0(sorted_, clf), sorted_.size());
}

double SampleEvaluator::expect(const std::function<double(double)>& fn) const
{
    // Summed in the stored order so results do not depend on sorting.
    double sum = 0.0;
    for (double x : data_.features) sum += fn(x);
    return sum / static_cast<double>(data_.features.size());
}

std::optional<LabeledRates> SampleEvaluator::labeled_rates(const ThresholdClassifier& clf) const
{
    if (labels_hidden_) return std::nullopt;
    std::size_t n0 = 0, hit0 = 0, hit1 = 0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        const bool predicted0 = classify(clf, data_.features[i]) == 0;
        if (data_.labels[i] == 0) {
            ++n0;
            hit0 += predicted0;
        } else {
            hit1 += predicted0;
        }
    }
    return LabeledRates{ratio(n0, data_.size()), ratio(hit0, n0), ratio(hit1, data_.size() - n0)};
}

const char* to_string(Method method)
{
    switch (method) {
    case Method::CC: return "CDE1";
    case Method::CDE2: return "CDE2";
    case Method::CDEInf: return "CDEinf";
    case Method::ACC: return "ACC";
    case Method::EM: return "EM";
    }
    return "?";
}

const char* to_string(EstimateStatus status)
{
    switch (status) {
    case EstimateStatus::Converged: return "Converged";
    case EstimateStatus::MaxIterations: return "MaxIterations";
    case EstimateStatus::BoundaryLow: return "BoundaryLow";
    case EstimateStatus::BoundaryHigh: return "BoundaryHigh";
    case EstimateStatus::RawOutOfRange: return "RawOutOfRange";
    }
    return "?";
}

PrevalenceEstimate classify_and_count(const TestEvaluator& evaluator, const ThresholdClassifier& clf)
{
    return {evaluator.predict_class0_rate(clf), Method::CC, {}, EstimateStatus::Converged};
}

TrainingRates training_rates(const PopulationModel& train, const ThresholdClassifier& clf)
{
    return {class_conditional_rate(train, clf, 0), class_conditional_rate(train, clf, 1)};
}

TrainingRates training_rates(const LabeledDataset& train, const ThresholdClassifier& clf)
{
    std::size_t n0 = 0, hit0 = 0, hit1 = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        const bool predicted0 = classify(clf, train.features[i]) == 0;
        if (train.labels[i] == 0) {
            ++n0;
            hit0 += predicted0;
        } else {
            hit1 += predicted0;
        }
    }
    return {ratio(hit0, n0), ratio(hit1, train.size() - n0)};
}

PrevalenceEstimate acc_estimate(const TestEvaluator& evaluator, const ThresholdClassifier& clf,
                                double tpr, double fpr)
{
    if (std::abs(tpr - fpr) < 1e-12) {
        throw DegenerateClassifier("tpr and fpr coincide; classifier carries no information");
    }
    const double value = (evaluator.predict_class0_rate(clf) - fpr) / (tpr - fpr);
    const bool inside = value >= 0.0 && value <= 1.0;
    return {value, Method::ACC, {},
            inside ? EstimateStatus::Converged : EstimateStatus::RawOutOfRange};
}

PrevalenceEstimate em_estimate(const TestEvaluator& evaluator, const DensityRatio& r, double tol)
{
    const double mean_ratio = evaluator.expect([&](double x) { return r.eval(x); });
    if (!(mean_ratio > 1.0)) return {0.0, Method::EM, {}, EstimateStatus::BoundaryLow};
    const double mean_inverse = evaluator.expect([&](double x) { return 1.0 / r.eval(x); });
    if (!(mean_inverse > 1.0)) return {1.0, Method::EM, {}, EstimateStatus::BoundaryHigh};

    // Strictly decreasing in q: positive at 0 (E[R] - 1), negative at 1 (1 - E[1/R]).
    const auto score = [&](double q) {
        return evaluator.expect([&](double x) { return mixture_score_term(r.log_eval(x), q); });
    };
    const double q = find_root_bracketed(score, {0.0, 1.0}, tol);
    return {q, Method::EM, {}, EstimateStatus::Converged};
}

PrevalenceEstimate cde_iterate(const PopulationModel& train, const TestEvaluator& evaluator,
                               const CdeSettings& settings)
{
    if (settings.max_iter < 1) throw std::invalid_argument("CDE-Iterate needs max_iter >= 1");
    if (!(settings.tol > 0.0)) throw std::invalid_argument("CDE-Iterate needs tol > 0");

    std::vector<double> trace;
    trace.push_back(evaluator.predict_class0_rate(bayes_classifier(train, CostPair{})));
    for (int k = 0; k < settings.max_iter; ++k) {
        const double q = trace.back();
        const double next = evaluator.predict_class0_rate(classifier_for_weights(train, q, 1.0 - q));
        trace.push_back(next);
        if (next == q ||
            std::abs(next - q) <= settings.tol * std::min(next, 1.0 - next)) {
            return {next, Method::CDEInf, std::move(trace), EstimateStatus::Converged};
        }
    }
    const double last = trace.back();
    return {last, Method::CDEInf, std::move(trace), EstimateStatus::MaxIterations};
}

double fixed_point_residual(const PopulationModel& train, const TestEvaluator& evaluator, double q)
{
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("fixed-point residual needs q in (0, 1)");
    return evaluator.predict_class0_rate(classifier_for_weights(train, q, 1.0 - q)) - q;
}

} // namespace quantkit
