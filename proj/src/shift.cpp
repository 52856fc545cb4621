#include "quantkit/shift.hpp"

#include <algorithm>
#include <cmath>

namespace quantkit {

namespace {

constexpr double existence_margin = 1e-9;
constexpr double weight_tolerance = 1e-12;

} // namespace

const char* to_string(ShiftKind kind)
{
    switch (kind) {
    case ShiftKind::PriorShift: return "prior";
    case ShiftKind::InvariantRatio: return "invariant";
    case ShiftKind::SqrtRatio: return "sqrt";
    }
    return "unknown";
}

ShiftKind parse_shift_kind(const std::string& text)
{
    if (text == "prior" || text == "PriorShift") return ShiftKind::PriorShift;
    if (text == "invariant" || text == "InvariantRatio") return ShiftKind::InvariantRatio;
    if (text == "sqrt" || text == "SqrtRatio") return ShiftKind::SqrtRatio;
    throw std::invalid_argument("unknown scenario '" + text + "' (expected prior, invariant or sqrt)");
}

double solve_mixture_weight(const NormalMixture& base, const DensityRatio& ratio,
                            const QuadratureSpec& spec)
{
    const SupportHint hint = base.hint();
    const double mean_ratio = integrate_real_line(
        [&](double x) { return ratio.eval(x) * base.pdf(x); }, hint, spec);
    const double mean_inverse = integrate_real_line(
        [&](double x) { return base.pdf(x) / ratio.eval(x); }, hint, spec);
    if (!(mean_ratio > 1.0 + existence_margin)) {
        throw NoInteriorSolution("no interior mixture weight: E[R] = " + std::to_string(mean_ratio) +
                                 " is not greater than 1");
    }
    if (!(mean_inverse > 1.0 + existence_margin)) {
        throw NoInteriorSolution("no interior mixture weight: E[1/R] = " +
                                 std::to_string(mean_inverse) + " is not greater than 1");
    }
    const auto score = [&](double q) {
        return integrate_real_line(
            [&](double x) { return mixture_score_term(ratio.log_eval(x), q) * base.pdf(x); }, hint,
            spec);
    };
    return find_root_bracketed(score, {1e-10, 1.0 - 1e-10}, weight_tolerance);
}

MixtureDecomposition decompose_mixture(const NormalMixture& base, const DensityRatio& ratio,
                                       const QuadratureSpec& spec)
{
    const double q = solve_mixture_weight(base, ratio, spec);
    return {q, MixtureComponentDensity(base, ratio, q, 0, 2048, spec),
            MixtureComponentDensity(base, ratio, q, 1, 2048, spec)};
}

PopulationModel make_test_population(const ShiftScenario& scenario, const QuadratureSpec& spec)
{
    if (!(scenario.test_prevalence0 > 0.0 && scenario.test_prevalence0 < 1.0)) {
        throw std::invalid_argument("test prevalence must lie strictly between 0 and 1");
    }
    if (scenario.kind == ShiftKind::PriorShift) {
        return scenario.train.with_prevalence(scenario.test_prevalence0);
    }
    if (!(scenario.envelope_sd > 0.0)) throw std::invalid_argument("envelope sd must be positive");

    const DensityRatio& train_ratio = density_ratio(scenario.train);
    const DensityRatio target =
        scenario.kind == ShiftKind::SqrtRatio ? train_ratio.power(0.5) : train_ratio;
    const NormalMixture base(NormalDensity{scenario.envelope_mean, scenario.envelope_sd});
    MixtureDecomposition parts = decompose_mixture(base, target, spec);
    PopulationModel model{std::move(parts.h0), std::move(parts.h1), scenario.test_prevalence0,
                          target};
    model.validate();
    return model;
}

double covariate_shift_identity_check(const PopulationModel& train, const PopulationModel& test,
                                      double lo, double hi, int points)
{
    if (points < 2 || !(lo < hi)) throw std::invalid_argument("grid needs two points and lo < hi");
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        worst = std::max(worst, std::abs(train.posterior(x) - test.posterior(x)));
    }
    return worst;
}

} // namespace quantkit
