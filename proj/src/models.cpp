#include "quantkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace quantkit {

void BinormalParams::validate() const
{
    if (!(sigma > 0.0)) throw std::invalid_argument("binormal sigma must be positive");
    if (!(mu < nu)) throw std::invalid_argument("binormal model requires mu < nu");
}

DensityRatio::DensityRatio(double slope, double intercept) : slope_(slope), intercept_(intercept)
{
    if (!std::isfinite(slope) || !std::isfinite(intercept) || slope == 0.0) {
        throw std::invalid_argument("density ratio needs a finite, non-zero log-slope");
    }
}

RatioCut DensityRatio::invert_threshold(double c) const
{
    if (!(c > 0.0)) {
        throw InvalidThreshold("density ratio threshold must be positive, got " + std::to_string(c));
    }
    const double x = (std::log(c) - intercept_) / slope_;
    return {x, slope_ < 0.0 ? Side::Below : Side::Above};
}

DensityRatio DensityRatio::power(double exponent) const
{
    return DensityRatio(exponent * slope_, exponent * intercept_);
}

DensityRatio binormal_density_ratio(const BinormalParams& params)
{
    params.validate();
    const double var = params.sigma * params.sigma;
    return DensityRatio((params.mu - params.nu) / var,
                        (params.nu * params.nu - params.mu * params.mu) / (2.0 * var));
}

double binormal_posterior(const BinormalParams& params, double prevalence0, double x)
{
    params.validate();
    const double var = params.sigma * params.sigma;
    const double a = (params.nu - params.mu) / var;
    const double b = (params.mu * params.mu - params.nu * params.nu) / (2.0 * var) +
                     std::log((1.0 - prevalence0) / prevalence0);
    return 1.0 / (1.0 + std::exp(a * x + b));
}

NormalMixture::NormalMixture(NormalDensity single) : components_{{1.0, single}} {}

NormalMixture::NormalMixture(std::vector<Component> components) : components_(std::move(components))
{
    if (components_.empty()) throw std::invalid_argument("normal mixture needs a component");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("mixture weights must be positive");
        if (!(c.density.sd > 0.0)) throw std::invalid_argument("mixture sd must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
}

double NormalMixture::pdf(double x) const
{
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * c.density.pdf(x);
    return sum;
}

double NormalMixture::cdf(double x) const
{
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * c.density.cdf(x);
    return sum;
}

SupportHint NormalMixture::hint() const
{
    double mean = 0.0;
    for (const auto& c : components_) mean += c.weight * c.density.mean;
    double var = 0.0;
    for (const auto& c : components_) {
        const double d = c.density.mean - mean;
        var += c.weight * (c.density.sd * c.density.sd + d * d);
    }
    return {mean, std::sqrt(var)};
}

MixtureComponentDensity::MixtureComponentDensity(NormalMixture base, DensityRatio ratio,
                                                 double q_star, int label,
                                                 std::size_t cdf_cells,
                                                 const QuadratureSpec& spec)
    : base_(std::move(base)), ratio_(ratio), q_star_(q_star), label_(label)
{
    if (!(q_star > 0.0 && q_star < 1.0)) {
        throw std::invalid_argument("mixture weight q* must lie in (0, 1)");
    }
    if (label != 0 && label != 1) throw std::invalid_argument("class label must be 0 or 1");
    if (cdf_cells < 16) throw std::invalid_argument("CDF table needs at least 16 cells");
    spec.validate();

    const SupportHint h = base_.hint();
    const double half = spec.truncation_halfwidth * h.scale;
    auto table = std::make_shared<CdfTable>();
    table->lo = h.center - half;
    table->cell_width = 2.0 * half / static_cast<double>(cdf_cells);
    table->cumulative.resize(cdf_cells + 1);
    table->cumulative[0] = 0.0;
    const auto density = [this](double x) { return pdf(x); };
    for (std::size_t i = 0; i < cdf_cells; ++i) {
        const double a = table->lo + static_cast<double>(i) * table->cell_width;
        table->cumulative[i + 1] =
            table->cumulative[i] + integrate_fixed(density, a, a + table->cell_width);
    }
    table_ = std::move(table);
}

double MixtureComponentDensity::pdf(double x) const
{
    const double base = base_.pdf(x);
    const double log_r = ratio_.log_eval(x);
    const double q = q_star_;
    // 1 + q(R - 1) rewritten so that exp() never overflows.
    if (log_r > 0.0) {
        const double inv_r = std::exp(-log_r);
        const double denom = q + (1.0 - q) * inv_r;
        return label_ == 0 ? base / denom : base * inv_r / denom;
    }
    const double r = std::exp(log_r);
    const double denom = (1.0 - q) + q * r;
    return label_ == 0 ? base * r / denom : base / denom;
}

double MixtureComponentDensity::cdf(double x) const
{
    const CdfTable& t = *table_;
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x <= t.lo) return 0.0;
    const double offset = (x - t.lo) / t.cell_width;
    const auto cells = t.cumulative.size() - 1;
    if (offset >= static_cast<double>(cells)) return t.cumulative.back();
    const auto i = static_cast<std::size_t>(offset);
    const double node = t.lo + static_cast<double>(i) * t.cell_width;
    const auto density = [this](double y) { return pdf(y); };
    return t.cumulative[i] + integrate_fixed(density, node, x);
}

double MixtureComponentDensity::envelope_constant() const
{
    return label_ == 0 ? 1.0 / q_star_ : 1.0 / (1.0 - q_star_);
}

double ConditionalDensity::pdf(double x) const
{
    return std::visit([x](const auto& d) { return d.pdf(x); }, impl_);
}

double ConditionalDensity::cdf(double x) const
{
    return std::visit([x](const auto& d) { return d.cdf(x); }, impl_);
}

SupportHint ConditionalDensity::hint() const
{
    return std::visit([](const auto& d) { return d.hint(); }, impl_);
}

PopulationModel PopulationModel::binormal(const BinormalParams& params, double prevalence0)
{
    params.validate();
    PopulationModel model{NormalDensity{params.mu, params.sigma},
                          NormalDensity{params.nu, params.sigma}, prevalence0,
                          binormal_density_ratio(params)};
    model.validate();
    return model;
}

PopulationModel PopulationModel::with_prevalence(double p) const
{
    PopulationModel copy = *this;
    copy.prevalence0 = p;
    copy.validate();
    return copy;
}

double PopulationModel::posterior(double x) const
{
    const double p = prevalence0;
    if (ratio) {
        // 1 / (1 + (1-p)/(p R)) in log space.
        const double log_odds1 = std::log((1.0 - p) / p) - ratio->log_eval(x);
        return 1.0 / (1.0 + std::exp(log_odds1));
    }
    const double w0 = p * pdf0(x);
    const double w1 = (1.0 - p) * pdf1(x);
    if (w0 + w1 == 0.0) return p;
    return w0 / (w0 + w1);
}

void PopulationModel::validate() const
{
    if (!(prevalence0 > 0.0 && prevalence0 < 1.0)) {
        throw std::invalid_argument("class-0 prevalence must lie strictly between 0 and 1");
    }
}

double marginal_density(const PopulationModel& pop, double x)
{
    return pop.prevalence0 * pop.pdf0(x) + (1.0 - pop.prevalence0) * pop.pdf1(x);
}

const DensityRatio& density_ratio(const PopulationModel& pop)
{
    if (!pop.ratio) throw std::logic_error("population model carries no closed-form density ratio");
    return *pop.ratio;
}

double normalization_defect(const PopulationModel& pop, const QuadratureSpec& spec)
{
    const double i0 = integrate_real_line([&](double x) { return pop.pdf0(x); },
                                          pop.class0.hint(), spec);
    const double i1 = integrate_real_line([&](double x) { return pop.pdf1(x); },
                                          pop.class1.hint(), spec);
    return std::max(std::abs(i0 - 1.0), std::abs(i1 - 1.0));
}

double mixture_score_term(double log_ratio, double q)
{
    if (log_ratio > 0.0) {
        const double inv_r = std::exp(-log_ratio);
        return (1.0 - inv_r) / (q + (1.0 - q) * inv_r);
    }
    const double r = std::exp(log_ratio);
    return (r - 1.0) / (1.0 + q * (r - 1.0));
}

std::pair<RealFunction, RealFunction> conditionals_from_posterior(RealFunction marginal,
                                                                  RealFunction posterior,
                                                                  double prevalence0)
{
    if (!(prevalence0 > 0.0 && prevalence0 < 1.0)) {
        throw std::invalid_argument("class-0 prevalence must lie strictly between 0 and 1");
    }
    RealFunction f0 = [marginal, posterior, prevalence0](double x) {
        return posterior(x) * marginal(x) / prevalence0;
    };
    RealFunction f1 = [marginal = std::move(marginal), posterior = std::move(posterior),
                       prevalence0](double x) {
        return (1.0 - posterior(x)) * marginal(x) / (1.0 - prevalence0);
    };
    return {std::move(f0), std::move(f1)};
}

} // namespace quantkit
