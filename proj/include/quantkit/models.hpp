#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "quantkit/numerics.hpp"

namespace quantkit {

class InvalidThreshold : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Equal-variance binormal training model: class 0 ~ N(mu, sigma^2),
/// class 1 ~ N(nu, sigma^2), with mu < nu.
struct BinormalParams {
    double mu = 0.0;
    double nu = 2.0;
    double sigma = 1.0;

    void validate() const;
};

/// Which side of a feature-space cut point carries class 0.
enum class Side { Below, Above };

struct RatioCut {
    double x;
    Side class0_side; // Below: "R > c  <=>  x < x";  Above: "R > c  <=>  x > x"
};

/// Density ratio R(x) = f0(x)/f1(x) of log-linear form log R(x) = slope*x + intercept.
/// Every ratio in scope (binormal, and its square root) has this shape.
class DensityRatio {
public:
    DensityRatio(double slope, double intercept);

    double eval(double x) const { return std::exp(log_eval(x)); }
    double log_eval(double x) const { return slope_ * x + intercept_; }

    /// Cut point x_c with R(x_c) = c, and the side on which R > c.
    RatioCut invert_threshold(double c) const;

    /// R^exponent; exponent 0.5 gives the square-root ratio.
    DensityRatio power(double exponent) const;

    double slope() const { return slope_; }
    double intercept() const { return intercept_; }

private:
    double slope_;
    double intercept_;
};

DensityRatio binormal_density_ratio(const BinormalParams& params);

/// P[Y=0 | X=x] of the binormal model in logistic form.
double binormal_posterior(const BinormalParams& params, double prevalence0, double x);

struct NormalDensity {
    double mean = 0.0;
    double sd = 1.0;

    double pdf(double x) const { return normal_pdf(x, mean, sd); }
    double cdf(double x) const { return normal_cdf(x, mean, sd); }
    SupportHint hint() const { return {mean, sd}; }
};

/// Finite mixture of normals. A single component is an ordinary normal.
class NormalMixture {
public:
    struct Component {
        double weight;
        NormalDensity density;
    };

    explicit NormalMixture(NormalDensity single);
    explicit NormalMixture(std::vector<Component> components);

    double pdf(double x) const;
    double cdf(double x) const;
    SupportHint hint() const;
    const std::vector<Component>& components() const { return components_; }

private:
    std::vector<Component> components_;
};

/// One class-conditional density of the mixture decomposition
/// base = q* h0 + (1 - q*) h1 with h0/h1 = ratio:
///   h0 = ratio*base / (1 + q*(ratio - 1)),  h1 = base / (1 + q*(ratio - 1)).
/// The CDF is served from a cumulative table over the truncated support,
/// refined inside the containing cell by a fixed 15-point rule.
class MixtureComponentDensity {
public:
    MixtureComponentDensity(NormalMixture base, DensityRatio ratio, double q_star, int label,
                            std::size_t cdf_cells = 2048, const QuadratureSpec& spec = {});

    double pdf(double x) const;
    double cdf(double x) const;
    SupportHint hint() const { return base_.hint(); }

    const NormalMixture& base() const { return base_; }
    const DensityRatio& ratio() const { return ratio_; }
    double q_star() const { return q_star_; }
    int label() const { return label_; }
    /// Upper bound M with pdf(x) <= M * base.pdf(x): 1/q* for class 0, 1/(1-q*) for class 1.
    double envelope_constant() const;

private:
    struct CdfTable {
        double lo;
        double cell_width;
        std::vector<double> cumulative; // cumulative[i] = integral of pdf over [lo, lo + i*w]
    };

    NormalMixture base_;
    DensityRatio ratio_;
    double q_star_;
    int label_;
    std::shared_ptr<const CdfTable> table_;
};

/// Type-erased class-conditional feature density.
class ConditionalDensity {
public:
    using Alternatives = std::variant<NormalDensity, NormalMixture, MixtureComponentDensity>;

    ConditionalDensity(NormalDensity d) : impl_(std::move(d)) {}
    ConditionalDensity(NormalMixture d) : impl_(std::move(d)) {}
    ConditionalDensity(MixtureComponentDensity d) : impl_(std::move(d)) {}

    double pdf(double x) const;
    double cdf(double x) const;
    SupportHint hint() const;
    const Alternatives& alternatives() const { return impl_; }

private:
    Alternatives impl_;
};

/// Joint law of (X, Y): two class-conditional densities and P[Y=0].
struct PopulationModel {
    ConditionalDensity class0;
    ConditionalDensity class1;
    double prevalence0;
    /// f0/f1 in closed form when known (binormal and decomposition-derived models).
    std::optional<DensityRatio> ratio;

    static PopulationModel binormal(const BinormalParams& params, double prevalence0);

    /// Same conditionals, different class-0 prevalence.
    PopulationModel with_prevalence(double prevalence0) const;

    double pdf0(double x) const { return class0.pdf(x); }
    double pdf1(double x) const { return class1.pdf(x); }
    double cdf0(double x) const { return class0.cdf(x); }
    double cdf1(double x) const { return class1.cdf(x); }
    /// P[Y=0 | X=x].
    double posterior(double x) const;

    void validate() const;
};

double marginal_density(const PopulationModel& pop, double x);

/// f0/f1 of the model; throws std::logic_error when no closed form is attached.
const DensityRatio& density_ratio(const PopulationModel& pop);

/// Normalization of both conditionals by quadrature; returns max |integral - 1|.
double normalization_defect(const PopulationModel& pop, const QuadratureSpec& spec = {});

/// (R - 1) / (1 + q (R - 1)) evaluated from log R without overflow. Its
/// expectation under a density h vanishes at the mixture weight of h.
double mixture_score_term(double log_ratio, double q);

using RealFunction = std::function<double(double)>;

/// Recover class-conditional densities from a marginal density and a posterior:
/// f0 = posterior*f/p, f1 = (1 - posterior)*f/(1 - p).
std::pair<RealFunction, RealFunction> conditionals_from_posterior(RealFunction marginal,
                                                                  RealFunction posterior,
                                                                  double prevalence0);

} // namespace quantkit
