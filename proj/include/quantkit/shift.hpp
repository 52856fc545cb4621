#pragma once

#include <stdexcept>
#include <string>

#include "quantkit/models.hpp"

namespace quantkit {

/// The base density cannot be split into a mixture with the requested ratio.
class NoInteriorSolution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ShiftKind { PriorShift, InvariantRatio, SqrtRatio };

const char* to_string(ShiftKind kind);
ShiftKind parse_shift_kind(const std::string& text);

struct MixtureDecomposition {
    double q_star;
    MixtureComponentDensity h0;
    MixtureComponentDensity h1;
};

/// Mixture weight q solving  0 = E_base[(R - 1) / (1 + q (R - 1))].
/// Throws NoInteriorSolution unless E_base[R] > 1 and E_base[1/R] > 1.
double solve_mixture_weight(const NormalMixture& base, const DensityRatio& ratio,
                            const QuadratureSpec& spec = {});

/// Split `base` into q* h0 + (1 - q*) h1 with h0/h1 = ratio.
MixtureDecomposition decompose_mixture(const NormalMixture& base, const DensityRatio& ratio,
                                       const QuadratureSpec& spec = {});

struct ShiftScenario {
    ShiftKind kind = ShiftKind::PriorShift;
    PopulationModel train;
    double test_prevalence0 = 0.5;
    /// Mean and sd of the normal base density split by the derived kinds.
    double envelope_mean = 0.5;
    double envelope_sd = 1.4;
};

PopulationModel make_test_population(const ShiftScenario& scenario,
                                     const QuadratureSpec& spec = {});

/// Largest |P[Y=0|x] - Q[Y=0|x]| over `points` equally spaced x in [lo, hi].
/// Zero (to rounding) iff the two models share their posteriors there.
double covariate_shift_identity_check(const PopulationModel& train, const PopulationModel& test,
                                      double lo = -6.0, double hi = 8.0, int points = 1000);

} // namespace quantkit
