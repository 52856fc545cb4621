#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "quantkit/models.hpp"
#include "quantkit/numerics.hpp"

namespace quantkit {

class EnvelopeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LabeledDataset {
    std::vector<double> features;
    std::vector<std::uint8_t> labels;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    std::size_t size() const { return features.size(); }
    std::size_t count_label(std::uint8_t label) const;
};

/// Number of class-0 instances in a stratified sample: n * prevalence0 rounded half up.
std::size_t stratified_class0_count(std::size_t n, double prevalence0);

/// Exactly stratified_class0_count(n, p) class-0 rows followed by the class-1
/// rows, each feature drawn from its class-conditional density.
LabeledDataset stratified_sample(const PopulationModel& pop, std::size_t n, RngStream& stream);

struct AcceptRejectResult {
    std::vector<double> draws;
    std::size_t proposals = 0;

    double acceptance_rate() const
    {
        return proposals == 0 ? 0.0 : static_cast<double>(draws.size()) / proposals;
    }
};

/// Accept x ~ candidate with probability target(x) / (M candidate_density(x)).
AcceptRejectResult accept_reject_sample(const std::function<double(double)>& target,
                                        const std::function<double(RngStream&)>& candidate_sampler,
                                        const std::function<double(double)>& candidate_density,
                                        double envelope, std::size_t count, RngStream& stream);

/// One draw from a class-conditional density. Normals are sampled exactly;
/// decomposition components by accept-reject against their base density.
double sample_density(const ConditionalDensity& density, RngStream& stream);

std::vector<double> sample_density(const ConditionalDensity& density, std::size_t count,
                                   RngStream& stream);

/// CSV with header "feature,label"; features in shortest round-trip decimal form.
void write_dataset_csv(const LabeledDataset& data, std::ostream& out);

} // namespace quantkit
