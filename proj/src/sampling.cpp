#include "quantkit/sampling.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace quantkit {

namespace {

double sample_normal(const NormalDensity& d, RngStream& stream)
{
    return d.mean + d.sd * stream.next_gaussian();
}

double sample_mixture(const NormalMixture& m, RngStream& stream)
{
    const auto& parts = m.components();
    if (parts.size() == 1) return sample_normal(parts.front().density, stream);
    const double u = stream.next_uniform();
    double acc = 0.0;
    for (const auto& c : parts) {
        acc += c.weight;
        if (u < acc) return sample_normal(c.density, stream);
    }
    return sample_normal(parts.back().density, stream);
}

} // namespace

std::size_t LabeledDataset::count_label(std::uint8_t label) const
{
    std::size_t n = 0;
    for (auto l : labels) n += (l == label);
    return n;
}

std::size_t stratified_class0_count(std::size_t n, double prevalence0)
{
    if (!(prevalence0 >= 0.0 && prevalence0 <= 1.0)) {
        throw std::invalid_argument("prevalence must lie in [0, 1]");
    }
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * prevalence0 + 0.5));
}

AcceptRejectResult accept_reject_sample(const std::function<double(double)>& target,
                                        const std::function<double(RngStream&)>& candidate_sampler,
                                        const std::function<double(double)>& candidate_density,
                                        double envelope, std::size_t count, RngStream& stream)
{
    if (!(envelope >= 1.0) || !std::isfinite(envelope)) {
        throw std::invalid_argument("accept-reject envelope constant must be finite and >= 1");
    }
    AcceptRejectResult result;
    result.draws.reserve(count);
    while (result.draws.size() < count) {
        const double x = candidate_sampler(stream);
        const double u = stream.next_uniform();
        ++result.proposals;
        const double bound = envelope * candidate_density(x);
        const double value = target(x);
        if (value > bound * (1.0 + 1e-9)) {
            throw EnvelopeViolation("target exceeds envelope at x = " + std::to_string(x));
        }
        if (u * bound < value) result.draws.push_back(x);
    }
    return result;
}

double sample_density(const ConditionalDensity& density, RngStream& stream)
{
    return sample_density(density, 1, stream).front();
}

std::vector<double> sample_density(const ConditionalDensity& density, std::size_t count,
                                   RngStream& stream)
{
    struct Visitor {
        std::size_t count;
        RngStream& stream;

        std::vector<double> operator()(const NormalDensity& d) const
        {
            std::vector<double> out(count);
            for (auto& x : out) x = sample_normal(d, stream);
            return out;
        }
        std::vector<double> operator()(const NormalMixture& m) const
        {
            std::vector<double> out(count);
            for (auto& x : out) x = sample_mixture(m, stream);
            return out;
        }
        std::vector<double> operator()(const MixtureComponentDensity& c) const
        {
            const NormalMixture& base = c.base();
            return accept_reject_sample([&c](double x) { return c.pdf(x); },
                                        [&base](RngStream& s) { return sample_mixture(base, s); },
                                        [&base](double x) { return base.pdf(x); },
                                        c.envelope_constant(), count, stream)
                .draws;
        }
    };
    return std::visit(Visitor{count, stream}, density.alternatives());
}

LabeledDataset stratified_sample(const PopulationModel& pop, std::size_t n, RngStream& stream)
{
    if (n == 0) throw std::invalid_argument("sample size must be at least 1");
    const std::size_t n0 = stratified_class0_count(n, pop.prevalence0);
    LabeledDataset data;
    data.seed = stream.seed();
    data.stream_id = stream.stream_id();
    data.features = sample_density(pop.class0, n0, stream);
    const std::vector<double> rest = sample_density(pop.class1, n - n0, stream);
    data.features.insert(data.features.end(), rest.begin(), rest.end());
    data.labels.assign(n0, 0);
    data.labels.resize(n, 1);
    return data;
}

void write_dataset_csv(const LabeledDataset& data, std::ostream& out)
{
    out << "feature,label\n";
    char buf[64];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto res = std::to_chars(buf, buf + sizeof buf, data.features[i]);
        out.write(buf, res.ptr - buf);
        out << ',' << static_cast<int>(data.labels[i]) << '\n';
    }
}

} // namespace quantkit
