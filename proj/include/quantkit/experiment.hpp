#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quantkit/metrics.hpp"
#include "quantkit/quantify.hpp"
#include "quantkit/shift.hpp"

namespace quantkit {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Panel { Population, Sample };
enum class OutputMetric { Prevalence, RelativeError, Accuracy, FMeasure };

const char* to_string(Panel panel);
const char* to_string(OutputMetric metric);
Panel parse_panel(const std::string& text);
OutputMetric parse_output_metric(const std::string& text);

struct ExperimentConfig {
    ShiftKind scenario = ShiftKind::PriorShift;
    BinormalParams binormal;
    double envelope_mean = 0.5;
    double envelope_sd = 1.4;
    double train_prevalence0 = 0.5;
    std::vector<double> test_prevalence_grid = {0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99};
    std::size_t sample_size = 10000;
    std::uint64_t seed = 42;
    std::vector<Panel> panels = {Panel::Population, Panel::Sample};
    std::vector<OutputMetric> outputs = {OutputMetric::Prevalence, OutputMetric::RelativeError,
                                         OutputMetric::Accuracy, OutputMetric::FMeasure};
    int repetitions = 1;
    CdeSettings cde;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Flat "key = value" document, '#' starts a comment. Unknown keys and
/// malformed values raise ConfigError with the line number.
ExperimentConfig parse_config(std::string_view text);

/// Row order of every result table.
inline constexpr const char* estimator_labels[] = {"CDE1", "CDE2", "CDEinf", "ACC", "EM"};
inline constexpr std::size_t estimator_count = 5;

struct ResultTable {
    std::string caption;
    ShiftKind scenario = ShiftKind::PriorShift;
    OutputMetric metric = OutputMetric::Prevalence;
    Panel panel = Panel::Population;
    std::vector<std::string> row_labels;
    std::vector<double> columns;                         // true test prevalences
    std::vector<std::vector<std::optional<double>>> cells; // [row][column]; nullopt renders "NaN"
};

/// All five estimates for one test distribution.
struct CellEstimates {
    PrevalenceEstimate cde;  // full trace; CDE1 = trace[0], CDE2 = trace[1]
    PrevalenceEstimate acc;
    PrevalenceEstimate em;

    double cde1() const { return cde.trace.at(0); }
    double cde2() const { return cde.trace.at(1); }
    double cde_limit() const { return cde.value; }
    /// Values in table row order.
    std::vector<double> values() const;
};

CellEstimates estimate_cell(const PopulationModel& train, const TestEvaluator& evaluator,
                            const TrainingRates& rates, const CdeSettings& cde = {});

/// Population-level test model of a scenario at the given prevalence; derived
/// kinds reuse one decomposition across prevalences.
class ScenarioModels {
public:
    explicit ScenarioModels(const ExperimentConfig& config);

    const PopulationModel& train() const { return train_; }
    PopulationModel test(double prevalence0) const { return test_base_.with_prevalence(prevalence0); }

private:
    PopulationModel train_;
    PopulationModel test_base_;
};

/// Stream id for the test sample of grid cell `cell` in repetition `rep`.
/// Stream 0 of each repetition is reserved for the training sample.
std::uint64_t sample_stream_id(ShiftKind scenario, int rep, std::size_t cell);
std::uint64_t training_stream_id(int rep);

std::vector<ResultTable> run_experiment(const ExperimentConfig& config);

enum class TableFormat { Csv, CsvFull, Markdown };

/// Csv: 4-decimal cells; CsvFull: 17 significant digits; Markdown mirrors the
/// CSV layout as a pipe table. Undefined cells are written as "NaN".
std::string emit_table(const ResultTable& table, TableFormat format);

/// "<scenario>_<metric>_<panel>.csv", "..._full.csv" or ".md".
std::string table_filename(const ResultTable& table, TableFormat format);

/// Parse a table written by emit_table (either CSV flavour). Metadata fields
/// other than the grid and cells must be supplied by the caller.
ResultTable parse_table_csv(std::string_view text);

/// Density grid for external plotting: x, training f0, f1, test h0, h1.
std::string density_grid_csv(const ExperimentConfig& config, double lo = -6.0, double hi = 8.0,
                             int points = 1001);

} // namespace quantkit
