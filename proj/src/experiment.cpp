#include "quantkit/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace quantkit {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> items;
    std::string token;
    for (char c : value) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) items.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) items.push_back(token);
    return items;
}

double parse_double(const std::string& text)
{
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("'" + text + "' is not a number");
    }
    return value;
}

template <class Int>
Int parse_integer(const std::string& text)
{
    Int value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("'" + text + "' is not a non-negative integer");
    }
    return value;
}

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string grid_label(double q)
{
    const double hundredths = q * 100.0;
    if (std::abs(hundredths - std::round(hundredths)) < 1e-9) return fixed(q, 2);
    return shortest(q);
}

std::string cell_text(const std::optional<double>& cell, TableFormat format)
{
    if (!cell || std::isnan(*cell)) return "NaN";
    if (format == TableFormat::CsvFull) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *cell);
        return buf;
    }
    return fixed(*cell, 4);
}

const char* metric_caption(OutputMetric metric)
{
    switch (metric) {
    case OutputMetric::Prevalence: return "Class 0 prevalence estimates";
    case OutputMetric::RelativeError: return "Relative error of class 0 prevalence estimates";
    case OutputMetric::Accuracy: return "Classification accuracy of the adapted classifier";
    case OutputMetric::FMeasure: return "F-measure of the adapted classifier";
    }
    return "";
}

const char* scenario_caption(ShiftKind kind)
{
    switch (kind) {
    case ShiftKind::PriorShift: return "binormal with equal variances";
    case ShiftKind::InvariantRatio: return "non-normal densities, binormal density ratio";
    case ShiftKind::SqrtRatio: return "non-normal densities, square root of the binormal ratio";
    }
    return "";
}

struct MetricCells {
    std::array<double, estimator_count> estimate{};
    std::array<double, estimator_count> relative_error{};
    std::array<double, estimator_count> accuracy{};
    std::array<std::optional<double>, estimator_count> f_measure{};
};

MetricCells score_cell(const PopulationModel& train, const TestEvaluator& labelled,
                       const CellEstimates& est, double true_q)
{
    MetricCells out;
    const std::vector<double> values = est.values();
    for (std::size_t i = 0; i < estimator_count; ++i) {
        const MetricReport report = evaluate_estimate(train, labelled, true_q, values[i]);
        out.estimate[i] = values[i];
        out.relative_error[i] = report.relative_error;
        out.accuracy[i] = report.accuracy;
        out.f_measure[i] = report.f_measure;
    }
    return out;
}

// Mean over repetitions; an F-measure averages its defined values and stays
// undefined only if no repetition defines it.
MetricCells average(const std::vector<MetricCells>& reps)
{
    if (reps.size() == 1) return reps.front();
    MetricCells out;
    const double n = static_cast<double>(reps.size());
    for (std::size_t i = 0; i < estimator_count; ++i) {
        double sum_f = 0.0;
        int defined = 0;
        for (const auto& r : reps) {
            out.estimate[i] += r.estimate[i] / n;
            out.relative_error[i] += r.relative_error[i] / n;
            out.accuracy[i] += r.accuracy[i] / n;
            if (r.f_measure[i]) {
                sum_f += *r.f_measure[i];
                ++defined;
            }
        }
        if (defined > 0) out.f_measure[i] = sum_f / defined;
    }
    return out;
}

std::optional<double> metric_value(const MetricCells& cells, OutputMetric metric, std::size_t row)
{
    switch (metric) {
    case OutputMetric::Prevalence: return cells.estimate[row];
    case OutputMetric::RelativeError: return cells.relative_error[row];
    case OutputMetric::Accuracy: return cells.accuracy[row];
    case OutputMetric::FMeasure: return cells.f_measure[row];
    }
    return std::nullopt;
}

} // namespace

const char* to_string(Panel panel)
{
    return panel == Panel::Population ? "population" : "sample";
}

const char* to_string(OutputMetric metric)
{
    switch (metric) {
    case OutputMetric::Prevalence: return "prevalence";
    case OutputMetric::RelativeError: return "relative_error";
    case OutputMetric::Accuracy: return "accuracy";
    case OutputMetric::FMeasure: return "f_measure";
    }
    return "?";
}

Panel parse_panel(const std::string& text)
{
    if (text == "population") return Panel::Population;
    if (text == "sample") return Panel::Sample;
    throw std::invalid_argument("unknown panel '" + text + "' (expected population or sample)");
}

OutputMetric parse_output_metric(const std::string& text)
{
    if (text == "prevalence") return OutputMetric::Prevalence;
    if (text == "relative_error") return OutputMetric::RelativeError;
    if (text == "accuracy") return OutputMetric::Accuracy;
    if (text == "f_measure") return OutputMetric::FMeasure;
    throw std::invalid_argument("unknown output '" + text +
                                "' (expected prevalence, relative_error, accuracy or f_measure)");
}

void ExperimentConfig::validate() const
{
    if (!(binormal.sigma > 0.0)) throw ConfigError("sigma: must be positive");
    if (!(binormal.mu < binormal.nu)) throw ConfigError("mu, nu: mu must be less than nu");
    if (!(envelope_sd > 0.0)) throw ConfigError("tau: must be positive");
    if (!std::isfinite(envelope_mean)) throw ConfigError("theta: must be finite");
    if (!(train_prevalence0 > 0.0 && train_prevalence0 < 1.0)) {
        throw ConfigError("train_prevalence0: must lie strictly between 0 and 1");
    }
    if (test_prevalence_grid.empty()) throw ConfigError("test_prevalence_grid: must not be empty");
    for (std::size_t i = 0; i < test_prevalence_grid.size(); ++i) {
        const double q = test_prevalence_grid[i];
        if (!(q > 0.0 && q < 1.0)) {
            throw ConfigError("test_prevalence_grid: " + shortest(q) + " is not in (0, 1)");
        }
        if (i > 0 && !(q > test_prevalence_grid[i - 1])) {
            throw ConfigError("test_prevalence_grid: values must be strictly increasing");
        }
    }
    if (sample_size < 1) throw ConfigError("sample_size: must be at least 1");
    if (panels.empty()) throw ConfigError("panels: must name at least one panel");
    if (outputs.empty()) throw ConfigError("outputs: must name at least one output");
    if (repetitions < 1) throw ConfigError("repetitions: must be at least 1");
    if (cde.max_iter < 1) throw ConfigError("cde_max_iter: must be at least 1");
    if (!(cde.tol > 0.0)) throw ConfigError("cde_tol: must be positive");
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig config;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos) {
            throw ConfigError(where + "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(where + key + ": missing value");
        try {
            if (key == "scenario") config.scenario = parse_shift_kind(value);
            else if (key == "mu") config.binormal.mu = parse_double(value);
            else if (key == "nu") config.binormal.nu = parse_double(value);
            else if (key == "sigma") config.binormal.sigma = parse_double(value);
            else if (key == "theta") config.envelope_mean = parse_double(value);
            else if (key == "tau") config.envelope_sd = parse_double(value);
            else if (key == "train_prevalence0") config.train_prevalence0 = parse_double(value);
            else if (key == "test_prevalence_grid") {
                config.test_prevalence_grid.clear();
                for (const auto& item : split_list(value)) {
                    config.test_prevalence_grid.push_back(parse_double(item));
                }
            } else if (key == "sample_size") config.sample_size = parse_integer<std::size_t>(value);
            else if (key == "seed") config.seed = parse_integer<std::uint64_t>(value);
            else if (key == "panels") {
                config.panels.clear();
                for (const auto& item : split_list(value)) config.panels.push_back(parse_panel(item));
            } else if (key == "outputs") {
                config.outputs.clear();
                for (const auto& item : split_list(value)) {
                    config.outputs.push_back(parse_output_metric(item));
                }
            } else if (key == "repetitions") config.repetitions = parse_integer<int>(value);
            else if (key == "cde_max_iter") config.cde.max_iter = parse_integer<int>(value);
            else if (key == "cde_tol") config.cde.tol = parse_double(value);
            else throw std::invalid_argument("unknown key");
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
        try {
            config.validate();
        } catch (const ConfigError& e) {
            // Cross-field checks (mu < nu) may only settle once both keys are read.
            if (key != "mu" && key != "nu") throw ConfigError(where + e.what());
        }
    }
    config.validate();
    return config;
}

std::vector<double> CellEstimates::values() const
{
    return {cde1(), cde2(), cde_limit(), acc.value, em.value};
}

CellEstimates estimate_cell(const PopulationModel& train, const TestEvaluator& evaluator,
                            const TrainingRates& rates, const CdeSettings& cde)
{
    const ThresholdClassifier clf = bayes_classifier(train, CostPair{});
    return {cde_iterate(train, evaluator, cde), acc_estimate(evaluator, clf, rates.tpr, rates.fpr),
            em_estimate(evaluator, density_ratio(train))};
}

ScenarioModels::ScenarioModels(const ExperimentConfig& config)
    : train_(PopulationModel::binormal(config.binormal, config.train_prevalence0)),
      test_base_(make_test_population(
          ShiftScenario{config.scenario, train_, 0.5, config.envelope_mean, config.envelope_sd}))
{
}

std::uint64_t sample_stream_id(ShiftKind scenario, int rep, std::size_t cell)
{
    const auto kind = static_cast<std::uint64_t>(scenario) + 1;
    return (kind << 40) | (static_cast<std::uint64_t>(rep) << 20) | (cell + 1);
}

std::uint64_t training_stream_id(int rep)
{
    return static_cast<std::uint64_t>(rep) << 20;
}

std::vector<ResultTable> run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const ScenarioModels models(config);
    const PopulationModel& train = models.train();
    const ThresholdClassifier clf = bayes_classifier(train, CostPair{});
    const auto& grid = config.test_prevalence_grid;

    std::vector<ResultTable> tables;
    for (const Panel panel : config.panels) {
        std::vector<MetricCells> columns;
        columns.reserve(grid.size());

        std::vector<LabeledDataset> training_samples;
        if (panel == Panel::Sample) {
            for (int rep = 0; rep < config.repetitions; ++rep) {
                RngStream stream(config.seed, training_stream_id(rep));
                training_samples.push_back(stratified_sample(train, config.sample_size, stream));
            }
        }

        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double q = grid[j];
            const PopulationModel test = models.test(q);
            if (panel == Panel::Population) {
                const PopulationEvaluator evaluator(test);
                const CellEstimates est =
                    estimate_cell(train, evaluator, training_rates(train, clf), config.cde);
                columns.push_back(score_cell(train, evaluator, est, q));
                continue;
            }
            std::vector<MetricCells> reps;
            for (int rep = 0; rep < config.repetitions; ++rep) {
                RngStream stream(config.seed, sample_stream_id(config.scenario, rep, j));
                LabeledDataset data = stratified_sample(test, config.sample_size, stream);
                const SampleEvaluator hidden(data, true);
                const SampleEvaluator labelled(std::move(data), false);
                const CellEstimates est = estimate_cell(
                    train, hidden, training_rates(training_samples[rep], clf), config.cde);
                reps.push_back(score_cell(train, labelled, est, q));
            }
            columns.push_back(average(reps));
        }

        for (const OutputMetric metric : config.outputs) {
            ResultTable table;
            table.caption = std::string(metric_caption(metric)) + " on " +
                            (panel == Panel::Population ? "populations" : "samples") +
                            ". Training set: binormal with equal variances. Test sets: " +
                            scenario_caption(config.scenario) + ".";
            table.scenario = config.scenario;
            table.metric = metric;
            table.panel = panel;
            table.row_labels.assign(std::begin(estimator_labels), std::end(estimator_labels));
            table.columns = grid;
            table.cells.assign(estimator_count, {});
            for (std::size_t row = 0; row < estimator_count; ++row) {
                for (const auto& col : columns) {
                    table.cells[row].push_back(metric_value(col, metric, row));
                }
            }
            tables.push_back(std::move(table));
        }
    }
    return tables;
}

std::string emit_table(const ResultTable& table, TableFormat format)
{
    std::ostringstream out;
    const bool full = format == TableFormat::CsvFull;
    if (format == TableFormat::Markdown) {
        if (!table.caption.empty()) out << "**" << table.caption << "**\n\n";
        out << "| Q[Y=0] |";
        for (double q : table.columns) out << ' ' << grid_label(q) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < table.columns.size(); ++i) out << "---:|";
        out << '\n';
        for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
            const std::string& label = table.row_labels[r];
            out << "| " << (label == "CDEinf" ? "CDE∞" : label) << " |";
            for (const auto& cell : table.cells[r]) out << ' ' << cell_text(cell, format) << " |";
            out << '\n';
        }
        return out.str();
    }
    out << "Q[Y=0]";
    for (double q : table.columns) out << ',' << (full ? shortest(q) : grid_label(q));
    out << '\n';
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out << table.row_labels[r];
        for (const auto& cell : table.cells[r]) out << ',' << cell_text(cell, format);
        out << '\n';
    }
    return out.str();
}

std::string table_filename(const ResultTable& table, TableFormat format)
{
    std::string stem = std::string(to_string(table.scenario)) + "_" + to_string(table.metric) +
                       "_" + to_string(table.panel);
    switch (format) {
    case TableFormat::Csv: return stem + ".csv";
    case TableFormat::CsvFull: return stem + "_full.csv";
    case TableFormat::Markdown: return stem + ".md";
    }
    return stem;
}

ResultTable parse_table_csv(std::string_view text)
{
    ResultTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("table CSV is empty");
    auto fields = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : l) {
            if (c == ',') {
                out.push_back(trim(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        out.push_back(trim(cur));
        return out;
    };
    const auto header = fields(line);
    if (header.empty() || header.front() != "Q[Y=0]") {
        throw std::invalid_argument("table CSV must start with a Q[Y=0] header");
    }
    for (std::size_t i = 1; i < header.size(); ++i) table.columns.push_back(parse_double(header[i]));
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto row = fields(line);
        if (row.size() != header.size()) {
            throw std::invalid_argument("table row '" + row.front() + "' has the wrong width");
        }
        table.row_labels.push_back(row.front());
        std::vector<std::optional<double>> cells;
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i] == "NaN") cells.emplace_back(std::nullopt);
            else cells.emplace_back(parse_double(row[i]));
        }
        table.cells.push_back(std::move(cells));
    }
    return table;
}

std::string density_grid_csv(const ExperimentConfig& config, double lo, double hi, int points)
{
    config.validate();
    if (points < 2 || !(lo < hi)) throw std::invalid_argument("density grid needs two points and lo < hi");
    const ScenarioModels models(config);
    const PopulationModel& train = models.train();
    const PopulationModel test = models.test(0.5);
    std::ostringstream out;
    out << "x,train_f0,train_f1,test_h0,test_h1\n";
    char buf[160];
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, train.pdf0(x),
                      train.pdf1(x), test.pdf0(x), test.pdf1(x));
        out << buf;
    }
    return out.str();
}

} // namespace quantkit
