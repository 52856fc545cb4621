// Command-line front end: run experiments, re-render stored tables, check the
// population panels against the published values, export density grids.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quantkit/experiment.hpp"
#include "quantkit/reference_tables.hpp"

namespace fs = std::filesystem;
using namespace quantkit;

namespace {

enum ExitCode { Ok = 0, BadConfig = 1, NumericalFailure = 2, VerifyMismatch = 3 };

std::string read_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

ExperimentConfig load_config(const std::string& path)
{
    if (path.empty() || path == "-") return ExperimentConfig{};
    try {
        return parse_config(read_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

struct RunOptions {
    std::string config;
    std::string outdir;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string panel = "both";
    std::string scenario;
};

void apply_overrides(ExperimentConfig& config, const RunOptions& opt)
{
    if (opt.seed) config.seed = *opt.seed;
    if (!opt.scenario.empty()) config.scenario = parse_shift_kind(opt.scenario);
    if (opt.panel == "population") config.panels = {Panel::Population};
    else if (opt.panel == "sample") config.panels = {Panel::Sample};
    else config.panels = {Panel::Population, Panel::Sample};
}

int cmd_run(const RunOptions& opt)
{
    ExperimentConfig config = load_config(opt.config);
    apply_overrides(config, opt);
    config.validate();
    fs::create_directories(opt.outdir);
    for (const ResultTable& table : run_experiment(config)) {
        const fs::path dir(opt.outdir);
        write_file(dir / table_filename(table, TableFormat::CsvFull),
                   emit_table(table, TableFormat::CsvFull));
        if (opt.format == "csv" || opt.format == "all") {
            write_file(dir / table_filename(table, TableFormat::Csv), emit_table(table, TableFormat::Csv));
        }
        if (opt.format == "markdown" || opt.format == "all") {
            write_file(dir / table_filename(table, TableFormat::Markdown),
                       emit_table(table, TableFormat::Markdown));
        }
        std::cout << (dir / table_filename(table, TableFormat::Csv)).string() << '\n';
    }
    return Ok;
}

// "<scenario>_<metric>_<panel>_full.csv"; the metric may itself contain '_'.
std::optional<ResultTable> table_metadata(const std::string& filename)
{
    const std::string suffix = "_full.csv";
    if (filename.size() <= suffix.size() ||
        filename.compare(filename.size() - suffix.size(), suffix.size(), suffix) != 0) {
        return std::nullopt;
    }
    const std::string stem = filename.substr(0, filename.size() - suffix.size());
    const auto first = stem.find('_');
    const auto last = stem.rfind('_');
    if (first == std::string::npos || first == last) return std::nullopt;
    try {
        ResultTable meta;
        meta.scenario = parse_shift_kind(stem.substr(0, first));
        meta.metric = parse_output_metric(stem.substr(first + 1, last - first - 1));
        meta.panel = parse_panel(stem.substr(last + 1));
        return meta;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

int cmd_tables(const std::string& dir, const std::string& format, bool to_stdout)
{
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    int rendered = 0;
    for (const auto& path : files) {
        auto meta = table_metadata(path.filename().string());
        if (!meta) continue;
        ResultTable table = parse_table_csv(read_file(path));
        table.scenario = meta->scenario;
        table.metric = meta->metric;
        table.panel = meta->panel;
        const TableFormat fmt = format == "markdown" ? TableFormat::Markdown : TableFormat::Csv;
        if (fmt == TableFormat::Markdown) {
            table.caption = std::string(to_string(table.metric)) + ", " + to_string(table.scenario) +
                            " shift, " + to_string(table.panel) + " panel";
        }
        const std::string text = emit_table(table, fmt);
        if (to_stdout) {
            std::cout << "# " << path.filename().string() << '\n' << text << '\n';
        } else {
            write_file(path.parent_path() / table_filename(table, fmt), text);
        }
        ++rendered;
    }
    if (rendered == 0) {
        std::cerr << "no *_full.csv tables found in " << dir << '\n';
        return BadConfig;
    }
    return Ok;
}

int cmd_verify(bool verbose)
{
    bool all_ok = true;
    for (const ShiftKind kind : {ShiftKind::PriorShift, ShiftKind::InvariantRatio, ShiftKind::SqrtRatio}) {
        ExperimentConfig config;
        config.scenario = kind;
        config.panels = {Panel::Population};
        for (const ResultTable& table : run_experiment(config)) {
            const ReferenceTable* ref = find_reference(kind, table.metric);
            if (!ref) continue;
            // Published relative errors are derived from rounded estimates.
            const double tol = table.metric == OutputMetric::RelativeError ? 2e-3 : 1e-3;
            const auto mismatches = compare_to_reference(table, *ref, tol);
            std::printf("%-4s %-10s %-15s population  (%zu mismatching cells, tol %.0e)\n",
                        mismatches.empty() ? "PASS" : "FAIL", to_string(kind), to_string(table.metric),
                        mismatches.size(), tol);
            for (const auto& m : mismatches) {
                std::printf("       %-6s Q[Y=0]=%.2f published %.4f ours %.6f\n", m.row.c_str(),
                            m.prevalence, m.expected, m.actual);
            }
            if (verbose) std::cout << emit_table(table, TableFormat::Csv);
            all_ok = all_ok && mismatches.empty();
        }
    }
    return all_ok ? Ok : VerifyMismatch;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prevalence estimation under dataset shift: experiment harness"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Run an experiment and write its result tables");
    run->add_option("config", run_opt.config, "Config file ('-' for the defaults)")->required();
    run->add_option("outdir", run_opt.outdir, "Output directory")->required();
    run->add_option("--seed", run_opt.seed, "Override the RNG seed");
    run->add_option("--format", run_opt.format, "Extra outputs besides the full-precision CSV")
        ->check(CLI::IsMember({"csv", "markdown", "all"}));
    run->add_option("--panel", run_opt.panel, "Panels to compute")
        ->check(CLI::IsMember({"population", "sample", "both"}));
    run->add_option("--scenario", run_opt.scenario, "Override the shift scenario")
        ->check(CLI::IsMember({"prior", "invariant", "sqrt"}));

    std::string tables_dir;
    std::string tables_format = "markdown";
    bool tables_stdout = false;
    auto* tables = app.add_subcommand("tables", "Re-render stored *_full.csv tables");
    tables->add_option("dir", tables_dir, "Directory written by 'run'")->required();
    tables->add_option("--format", tables_format, "Rendering")->check(CLI::IsMember({"csv", "markdown"}));
    tables->add_flag("--stdout", tables_stdout, "Print instead of writing files");

    bool verify_verbose = false;
    auto* verify = app.add_subcommand("verify", "Compare population panels with the published tables");
    verify->add_flag("-v,--verbose", verify_verbose, "Also print the computed tables");

    std::string density_config;
    std::string density_out;
    std::string density_scenario;
    auto* density = app.add_subcommand("density", "Export a density grid CSV for plotting");
    density->add_option("config", density_config, "Config file ('-' for the defaults)")->required();
    density->add_option("output", density_out, "Output CSV path")->required();
    density->add_option("--scenario", density_scenario, "Override the shift scenario")
        ->check(CLI::IsMember({"prior", "invariant", "sqrt"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_opt);
        if (*tables) return cmd_tables(tables_dir, tables_format, tables_stdout);
        if (*verify) return cmd_verify(verify_verbose);
        if (*density) {
            ExperimentConfig config = load_config(density_config);
            if (!density_scenario.empty()) config.scenario = parse_shift_kind(density_scenario);
            write_file(density_out, density_grid_csv(config));
            return Ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return BadConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return NumericalFailure;
    }
    return Ok;
}
