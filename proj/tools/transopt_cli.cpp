// transopt: multiobjective base-stock optimization for multi-location
// inventory systems with lateral transshipment.
//
// Subcommands:
//   validate   parse a configuration (file or preset) and check every invariant
//   landscape  sample the (cost, fill, lead) surfaces over the stock box
//   optimize   run the SPEA2 search and export the Pareto front
//   summarize  print extent/spread statistics for an exported front
//
// Exit codes: 0 success, 1 configuration/validation error, 2 runtime failure.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <transopt/transopt.hpp>

namespace {

using namespace transopt;

struct SpecOptions {
    std::string config_path;
    std::string preset;
    std::vector<std::string> objectives;
    std::size_t scenarios = 0;  // 0: keep the spec's value
    bool scenario_seed_set = false;
    std::uint64_t scenario_seed = 0;
    bool spea_seed_set = false;
    std::uint64_t spea_seed = 0;
    std::size_t population = 0;
    std::size_t archive = 0;
    std::size_t generations = 0;
    double crossover_rate = -1.0;
    double mutation_rate = -1.0;
    double eta_crossover = -1.0;
    double eta_mutation = -1.0;
    double s_max = -1.0;
    bool resample = false;
    std::string output_dir;
};

void add_spec_options(CLI::App* cmd, SpecOptions& opts, bool with_run_options) {
    cmd->add_option("-c,--config", opts.config_path, "experiment file (JSON)");
    cmd->add_option("-p,--preset", opts.preset, "preset system: table1, s1, s2, s3, s4");
    if (with_run_options) {
        cmd->add_option("--objectives", opts.objectives,
                        "objective subset, e.g. --objectives cost fill (default: all three)")
            ->delimiter(',');
        cmd->add_option("-N,--scenarios", opts.scenarios, "scenario pool size per estimate");
        cmd->add_option("--scenario-seed", opts.scenario_seed, "seed of the common scenario pool")
            ->each([&opts](const std::string&) { opts.scenario_seed_set = true; });
        cmd->add_option("--spea-seed", opts.spea_seed, "seed of the evolutionary stream")
            ->each([&opts](const std::string&) { opts.spea_seed_set = true; });
        cmd->add_option("--population", opts.population, "population size");
        cmd->add_option("--archive", opts.archive, "archive size");
        cmd->add_option("--generations", opts.generations, "number of generations");
        cmd->add_option("--crossover-rate", opts.crossover_rate, "crossover probability in [0,1]");
        cmd->add_option("--mutation-rate", opts.mutation_rate, "per-gene mutation probability in [0,1]");
        cmd->add_option("--eta-crossover", opts.eta_crossover, "SBX distribution index");
        cmd->add_option("--eta-mutation", opts.eta_mutation, "polynomial mutation distribution index");
        cmd->add_option("--s-max", opts.s_max, "upper bound of every stock level");
        cmd->add_flag("--resample-per-generation", opts.resample,
                      "draw a fresh scenario pool every generation instead of common random numbers");
        cmd->add_option("-o,--output", opts.output_dir,
                        "output directory (default: config value, then $TRANSOPT_OUTPUT_DIR, then ./out)");
    }
}

experiment::ExperimentSpec build_spec(const SpecOptions& opts) {
    if (!opts.config_path.empty() && !opts.preset.empty())
        throw model::ValidationError("give either --config or --preset, not both");
    if (opts.config_path.empty() && opts.preset.empty())
        throw model::ValidationError("one of --config or --preset is required");

    experiment::ExperimentSpec spec;
    if (!opts.config_path.empty()) {
        spec = experiment::load_experiment(opts.config_path);
    } else {
        spec.system = experiment::preset_system(opts.preset);
        spec.spea.genome_length = spec.system.size();
    }

    if (!opts.objectives.empty()) {
        std::vector<experiment::Objective> selected;
        for (const auto& name : opts.objectives) selected.push_back(experiment::objective_from_name(name));
        spec.run.objectives = selected;
    }
    if (opts.scenarios > 0) spec.run.scenario_count = opts.scenarios;
    if (opts.scenario_seed_set) spec.run.scenario_seed = opts.scenario_seed;
    if (opts.spea_seed_set) spec.spea.seed = opts.spea_seed;
    if (opts.population > 0) spec.spea.population_size = opts.population;
    if (opts.archive > 0) spec.spea.archive_size = opts.archive;
    if (opts.generations > 0) spec.spea.generations = opts.generations;
    if (opts.crossover_rate >= 0.0) spec.spea.crossover_rate = opts.crossover_rate;
    if (opts.mutation_rate >= 0.0) spec.spea.mutation_rate = opts.mutation_rate;
    if (opts.eta_crossover >= 0.0) spec.spea.eta_crossover = opts.eta_crossover;
    if (opts.eta_mutation >= 0.0) spec.spea.eta_mutation = opts.eta_mutation;
    if (opts.s_max > 0.0) spec.spea.genome_upper = opts.s_max;
    if (opts.resample) spec.run.resample_per_generation = true;
    if (!opts.output_dir.empty()) spec.run.output_dir = opts.output_dir;
    return spec;
}

std::string resolve_output_dir(const experiment::ExperimentSpec& spec) {
    if (!spec.run.output_dir.empty()) return spec.run.output_dir;
    if (const char* env = std::getenv("TRANSOPT_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
    return "out";
}

std::string describe_objectives(const std::vector<experiment::Objective>& objectives) {
    std::string text;
    for (const auto objective : objectives) {
        if (!text.empty()) text += "/";
        text += experiment::objective_name(objective);
    }
    return text;
}

int run_validate(const SpecOptions& opts) {
    const auto spec = build_spec(opts);
    model::validate_config(spec.system);  // load_experiment validated already; presets go through here too
    std::cout << "configuration OK: " << spec.system.size() << " locations, period "
              << spec.system.period_duration << ", objectives " << describe_objectives(spec.run.objectives)
              << ", N=" << spec.run.scenario_count << "\n";
    return 0;
}

int run_landscape(const SpecOptions& opts, std::size_t samples, std::uint64_t sample_seed) {
    const auto spec = build_spec(opts);
    const auto rows = experiment::sample_landscape(spec, samples, sample_seed);
    const auto dir = resolve_output_dir(spec);
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / "landscape.csv";
    experiment::export_landscape(rows, path.string());
    std::cout << "wrote " << rows.size() << " samples to " << path.string() << "\n";
    return 0;
}

int run_optimize(const SpecOptions& opts) {
    const auto spec = build_spec(opts);
    const auto result = experiment::run_experiment(spec);
    const auto dir = resolve_output_dir(spec);
    experiment::write_outputs(result, dir);
    std::cout << "objectives " << describe_objectives(result.objectives) << ", front of "
              << result.front.size() << " solutions -> " << dir << "\n"
              << experiment::render_summary(result.summary);
    return 0;
}

int run_summarize(const std::string& front_path) {
    const auto loaded = experiment::read_front(front_path);
    const auto summary = experiment::summarize_front(loaded.records, loaded.objectives);
    std::cout << experiment::render_summary(summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiobjective base-stock optimization with lateral transshipment"};
    app.require_subcommand(1);

    SpecOptions validate_opts;
    auto* validate_cmd = app.add_subcommand("validate", "check a configuration");
    add_spec_options(validate_cmd, validate_opts, true);

    SpecOptions landscape_opts;
    std::size_t samples = 30000;
    std::uint64_t sample_seed = 7;
    auto* landscape_cmd = app.add_subcommand("landscape", "sample the objective surfaces");
    add_spec_options(landscape_cmd, landscape_opts, true);
    landscape_cmd->add_option("--samples", samples, "number of random stock vectors");
    landscape_cmd->add_option("--sample-seed", sample_seed, "seed for the stock vector draws");

    SpecOptions optimize_opts;
    auto* optimize_cmd = app.add_subcommand("optimize", "approximate the Pareto front with SPEA2");
    add_spec_options(optimize_cmd, optimize_opts, true);

    std::string front_path;
    auto* summarize_cmd = app.add_subcommand("summarize", "summarize an exported front");
    summarize_cmd->add_option("front", front_path, "path to front.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate_cmd->parsed()) return run_validate(validate_opts);
        if (landscape_cmd->parsed()) return run_landscape(landscape_opts, samples, sample_seed);
        if (optimize_cmd->parsed()) return run_optimize(optimize_opts);
        if (summarize_cmd->parsed()) return run_summarize(front_path);
    } catch (const model::ValidationError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 0;
}
