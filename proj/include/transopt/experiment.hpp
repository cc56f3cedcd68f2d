#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evolve.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "sampling.hpp"

namespace transopt::experiment {

// Canonical objective order; subsets are always reported in this order.
enum class Objective { cost, fill, lead };

inline const char* objective_name(Objective objective) {
    switch (objective) {
        case Objective::cost: return "cost";
        case Objective::fill: return "fill";
        case Objective::lead: return "lead";
    }
    return "?";
}

inline Objective objective_from_name(const std::string& name) {
    if (name == "cost") return Objective::cost;
    if (name == "fill") return Objective::fill;
    if (name == "lead") return Objective::lead;
    throw model::ValidationError("unknown objective '" + name + "' (expected cost, fill or lead)");
}

struct RunSettings {
    std::vector<Objective> objectives{Objective::cost, Objective::fill, Objective::lead};
    std::size_t scenario_count = 500;
    std::uint64_t scenario_seed = 42;
    bool resample_per_generation = false;
    std::string output_dir;  // empty: caller decides (CLI falls back to env or "out")
};

struct ExperimentSpec {
    model::SystemConfig system;
    evolve::SpeaParams spea;
    RunSettings run;
};

// One exported front member: stock levels plus the selected objectives in
// natural orientation with their standard errors.
struct FrontRecord {
    std::vector<double> genome;
    std::vector<double> values;
    std::vector<double> stderrs;
    std::size_t generation = 0;
};

struct FrontSummary {
    std::size_t count = 0;
    std::vector<Objective> objectives;
    std::vector<double> minimum;
    std::vector<double> maximum;
    double spread = 0.0;  // mean nearest-neighbour distance in normalized objective space
};

struct ExperimentResult {
    std::vector<Objective> objectives;
    std::vector<FrontRecord> front;                   // final archive, sorted by first objective
    std::vector<std::vector<FrontRecord>> snapshots;  // one sorted front per generation
    FrontSummary summary;
};

struct LandscapeRow {
    std::vector<double> genome;
    double cost = 0.0;
    double fill = 0.0;
    double lead = 0.0;
};

namespace detail {

inline model::SystemConfig symmetric_pair_system(double holding, double shortage, double mean, double std_dev,
                                                 double tau, double lead) {
    model::SystemConfig config;
    config.locations = {{holding, shortage, {mean, std_dev}}, {holding, shortage, {mean, std_dev}}};
    config.transship_cost = Matrix{{0.0, tau}, {tau, 0.0}};
    config.lead_time = Matrix{{0.0, lead}, {lead, 0.0}};
    config.period_duration = model::default_period_duration(config.lead_time);
    return config;
}

}  // namespace detail

// Named two-location benchmark systems. table1 is the base case (h=3, p=2,
// tau=0.5, L=5, demand N(100,20)); s1-s4 vary the cost structure and the
// demand spread, keeping tau and L from the base case.
inline model::SystemConfig preset_system(const std::string& name) {
    if (name == "table1") return detail::symmetric_pair_system(3.0, 2.0, 100.0, 20.0, 0.5, 5.0);
    if (name == "s1") return detail::symmetric_pair_system(4.0, 1.0, 100.0, 20.0, 0.5, 5.0);
    if (name == "s2") return detail::symmetric_pair_system(1.0, 4.0, 100.0, 20.0, 0.5, 5.0);
    if (name == "s3") return detail::symmetric_pair_system(1.0, 2.0, 100.0, 80.0, 0.5, 5.0);
    if (name == "s4") return detail::symmetric_pair_system(1.0, 2.0, 100.0, 5.0, 0.5, 5.0);
    throw model::ValidationError("unknown preset '" + name + "' (expected table1, s1, s2, s3 or s4)");
}

namespace detail {

using nlohmann::json;

inline void require_keys(const json& object, std::initializer_list<const char*> allowed, const char* section) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (key == name) known = true;
        if (!known)
            throw model::ValidationError("unknown key '" + key + "' in section '" + section + "'");
    }
}

inline double number_at(const json& object, const char* key, const char* section) {
    if (!object.contains(key))
        throw model::ValidationError(std::string("missing key '") + key + "' in section '" + section + "'");
    if (!object.at(key).is_number())
        throw model::ValidationError(std::string("key '") + key + "' in section '" + section + "' must be a number");
    return object.at(key).get<double>();
}

inline Matrix matrix_at(const json& object, const char* key, const char* section) {
    if (!object.contains(key))
        throw model::ValidationError(std::string("missing matrix '") + key + "' in section '" + section + "'");
    const json& rows = object.at(key);
    if (!rows.is_array() || rows.empty())
        throw model::ValidationError(std::string("matrix '") + key + "' must be a non-empty array of rows");
    Matrix result(rows.size(), rows.front().is_array() ? rows.front().size() : 0, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& row = rows.at(i);
        if (!row.is_array() || row.size() != result.cols())
            throw model::ValidationError(std::string("matrix '") + key + "' row " + std::to_string(i) +
                                         " has the wrong length");
        for (std::size_t j = 0; j < result.cols(); ++j) {
            if (!row.at(j).is_number())
                throw model::ValidationError(std::string("matrix '") + key + "' entry (" + std::to_string(i) +
                                             "," + std::to_string(j) + ") must be a number");
            result(i, j) = row.at(j).get<double>();
        }
    }
    return result;
}

inline model::SystemConfig parse_system(const json& node) {
    if (node.is_string()) return preset_system(node.get<std::string>());
    if (!node.is_object())
        throw model::ValidationError("section 'system' must be a preset name or an object");

    if (node.contains("preset")) {
        require_keys(node, {"preset", "period_duration"}, "system");
        auto config = preset_system(node.at("preset").get<std::string>());
        if (node.contains("period_duration"))
            config.period_duration = number_at(node, "period_duration", "system");
        return config;
    }

    require_keys(node, {"locations", "tau", "lead", "period_duration"}, "system");
    if (!node.contains("locations") || !node.at("locations").is_array() || node.at("locations").empty())
        throw model::ValidationError("section 'system' needs a non-empty 'locations' array");

    model::SystemConfig config;
    for (const json& entry : node.at("locations")) {
        if (!entry.is_object())
            throw model::ValidationError("each entry of 'locations' must be an object");
        require_keys(entry, {"holding_cost", "shortage_cost", "demand"}, "locations");
        model::LocationParams location;
        location.holding_cost = number_at(entry, "holding_cost", "locations");
        location.shortage_cost = number_at(entry, "shortage_cost", "locations");
        if (!entry.contains("demand") || !entry.at("demand").is_object())
            throw model::ValidationError("each location needs a 'demand' object");
        require_keys(entry.at("demand"), {"mean", "std_dev"}, "demand");
        location.demand.mean = number_at(entry.at("demand"), "mean", "demand");
        location.demand.std_dev = number_at(entry.at("demand"), "std_dev", "demand");
        config.locations.push_back(location);
    }
    config.transship_cost = matrix_at(node, "tau", "system");
    config.lead_time = matrix_at(node, "lead", "system");
    config.period_duration = node.contains("period_duration")
                                 ? number_at(node, "period_duration", "system")
                                 : model::default_period_duration(config.lead_time);
    return config;
}

inline void parse_spea(const json& node, evolve::SpeaParams& params) {
    require_keys(node,
                 {"population_size", "archive_size", "generations", "crossover_rate", "mutation_rate",
                  "eta_crossover", "eta_mutation", "s_max", "seed"},
                 "spea");
    if (node.contains("population_size"))
        params.population_size = static_cast<std::size_t>(number_at(node, "population_size", "spea"));
    if (node.contains("archive_size"))
        params.archive_size = static_cast<std::size_t>(number_at(node, "archive_size", "spea"));
    if (node.contains("generations"))
        params.generations = static_cast<std::size_t>(number_at(node, "generations", "spea"));
    if (node.contains("crossover_rate")) params.crossover_rate = number_at(node, "crossover_rate", "spea");
    if (node.contains("mutation_rate")) params.mutation_rate = number_at(node, "mutation_rate", "spea");
    if (node.contains("eta_crossover")) params.eta_crossover = number_at(node, "eta_crossover", "spea");
    if (node.contains("eta_mutation")) params.eta_mutation = number_at(node, "eta_mutation", "spea");
    if (node.contains("s_max")) params.genome_upper = number_at(node, "s_max", "spea");
    if (node.contains("seed")) params.seed = static_cast<std::uint64_t>(number_at(node, "seed", "spea"));
}

inline std::vector<Objective> normalize_objectives(std::vector<Objective> objectives) {
    std::sort(objectives.begin(), objectives.end());
    objectives.erase(std::unique(objectives.begin(), objectives.end()), objectives.end());
    if (objectives.size() < 2)
        throw model::ValidationError("a multiobjective run needs at least two distinct objectives");
    return objectives;
}

inline void parse_run(const json& node, RunSettings& run) {
    require_keys(node, {"objectives", "scenarios", "seed", "resample_per_generation", "output_dir"}, "run");
    if (node.contains("objectives")) {
        if (!node.at("objectives").is_array())
            throw model::ValidationError("'objectives' must be an array of names");
        std::vector<Objective> selected;
        for (const json& name : node.at("objectives")) {
            if (!name.is_string()) throw model::ValidationError("'objectives' entries must be strings");
            selected.push_back(objective_from_name(name.get<std::string>()));
        }
        run.objectives = normalize_objectives(std::move(selected));
    }
    if (node.contains("scenarios")) {
        run.scenario_count = static_cast<std::size_t>(number_at(node, "scenarios", "run"));
        if (run.scenario_count == 0) throw model::ValidationError("'scenarios' must be >= 1");
    }
    if (node.contains("seed")) run.scenario_seed = static_cast<std::uint64_t>(number_at(node, "seed", "run"));
    if (node.contains("resample_per_generation")) {
        if (!node.at("resample_per_generation").is_boolean())
            throw model::ValidationError("'resample_per_generation' must be a boolean");
        run.resample_per_generation = node.at("resample_per_generation").get<bool>();
    }
    if (node.contains("output_dir")) {
        if (!node.at("output_dir").is_string())
            throw model::ValidationError("'output_dir' must be a string");
        run.output_dir = node.at("output_dir").get<std::string>();
    }
}

}  // namespace detail

inline ExperimentSpec parse_experiment(const nlohmann::json& document) {
    if (!document.is_object()) throw model::ValidationError("experiment file must hold a JSON object");
    detail::require_keys(document, {"system", "spea", "run"}, "experiment");
    if (!document.contains("system"))
        throw model::ValidationError("experiment file needs a 'system' section");

    ExperimentSpec spec;
    spec.system = model::validate_config(detail::parse_system(document.at("system")));
    if (document.contains("spea")) detail::parse_spea(document.at("spea"), spec.spea);
    if (document.contains("run")) detail::parse_run(document.at("run"), spec.run);
    spec.spea.genome_length = spec.system.size();
    return spec;
}

inline ExperimentSpec load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw model::ValidationError("cannot open experiment file: " + path);
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(in);  // error messages carry line/column
    } catch (const nlohmann::json::parse_error& error) {
        throw model::ValidationError(path + ": " + error.what());
    }
    return parse_experiment(document);
}

inline evolve::Orientation orientation_for(const std::vector<Objective>& objectives) {
    evolve::Orientation orient;
    for (Objective objective : objectives)
        orient.push_back(objective == Objective::fill ? evolve::Sense::maximize : evolve::Sense::minimize);
    return orient;
}

inline std::vector<double> select_values(const sampling::ObjectiveEstimate& estimate,
                                         const std::vector<Objective>& objectives) {
    std::vector<double> values;
    for (Objective objective : objectives) {
        switch (objective) {
            case Objective::cost: values.push_back(estimate.cost_mean); break;
            case Objective::fill: values.push_back(estimate.fill_mean); break;
            case Objective::lead: values.push_back(estimate.lead_mean); break;
        }
    }
    return values;
}

inline std::vector<double> select_stderrs(const sampling::ObjectiveEstimate& estimate,
                                          const std::vector<Objective>& objectives) {
    std::vector<double> values;
    for (Objective objective : objectives) {
        switch (objective) {
            case Objective::cost: values.push_back(estimate.cost_stderr); break;
            case Objective::fill: values.push_back(estimate.fill_stderr); break;
            case Objective::lead: values.push_back(estimate.lead_stderr); break;
        }
    }
    return values;
}

// Adapts any genome -> full-estimate function into an engine evaluator that
// exposes only the selected objectives. Unselected estimates never reach the
// engine, so they cannot influence dominance decisions.
template <typename Estimator>
auto make_subset_evaluator(Estimator estimator, std::vector<Objective> objectives) {
    return [estimator = std::move(estimator), objectives = std::move(objectives)](
               const evolve::Genome& genome, std::size_t generation) {
        return select_values(estimator(genome, generation), objectives);
    };
}

inline FrontSummary summarize_front(const std::vector<FrontRecord>& front,
                                    const std::vector<Objective>& objectives) {
    if (front.empty()) throw std::invalid_argument("summarize_front: empty front");
    const std::size_t dims = objectives.size();
    FrontSummary summary;
    summary.count = front.size();
    summary.objectives = objectives;
    summary.minimum.assign(dims, std::numeric_limits<double>::infinity());
    summary.maximum.assign(dims, -std::numeric_limits<double>::infinity());
    for (const auto& record : front)
        for (std::size_t d = 0; d < dims; ++d) {
            summary.minimum[d] = std::min(summary.minimum[d], record.values[d]);
            summary.maximum[d] = std::max(summary.maximum[d], record.values[d]);
        }
    if (front.size() < 2) return summary;  // spread stays 0 for a single point

    auto coordinate = [&](const FrontRecord& record, std::size_t d) {
        const double width = summary.maximum[d] - summary.minimum[d];
        return width > 0.0 ? (record.values[d] - summary.minimum[d]) / width : 0.0;
    };
    double total_nearest = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < front.size(); ++j) {
            if (i == j) continue;
            double sq = 0.0;
            for (std::size_t d = 0; d < dims; ++d) {
                const double diff = coordinate(front[i], d) - coordinate(front[j], d);
                sq += diff * diff;
            }
            nearest = std::min(nearest, std::sqrt(sq));
        }
        total_nearest += nearest;
    }
    summary.spread = total_nearest / static_cast<double>(front.size());
    return summary;
}

namespace detail {

inline std::string format_value(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

inline void sort_records(std::vector<FrontRecord>& records) {
    std::sort(records.begin(), records.end(), [](const FrontRecord& a, const FrontRecord& b) {
        if (a.values != b.values) return a.values < b.values;
        return a.genome < b.genome;
    });
}

// Snapshot of one archive, re-estimated against the given pool so records
// carry standard errors, then sorted by the first objective.
inline std::vector<FrontRecord> archive_records(const model::SystemConfig& system,
                                                const std::vector<Objective>& objectives,
                                                const sampling::ScenarioSet& pool,
                                                const std::vector<evolve::Individual>& archive,
                                                std::size_t generation) {
    std::vector<FrontRecord> records;
    records.reserve(archive.size());
    for (const auto& individual : archive) {
        const auto estimate = sampling::estimate_objectives(system, model::BaseStock{individual.genome}, pool);
        FrontRecord record;
        record.genome = individual.genome;
        record.values = select_values(estimate, objectives);
        record.stderrs = select_stderrs(estimate, objectives);
        record.generation = generation;
        records.push_back(std::move(record));
    }
    sort_records(records);
    return records;
}

}  // namespace detail

// Wires the sampling estimator into the SPEA2 engine for the selected
// objective subset. Under common random numbers (the default) one scenario
// pool drawn from run.seed serves every evaluation, making the whole run a
// deterministic function of the seeds; with resample_per_generation each
// generation draws a fresh pool and archive members are re-evaluated with it.
inline ExperimentResult run_experiment(const ExperimentSpec& input) {
    ExperimentSpec spec = input;
    spec.system = model::validate_config(spec.system);
    spec.run.objectives = detail::normalize_objectives(spec.run.objectives);
    spec.spea.genome_length = spec.system.size();
    evolve::validate_params(spec.spea);

    const auto& objectives = spec.run.objectives;
    const auto orient = orientation_for(objectives);
    const auto base_pool = sampling::sample_scenarios(spec.system, spec.run.scenario_count, spec.run.scenario_seed);

    auto generation_pool_seed = [&](std::size_t generation) {
        return rng::substream_seed(spec.run.scenario_seed, 1 + generation);
    };

    struct PoolCache {
        bool valid = false;
        std::size_t generation = 0;
        sampling::ScenarioSet pool;
    };
    auto cache = std::make_shared<PoolCache>();
    auto evaluator = [&spec, &base_pool, &objectives, &generation_pool_seed, cache](
                         const evolve::Genome& genome, std::size_t generation) {
        const sampling::ScenarioSet* pool = &base_pool;
        if (spec.run.resample_per_generation) {
            if (!cache->valid || cache->generation != generation) {
                cache->pool = sampling::sample_scenarios(spec.system, spec.run.scenario_count,
                                                         generation_pool_seed(generation));
                cache->generation = generation;
                cache->valid = true;
            }
            pool = &cache->pool;
        }
        const auto estimate = sampling::estimate_objectives(spec.system, model::BaseStock{genome}, *pool);
        return select_values(estimate, objectives);
    };

    evolve::SpeaParams engine = spec.spea;
    engine.reevaluate_each_generation = spec.run.resample_per_generation;
    const auto outcome = evolve::run_spea2(engine, evaluator, orient);

    ExperimentResult result;
    result.objectives = objectives;
    for (const auto& record : outcome.history) {
        const sampling::ScenarioSet* pool = &base_pool;
        sampling::ScenarioSet resampled;
        if (spec.run.resample_per_generation) {
            resampled = sampling::sample_scenarios(spec.system, spec.run.scenario_count,
                                                   generation_pool_seed(record.generation));
            pool = &resampled;
        }
        result.snapshots.push_back(
            detail::archive_records(spec.system, objectives, *pool, record.archive, record.generation));
    }
    result.front = result.snapshots.back();
    result.summary = summarize_front(result.front, objectives);
    return result;
}

// Uniform random sample of the objective landscape over the genome box; the
// common pool from the run settings prices every sample point.
inline std::vector<LandscapeRow> sample_landscape(const ExperimentSpec& input, std::size_t count,
                                                  std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("sample_landscape: count must be >= 1");
    ExperimentSpec spec = input;
    spec.system = model::validate_config(spec.system);
    const auto pool = sampling::sample_scenarios(spec.system, spec.run.scenario_count, spec.run.scenario_seed);

    std::mt19937_64 gen(seed);
    std::vector<LandscapeRow> rows;
    rows.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        LandscapeRow row;
        row.genome.resize(spec.system.size());
        for (double& level : row.genome)
            level = rng::uniform_real(gen, spec.spea.genome_lower, spec.spea.genome_upper);
        const auto estimate = sampling::estimate_objectives(spec.system, model::BaseStock{row.genome}, pool);
        row.cost = estimate.cost_mean;
        row.fill = estimate.fill_mean;
        row.lead = estimate.lead_mean;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Comma-separated table: S_1..S_n, the selected objective means, their
// standard errors, and the snapshot generation. Values use 9 significant
// digits; rows come pre-sorted by the first objective.
inline void export_front(const std::vector<FrontRecord>& front, const std::vector<Objective>& objectives,
                         const std::string& path) {
    if (front.empty()) throw std::invalid_argument("export_front: empty front");
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw std::runtime_error("export_front: cannot write " + path);

    const std::size_t genes = front.front().genome.size();
    for (std::size_t g = 0; g < genes; ++g) out << "S_" << (g + 1) << ",";
    for (const Objective objective : objectives) out << objective_name(objective) << ",";
    for (const Objective objective : objectives) out << objective_name(objective) << "_stderr,";
    out << "generation\n";

    for (const auto& record : front) {
        for (double level : record.genome) out << detail::format_value(level) << ",";
        for (double value : record.values) out << detail::format_value(value) << ",";
        for (double value : record.stderrs) out << detail::format_value(value) << ",";
        out << record.generation << "\n";
    }
    out.flush();
    if (!out) throw std::runtime_error("export_front: write failed for " + path);
}

struct LoadedFront {
    std::vector<FrontRecord> records;
    std::vector<Objective> objectives;
};

// Parses a file produced by export_front (used by the summarize command and
// for round-trip checks).
inline LoadedFront read_front(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw model::ValidationError("cannot open front file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw model::ValidationError(path + ": empty file");

    std::vector<std::string> header;
    std::stringstream header_stream(line);
    std::string cell;
    while (std::getline(header_stream, cell, ',')) header.push_back(cell);

    LoadedFront loaded;
    std::size_t genes = 0;
    while (genes < header.size() && header[genes] == "S_" + std::to_string(genes + 1)) ++genes;
    std::size_t column = genes;
    while (column < header.size() && header[column] != "generation" &&
           header[column].find("_stderr") == std::string::npos) {
        loaded.objectives.push_back(objective_from_name(header[column]));
        ++column;
    }
    const std::size_t expected_columns = genes + 2 * loaded.objectives.size() + 1;
    if (genes == 0 || loaded.objectives.empty() || header.size() != expected_columns ||
        header.back() != "generation")
        throw model::ValidationError(path + ": unrecognized front header");

    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::stringstream row_stream(line);
        std::vector<std::string> cells;
        while (std::getline(row_stream, cell, ',')) cells.push_back(cell);
        if (cells.size() != expected_columns)
            throw model::ValidationError(path + ": line " + std::to_string(line_number) +
                                         " has the wrong number of columns");
        FrontRecord record;
        std::size_t at = 0;
        try {
            for (std::size_t g = 0; g < genes; ++g) record.genome.push_back(std::stod(cells[at++]));
            for (std::size_t d = 0; d < loaded.objectives.size(); ++d)
                record.values.push_back(std::stod(cells[at++]));
            for (std::size_t d = 0; d < loaded.objectives.size(); ++d)
                record.stderrs.push_back(std::stod(cells[at++]));
            record.generation = static_cast<std::size_t>(std::stoul(cells[at]));
        } catch (const std::exception&) {
            throw model::ValidationError(path + ": line " + std::to_string(line_number) + " is not numeric");
        }
        loaded.records.push_back(std::move(record));
    }
    if (loaded.records.empty()) throw model::ValidationError(path + ": no records");
    return loaded;
}

inline void export_landscape(const std::vector<LandscapeRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("export_landscape: no rows");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_landscape: cannot write " + path);
    const std::size_t genes = rows.front().genome.size();
    for (std::size_t g = 0; g < genes; ++g) out << "S_" << (g + 1) << ",";
    out << "cost,fill,lead\n";
    for (const auto& row : rows) {
        for (double level : row.genome) out << detail::format_value(level) << ",";
        out << detail::format_value(row.cost) << "," << detail::format_value(row.fill) << ","
            << detail::format_value(row.lead) << "\n";
    }
    out.flush();
    if (!out) throw std::runtime_error("export_landscape: write failed for " + path);
}

inline std::string render_summary(const FrontSummary& summary) {
    std::string text = "records " + std::to_string(summary.count) + "\n";
    for (std::size_t d = 0; d < summary.objectives.size(); ++d) {
        text += std::string(objective_name(summary.objectives[d])) + " min " +
                detail::format_value(summary.minimum[d]) + " max " + detail::format_value(summary.maximum[d]) +
                " extent " + detail::format_value(summary.maximum[d] - summary.minimum[d]) + "\n";
    }
    text += "spread " + detail::format_value(summary.spread) + "\n";
    return text;
}

// front.csv, solutions.csv (genomes only), snapshots/gen_<t>.csv and
// summary.txt under the given directory. Anything written before a failure is
// removed again so a broken run leaves no partial exports behind.
inline void write_outputs(const ExperimentResult& result, const std::string& directory) {
    namespace fs = std::filesystem;
    const fs::path root = directory;
    std::vector<fs::path> written;
    try {
        fs::create_directories(root / "snapshots");

        const fs::path front_path = root / "front.csv";
        export_front(result.front, result.objectives, front_path.string());
        written.push_back(front_path);

        const fs::path solutions_path = root / "solutions.csv";
        {
            std::ofstream out(solutions_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + solutions_path.string());
            const std::size_t genes = result.front.front().genome.size();
            for (std::size_t g = 0; g < genes; ++g) out << "S_" << (g + 1) << (g + 1 < genes ? "," : "\n");
            for (const auto& record : result.front) {
                for (std::size_t g = 0; g < genes; ++g)
                    out << detail::format_value(record.genome[g]) << (g + 1 < genes ? "," : "\n");
            }
            out.flush();
            if (!out) throw std::runtime_error("write failed for " + solutions_path.string());
        }
        written.push_back(solutions_path);

        for (const auto& snapshot : result.snapshots) {
            const fs::path snapshot_path =
                root / "snapshots" / ("gen_" + std::to_string(snapshot.front().generation) + ".csv");
            export_front(snapshot, result.objectives, snapshot_path.string());
            written.push_back(snapshot_path);
        }

        const fs::path summary_path = root / "summary.txt";
        {
            std::ofstream out(summary_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + summary_path.string());
            out << render_summary(result.summary);
            out.flush();
            if (!out) throw std::runtime_error("write failed for " + summary_path.string());
        }
        written.push_back(summary_path);
    } catch (...) {
        for (const auto& path : written) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }
}

}  // namespace transopt::experiment
