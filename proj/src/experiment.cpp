#include "mvfcm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mvfcm/pipelines.hpp"

namespace mvfcm {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

struct TrialOutcome {
    double accuracy = 0.0;
    double nmi = 0.0;
    double f_measure = 0.0;
    double seconds = 0.0;
    std::optional<std::string> error;
};

TrialOutcome run_trial(const MultiViewDataset& data, const RunConfig& config) {
    TrialOutcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto result = run_algorithm(data, config);
        const auto& truth = *data.labels();
        out.accuracy = accuracy(result.labels, truth);
        out.nmi = nmi(result.labels, truth);
        out.f_measure = f_measure(result.labels, truth);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(run.m > 1.0)) throw ConfigError("fuzzifier m must be > 1");
    if (!(run.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (run.max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (run.k < 1) throw ConfigError("k must be >= 1");
    if (!(run.gamma >= 0.0 && run.gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
    for (auto a : algorithms) {
        if ((a == Algorithm::IminimaxFCM1 || a == Algorithm::IminimaxFCM2) && run.gamma == 0.0) throw DegenerateGammaError();
    }
    for (double f : chunk_fractions) {
        if (!(f > 0.0 && f <= 1.0)) throw ConfigError("chunk fractions must lie in (0, 1], got " + exact(f));
    }
}

ExperimentSpec experiment_spec_from(const KeyValues& values, const std::filesystem::path& base_dir) {
    const auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    ExperimentSpec spec;
    for (const auto& [key, value] : values) {
        if (key == "views") {
            for (const auto& item : split_list(value)) spec.view_paths.push_back(resolve(item));
        } else if (key == "labels") {
            spec.label_path = resolve(value);
        } else if (key == "algorithms") {
            for (const auto& item : split_list(value)) spec.algorithms.push_back(parse_algorithm(item));
        } else if (key == "chunk_fractions") {
            for (const auto& item : split_list(value)) spec.chunk_fractions.push_back(parse_real_value(key, item));
        } else if (key == "trials") {
            spec.trials = parse_uint_value(key, value);
        } else if (key == "base_seed") {
            spec.base_seed = parse_uint_value(key, value);
        } else if (key == "k") {
            spec.run.k = parse_uint_value(key, value);
        } else if (key == "m") {
            spec.run.m = parse_real_value(key, value);
        } else if (key == "gamma") {
            spec.run.gamma = parse_real_value(key, value);
        } else if (key == "epsilon") {
            spec.run.epsilon = parse_real_value(key, value);
        } else if (key == "max_iters") {
            spec.run.max_iters = static_cast<int>(parse_uint_value(key, value));
        } else if (key == "normalize") {
            spec.run.normalize = parse_bool_value(key, value);
        } else if (key == "weighted_phase2") {
            spec.run.weighted_phase2 = parse_bool_value(key, value);
        } else if (key == "workers") {
            spec.run.workers = static_cast<unsigned>(parse_uint_value(key, value));
        } else {
            throw ConfigError("unknown experiment spec key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    return run_experiment(spec, load_multiview(spec.view_paths, spec.label_path));
}

ResultTable run_experiment(const ExperimentSpec& spec, const MultiViewDataset& data) {
    spec.validate();
    if (!data.labels()) throw DataError("experiments need ground-truth labels");

    struct Cell {
        Algorithm algorithm;
        double fraction;
    };
    std::vector<Cell> cells;
    for (auto a : spec.algorithms) {
        for (double f : spec.chunk_fractions) cells.push_back({a, f});
    }

    // Every (cell, trial) job writes its own slot, so the table does not depend
    // on the order in which workers finish.
    const std::size_t jobs = cells.size() * spec.trials;
    std::vector<TrialOutcome> outcomes(jobs);
    RunConfig base = spec.run;
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.run.workers, static_cast<unsigned>(jobs)));
    base.workers = 1;
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            RunConfig config = base;
            config.algorithm = cells[j / spec.trials].algorithm;
            config.chunk_fraction = cells[j / spec.trials].fraction;
            config.seed = spec.base_seed + j % spec.trials;
            outcomes[j] = run_trial(data, config);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    ResultTable table;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        ResultRow row;
        row.algorithm = cells[c].algorithm;
        row.chunk_fraction = cells[c].fraction;
        std::vector<double> acc, mi, fm;
        double seconds = 0.0;
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const auto& o = outcomes[c * spec.trials + t];
            seconds += o.seconds;
            if (o.error) {
                row.error = "trial " + std::to_string(t) + ": " + *o.error;
                break;
            }
            acc.push_back(o.accuracy);
            mi.push_back(o.nmi);
            fm.push_back(o.f_measure);
        }
        if (!row.error) {
            row.trials = spec.trials;
            row.accuracy = aggregate_trials(acc);
            row.nmi = aggregate_trials(mi);
            row.f_measure = aggregate_trials(fm);
            row.mean_seconds = seconds / static_cast<double>(spec.trials);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

TableFormat parse_table_format(std::string_view name) {
    if (name == "plain") return TableFormat::Plain;
    if (name == "csv") return TableFormat::Csv;
    if (name == "json") return TableFormat::Json;
    throw ConfigError("unknown table format '" + std::string(name) + "' (plain, csv, json)");
}

std::string emit_table(const ResultTable& table, TableFormat format, bool include_timing) {
    std::ostringstream out;
    switch (format) {
        case TableFormat::Plain: {
            char line[256];
            std::snprintf(line, sizeof line, "%-14s %-9s %-16s %-16s %-16s", "algorithm", "fraction", "accuracy", "nmi",
                          "f_measure");
            out << line << (include_timing ? " seconds" : "") << '\n';
            for (const auto& r : table.rows) {
                const auto cell = [](const TrialSummary& s) { return fixed(s.mean, 4) + "(" + fixed(s.stddev, 4) + ")"; };
                char frac[32];
                std::snprintf(frac, sizeof frac, "%g", r.chunk_fraction);
                if (r.error) {
                    std::snprintf(line, sizeof line, "%-14s %-9s ", std::string(to_string(r.algorithm)).c_str(), frac);
                    out << line << "FAILED " << *r.error << '\n';
                    continue;
                }
                std::snprintf(line, sizeof line, "%-14s %-9s %-16s %-16s %-16s", std::string(to_string(r.algorithm)).c_str(),
                              frac, cell(r.accuracy).c_str(), cell(r.nmi).c_str(), cell(r.f_measure).c_str());
                out << line;
                if (include_timing) out << ' ' << fixed(r.mean_seconds, 3);
                out << '\n';
            }
            break;
        }
        case TableFormat::Csv: {
            out << "algorithm,chunk_fraction,trials,accuracy_mean,accuracy_std,nmi_mean,nmi_std,f_measure_mean,f_measure_std";
            if (include_timing) out << ",mean_seconds";
            out << ",error\n";
            for (const auto& r : table.rows) {
                out << to_string(r.algorithm) << ',' << exact(r.chunk_fraction) << ',' << r.trials;
                for (const auto* s : {&r.accuracy, &r.nmi, &r.f_measure}) out << ',' << exact(s->mean) << ',' << exact(s->stddev);
                if (include_timing) out << ',' << exact(r.mean_seconds);
                out << ',' << csv_quote(r.error.value_or("")) << '\n';
            }
            break;
        }
        case TableFormat::Json: {
            auto rows = nlohmann::ordered_json::array();
            for (const auto& r : table.rows) {
                nlohmann::ordered_json row;
                row["algorithm"] = std::string(to_string(r.algorithm));
                row["chunk_fraction"] = r.chunk_fraction;
                row["trials"] = r.trials;
                row["accuracy"] = {{"mean", r.accuracy.mean}, {"std", r.accuracy.stddev}};
                row["nmi"] = {{"mean", r.nmi.mean}, {"std", r.nmi.stddev}};
                row["f_measure"] = {{"mean", r.f_measure.mean}, {"std", r.f_measure.stddev}};
                if (include_timing) row["mean_seconds"] = r.mean_seconds;
                row["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
                rows.push_back(std::move(row));
            }
            out << nlohmann::ordered_json{{"rows", rows}}.dump(2) << '\n';
            break;
        }
    }
    return out.str();
}

ResultTable parse_table_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty csv table");
    const auto header = csv_fields(line);
    const bool timing = std::find(header.begin(), header.end(), "mean_seconds") != header.end();
    const std::size_t expected = timing ? 11 : 10;
    if (header.size() != expected) throw DataError("unexpected csv table header");

    ResultTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv_fields(line);
        if (f.size() != expected) throw DataError("csv table row has " + std::to_string(f.size()) + " fields");
        ResultRow r;
        r.algorithm = parse_algorithm(f[0]);
        r.chunk_fraction = std::stod(f[1]);
        r.trials = std::stoul(f[2]);
        r.accuracy = {std::stod(f[3]), std::stod(f[4])};
        r.nmi = {std::stod(f[5]), std::stod(f[6])};
        r.f_measure = {std::stod(f[7]), std::stod(f[8])};
        if (timing) r.mean_seconds = std::stod(f[9]);
        if (!f.back().empty()) r.error = f.back();
        table.rows.push_back(std::move(r));
    }
    return table;
}

ResultTable parse_table_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed json table: ") + e.what());
    }
    ResultTable table;
    for (const auto& j : doc.at("rows")) {
        ResultRow r;
        r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        r.chunk_fraction = j.at("chunk_fraction").get<double>();
        r.trials = j.at("trials").get<std::size_t>();
        r.accuracy = {j.at("accuracy").at("mean").get<double>(), j.at("accuracy").at("std").get<double>()};
        r.nmi = {j.at("nmi").at("mean").get<double>(), j.at("nmi").at("std").get<double>()};
        r.f_measure = {j.at("f_measure").at("mean").get<double>(), j.at("f_measure").at("std").get<double>()};
        if (j.contains("mean_seconds")) r.mean_seconds = j.at("mean_seconds").get<double>();
        if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
        table.rows.push_back(std::move(r));
    }
    return table;
}

}  // namespace mvfcm
