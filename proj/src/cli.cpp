#include "densityk/cli.hpp"

#include "densityk/algorithm.hpp"
#include "densityk/corpus.hpp"
#include "densityk/errors.hpp"
#include "densityk/eval.hpp"
#include "densityk/export.hpp"
#include "densityk/synth.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace densityk::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Algorithm flags; every value may repeat, which only `evaluate` uses to
// build a grid.
struct AlgorithmFlags {
    std::vector<std::string> algorithm;
    std::vector<double> epsilon;
    std::vector<std::size_t> min_pts;
    std::vector<std::size_t> k;
    std::vector<double> delta_d;
    std::optional<double> upper_bound;
    std::vector<std::string> measure;
    std::uint64_t cap = kDefaultCombinationCap;
    std::string crossing = "last-above";

    void add_to(CLI::App& app, bool repeatable) {
        auto limit = [&](CLI::Option* opt) {
            if (!repeatable) {
                opt->expected(1);
            }
            return opt;
        };
        limit(app.add_option("--algorithm", algorithm, "densityk|dbscan|kdist|omd|centroid|dtur"));
        limit(app.add_option("--epsilon", epsilon, "DBSCAN neighbourhood distance (m)"));
        limit(app.add_option("--min-pts", min_pts, "DBSCAN / k-dist minimum points"));
        limit(app.add_option("--k", k, "k-dist neighbour rank"));
        limit(app.add_option("--delta-d", delta_d, "density curve step (m), default 100"));
        app.add_option("--upper-bound", upper_bound, "ignore pair distances above this (m)");
        limit(app.add_option("--measure", measure, "OMD measure: avg|hull"));
        app.add_option("--cap", cap, "OMD combination cap")->capture_default_str();
        app.add_option("--crossing", crossing, "threshold crossing: last-above|first-below")
            ->capture_default_str();
    }

    DensityKOptions densityk_options(double delta) const {
        DensityKOptions options;
        options.delta_d = delta;
        options.upper_bound = upper_bound;
        if (crossing == "first-below") {
            options.crossing = ThresholdCrossing::kFirstAtOrBelowThreshold;
        } else if (crossing != "last-above") {
            throw ConfigError(fmt::format("--crossing: unknown rule '{}'", crossing));
        }
        return options;
    }

    /// Cartesian product of the given values for each named algorithm.
    std::vector<AlgorithmConfig> configs() const {
        std::vector<AlgorithmConfig> out;
        auto or_unset = [](const auto& values) {
            using T = typename std::decay_t<decltype(values)>::value_type;
            std::vector<std::optional<T>> v(values.begin(), values.end());
            if (v.empty()) {
                v.emplace_back();
            }
            return v;
        };
        for (const auto& name : algorithm) {
            const Algorithm a = parse_algorithm(name);
            AlgorithmConfig base;
            base.algorithm = a;
            base.combination_cap = cap;
            switch (a) {
            case Algorithm::kDensityK: {
                std::vector<double> deltas = delta_d.empty() ? std::vector<double>{kDefaultDeltaD} : delta_d;
                for (double d : deltas) {
                    AlgorithmConfig c = base;
                    c.densityk = densityk_options(d);
                    out.push_back(c);
                }
                break;
            }
            case Algorithm::kOmd:
                for (const auto& m : or_unset(measure)) {
                    AlgorithmConfig c = base;
                    if (m) {
                        c.measure = parse_omd_measure(*m);
                    }
                    out.push_back(c);
                }
                break;
            case Algorithm::kCentroid:
            case Algorithm::kDtur:
                out.push_back(base);
                break;
            case Algorithm::kDbscan:
                for (const auto& e : or_unset(epsilon)) {
                    for (const auto& m : or_unset(min_pts)) {
                        AlgorithmConfig c = base;
                        c.epsilon = e;
                        c.min_pts = m;
                        out.push_back(c);
                    }
                }
                break;
            case Algorithm::kKdist:
                for (const auto& kk : or_unset(k)) {
                    for (const auto& m : or_unset(min_pts)) {
                        AlgorithmConfig c = base;
                        c.k = kk;
                        c.min_pts = m;
                        out.push_back(c);
                    }
                }
                break;
            }
        }
        for (const auto& c : out) {
            c.validate();
        }
        return out;
    }

    AlgorithmConfig single() const {
        if (algorithm.empty()) {
            throw ConfigError("--algorithm is required");
        }
        auto all = configs();
        return all.front();
    }
};

class OutputTarget {
public:
    explicit OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty() && path != "-") {
            const fs::path p(path);
            if (p.has_parent_path()) {
                fs::create_directories(p.parent_path());
            }
            file_.open(p, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw InputError(fmt::format("--output: cannot open '{}' for writing", path));
            }
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    OutputTarget target(path, out);
    target.stream() << text;
}

std::vector<DocumentInput> read_input(const std::string& path, const char* flag) {
    if (path.empty()) {
        throw ConfigError(fmt::format("{} is required", flag));
    }
    if (!fs::exists(path)) {
        throw InputError(fmt::format("{}: '{}' does not exist", flag, path));
    }
    return load_corpus(path);
}

const DocumentInput& single_document(const std::vector<DocumentInput>& docs, const std::string& path) {
    if (docs.size() != 1) {
        throw InputError(fmt::format("--input: '{}' holds {} documents, expected exactly one", path, docs.size()));
    }
    return docs.front();
}

// Runs `fn` on one document, labelling algorithm errors with the document.
template <typename Fn>
auto for_document(const DocumentInput& doc, Fn&& fn) {
    try {
        return fn();
    } catch (const AlgorithmError& e) {
        const std::string what = e.what();
        if (what.find(doc.doc_id) != std::string::npos) {
            throw;
        }
        // Rethrow as the same family with the document named.
        throw AlgorithmError(fmt::format("doc '{}': {}: {}", doc.doc_id, error_kind(e), what));
    }
}

} // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Place-name disambiguation by clustering gazetteer candidates", "densityk"};
    app.require_subcommand(1);

    AlgorithmFlags flags;
    std::string input;
    std::string corpus;
    std::string output;
    std::string csv;
    std::string grid;
    std::size_t workers = 1;
    SynthSpec synth;

    auto* disambiguate_cmd = app.add_subcommand("disambiguate", "resolve the mentions of document(s)");
    flags.add_to(*disambiguate_cmd, false);
    disambiguate_cmd->add_option("--input", input, "document file, directory or .jsonl");
    disambiguate_cmd->add_option("--output", output, "result JSON (default stdout)");

    AlgorithmFlags grid_flags;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "score algorithms over a corpus with ground truth");
    grid_flags.add_to(*evaluate_cmd, true);
    evaluate_cmd->add_option("--corpus", corpus, "directory of documents or .jsonl");
    evaluate_cmd->add_option("--grid", grid, "named parameter grid (table1)");
    evaluate_cmd->add_option("--output", output, "report JSON (default stdout)");
    evaluate_cmd->add_option("--csv", csv, "also write the flattened CSV here");
    evaluate_cmd->add_option("--workers", workers, "worker threads")->capture_default_str();

    auto* kfunction_cmd = app.add_subcommand("kfunction", "export the density curve of a document as CSV");
    flags.add_to(*kfunction_cmd, false);
    kfunction_cmd->add_option("--input", input, "document file");
    kfunction_cmd->add_option("--output", output, "CSV (default stdout)");

    auto* clusters_cmd = app.add_subcommand("clusters", "export ranked clusters of a document as GeoJSON");
    flags.add_to(*clusters_cmd, false);
    clusters_cmd->add_option("--input", input, "document file");
    clusters_cmd->add_option("--output", output, "GeoJSON (default stdout)");

    auto* synth_cmd = app.add_subcommand("synth", "generate a planted-context corpus");
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
    synth_cmd->add_option("--n-docs", synth.n_docs)->capture_default_str();
    synth_cmd->add_option("--mentions", synth.mentions_per_doc)->capture_default_str();
    synth_cmd->add_option("--decoys-min", synth.decoys_min)->capture_default_str();
    synth_cmd->add_option("--decoys-max", synth.decoys_max)->capture_default_str();
    synth_cmd->add_option("--context-radius", synth.context_radius)->capture_default_str();
    synth_cmd->add_option("--min-decoy-separation", synth.min_decoy_separation)->capture_default_str();
    synth_cmd->add_option("--min-decoy-distance", synth.min_decoy_distance_from_context)->capture_default_str();
    synth_cmd->add_option("--output", output, "corpus directory or .jsonl")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (*disambiguate_cmd) {
            const AlgorithmConfig config = flags.single();
            const auto docs = read_input(input, "--input");
            json results = json::array();
            for (const auto& doc : docs) {
                results.push_back(result_to_json(for_document(doc, [&] { return run_algorithm(doc, config); })));
            }
            // A lone document file yields a single object, a corpus an array.
            const bool lone = docs.size() == 1 && !fs::is_directory(input) && fs::path(input).extension() != ".jsonl";
            write_text(output, (lone ? results.front() : results).dump(2) + "\n", out);
        } else if (*evaluate_cmd) {
            std::vector<AlgorithmConfig> configs;
            if (!grid.empty()) {
                configs = grid_preset(grid);
            }
            for (auto& c : grid_flags.configs()) {
                configs.push_back(std::move(c));
            }
            if (configs.empty()) {
                throw ConfigError("evaluate: give --grid and/or at least one --algorithm");
            }
            if (workers < 1) {
                throw ConfigError("--workers must be at least 1");
            }
            const auto docs = read_input(corpus, "--corpus");
            CorpusReport report = evaluate_corpus(docs, configs, workers);
            if (!grid.empty()) {
                report.configuration["grid"] = grid;
            }
            write_text(output, report_to_json(report).dump(2) + "\n", out);
            if (!csv.empty()) {
                write_text(csv, report_to_csv(report), out);
            }
        } else if (*kfunction_cmd) {
            DensityKOptions options =
                flags.densityk_options(flags.delta_d.empty() ? kDefaultDeltaD : flags.delta_d.front());
            AlgorithmConfig check{.algorithm = Algorithm::kDensityK, .densityk = options};
            check.validate();
            const auto docs = read_input(input, "--input");
            const DocumentInput& doc = single_document(docs, input);
            const KFunction kf = for_document(doc, [&] { return densityk_threshold(to_point_cloud(doc), options); });
            write_text(output, k_function_csv(kf), out);
        } else if (*clusters_cmd) {
            const AlgorithmConfig config = flags.single();
            const auto docs = read_input(input, "--input");
            const DocumentInput& doc = single_document(docs, input);
            const auto result = for_document(doc, [&] { return run_algorithm(doc, config); });
            write_text(output, clusters_geojson(result).dump(2) + "\n", out);
        } else if (*synth_cmd) {
            write_corpus(synth_generate(synth), output);
        }
    } catch (const InputError& e) {
        err << "error: " << error_kind(e) << ": " << e.what() << "\n";
        return kExitInputError;
    } catch (const AlgorithmError& e) {
        err << "error: " << error_kind(e) << ": " << e.what() << "\n";
        return kExitAlgorithmError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

} // namespace densityk::cli
