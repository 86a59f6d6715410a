#include "densityk/eval.hpp"

#include "densityk/errors.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include <fmt/format.h>

namespace densityk {

using nlohmann::json;

DocumentScore score_document(const DisambiguationResult& result, const DocumentInput& doc) {
    if (!doc.ground_truth || doc.ground_truth->empty()) {
        throw MissingTruth(fmt::format("doc '{}': ground_truth: missing or empty", doc.doc_id));
    }
    const GroundTruth& truth = *doc.ground_truth;
    DocumentScore score;
    score.doc_id = doc.doc_id;
    score.truth_count = truth.size();

    double error_km = 0.0;
    for (const auto& outcome : result.outcomes) {
        if (outcome.status != OutcomeStatus::kResolved) {
            ++score.failed_count;
            continue;
        }
        ++score.resolved_count;
        auto t = truth.find(outcome.mention);
        if (t == truth.end()) {
            continue;
        }
        if (*outcome.entry_id == t->second) {
            ++score.correct_count;
        }
        const CandidateEntry* selected = doc.find_entry(*outcome.entry_id);
        const CandidateEntry* expected = doc.find_entry(t->second);
        if (selected == nullptr || expected == nullptr) {
            throw SchemaError(fmt::format("doc '{}': result refers to unknown entry for mention '{}'",
                                          doc.doc_id, outcome.mention));
        }
        error_km += haversine(selected->location, expected->location) / 1000.0;
        ++score.distance_samples;
    }
    score.precision = static_cast<double>(score.correct_count) / static_cast<double>(score.truth_count);
    if (score.distance_samples > 0) {
        error_km /= static_cast<double>(score.distance_samples);
    }
    score.avg_distance_error_km = error_km;
    return score;
}

std::map<std::string, std::size_t> select_best_cells(const std::vector<CellReport>& cells) {
    std::map<std::string, std::size_t> best;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        if (!cell.macro_precision) {
            continue;
        }
        const std::string name = to_string(cell.config.algorithm);
        auto it = best.find(name);
        if (it == best.end()) {
            best.emplace(name, i);
            continue;
        }
        const auto& incumbent = cells[it->second];
        const double p = *cell.macro_precision;
        const double q = *incumbent.macro_precision;
        const double e = cell.macro_distance_error_km.value_or(inf);
        const double f = incumbent.macro_distance_error_km.value_or(inf);
        if (p > q || (p == q && e < f)) {
            it->second = i;
        }
    }
    return best;
}

CorpusReport evaluate_corpus(const std::vector<DocumentInput>& corpus,
                             const std::vector<AlgorithmConfig>& configs, std::size_t workers) {
    for (const auto& config : configs) {
        config.validate();
    }
    // Canonical document order, independent of how the corpus was read.
    std::vector<const DocumentInput*> docs;
    docs.reserve(corpus.size());
    for (const auto& doc : corpus) {
        if (!doc.ground_truth || doc.ground_truth->empty()) {
            throw MissingTruth(fmt::format("doc '{}': ground_truth: missing or empty", doc.doc_id));
        }
        docs.push_back(&doc);
    }
    std::sort(docs.begin(), docs.end(),
              [](const DocumentInput* a, const DocumentInput* b) { return a->doc_id < b->doc_id; });

    struct Slot {
        std::optional<DocumentScore> score;
        std::optional<DocumentFailure> failure;
    };
    const std::size_t tasks = configs.size() * docs.size();
    std::vector<Slot> slots(tasks);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            const AlgorithmConfig& config = configs[t / docs.size()];
            const DocumentInput& doc = *docs[t % docs.size()];
            try {
                slots[t].score = score_document(run_algorithm(doc, config), doc);
            } catch (const Error& e) {
                slots[t].failure = DocumentFailure{doc.doc_id, error_kind(e), e.what()};
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(tasks, 1));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    CorpusReport report;
    report.configuration = {{"documents", docs.size()}, {"cells", configs.size()}};
    for (std::size_t c = 0; c < configs.size(); ++c) {
        CellReport cell;
        cell.config = configs[c];
        double precision_sum = 0.0;
        double error_sum = 0.0;
        std::size_t error_docs = 0;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            Slot& slot = slots[c * docs.size() + d];
            if (slot.failure) {
                cell.errors.push_back(std::move(*slot.failure));
                continue;
            }
            precision_sum += slot.score->precision;
            if (slot.score->distance_samples > 0) {
                error_sum += slot.score->avg_distance_error_km;
                ++error_docs;
            }
            cell.scores.push_back(std::move(*slot.score));
        }
        if (!cell.scores.empty()) {
            cell.macro_precision = precision_sum / static_cast<double>(cell.scores.size());
        }
        if (error_docs > 0) {
            cell.macro_distance_error_km = error_sum / static_cast<double>(error_docs);
        }
        report.cells.push_back(std::move(cell));
    }
    report.best = select_best_cells(report.cells);
    return report;
}

std::vector<AlgorithmConfig> grid_preset(std::string_view name) {
    if (name != "table1") {
        throw ConfigError(fmt::format("--grid: unknown preset '{}'", name));
    }
    std::vector<AlgorithmConfig> grid;
    grid.push_back(AlgorithmConfig{.algorithm = Algorithm::kDensityK});
    for (auto m : {OmdMeasure::kAvgPairwise, OmdMeasure::kHullArea}) {
        grid.push_back(AlgorithmConfig{.algorithm = Algorithm::kOmd, .measure = m});
    }
    grid.push_back(AlgorithmConfig{.algorithm = Algorithm::kCentroid});
    grid.push_back(AlgorithmConfig{.algorithm = Algorithm::kDtur});
    for (double eps : {200.0, 2000.0, 20000.0}) {
        for (std::size_t min_pts : {1, 5, 10}) {
            grid.push_back(AlgorithmConfig{.algorithm = Algorithm::kDbscan, .epsilon = eps, .min_pts = min_pts});
        }
    }
    for (std::size_t k : {5, 10, 25}) {
        for (std::size_t min_pts : {1, 5, 10}) {
            grid.push_back(AlgorithmConfig{.algorithm = Algorithm::kKdist, .min_pts = min_pts, .k = k});
        }
    }
    return grid;
}

json score_to_json(const DocumentScore& s) {
    return {{"doc_id", s.doc_id},
            {"precision", s.precision},
            {"avg_distance_error_km", s.avg_distance_error_km},
            {"resolved_count", s.resolved_count},
            {"failed_count", s.failed_count},
            {"truth_count", s.truth_count},
            {"correct_count", s.correct_count},
            {"distance_samples", s.distance_samples}};
}

json report_to_json(const CorpusReport& report) {
    auto optional_number = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json documents = json::array();
        for (const auto& s : cell.scores) {
            documents.push_back(score_to_json(s));
        }
        json errors = json::array();
        for (const auto& e : cell.errors) {
            errors.push_back({{"doc_id", e.doc_id}, {"kind", e.kind}, {"message", e.message}});
        }
        cells.push_back({{"label", cell.config.label()},
                         {"algorithm", to_string(cell.config.algorithm)},
                         {"params", cell.config.params()},
                         {"macro_precision", optional_number(cell.macro_precision)},
                         {"macro_avg_distance_error_km", optional_number(cell.macro_distance_error_km)},
                         {"scored_documents", cell.scores.size()},
                         {"failed_documents", cell.errors.size()},
                         {"documents", std::move(documents)},
                         {"errors", std::move(errors)}});
    }
    json best = json::object();
    for (const auto& [name, index] : report.best) {
        best[name] = report.cells[index].config.label();
    }
    return {{"configuration", report.configuration}, {"cells", std::move(cells)}, {"best", std::move(best)}};
}

std::string report_to_csv(const CorpusReport& report) {
    std::string out = "doc_id,algorithm,params,precision,avg_distance_error_km,resolved,failed\n";
    for (const auto& cell : report.cells) {
        const char* algorithm = to_string(cell.config.algorithm);
        const std::string params = cell.config.params_string();
        // Merge scored and failed documents back into doc_id order.
        auto s = cell.scores.begin();
        auto e = cell.errors.begin();
        while (s != cell.scores.end() || e != cell.errors.end()) {
            if (e == cell.errors.end() || (s != cell.scores.end() && s->doc_id < e->doc_id)) {
                out += fmt::format("{},{},{},{},{},{},{}\n", s->doc_id, algorithm, params, s->precision,
                                   s->avg_distance_error_km, s->resolved_count, s->failed_count);
                ++s;
            } else {
                out += fmt::format("{},{},{},,,,\n", e->doc_id, algorithm, params);
                ++e;
            }
        }
    }
    return out;
}

} // namespace densityk
