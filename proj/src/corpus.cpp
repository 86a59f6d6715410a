#include "densityk/corpus.hpp"

#include "densityk/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

namespace densityk {

using nlohmann::json;

std::size_t DocumentInput::total_candidates() const noexcept {
    std::size_t total = 0;
    for (const auto& m : mentions) {
        total += m.candidates.size();
    }
    return total;
}

const CandidateEntry* DocumentInput::find_entry(std::string_view entry_id) const noexcept {
    for (const auto& m : mentions) {
        for (const auto& c : m.candidates) {
            if (c.entry_id == entry_id) {
                return &c;
            }
        }
    }
    return nullptr;
}

std::vector<GeoPoint> PointCloud::locations() const {
    std::vector<GeoPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.location);
    }
    return out;
}

namespace {

class FieldReader {
public:
    explicit FieldReader(std::string origin) : origin_(std::move(origin)) {}

    const json& member(const json& obj, const char* key, const std::string& path) const {
        if (!obj.is_object()) {
            throw ParseError(fmt::format("{}: {}: expected an object", origin_, path));
        }
        auto it = obj.find(key);
        if (it == obj.end()) {
            throw ParseError(fmt::format("{}: {}.{}: missing field", origin_, path, key));
        }
        return *it;
    }

    std::string string(const json& obj, const char* key, const std::string& path) const {
        const json& v = member(obj, key, path);
        if (!v.is_string()) {
            throw ParseError(fmt::format("{}: {}.{}: expected a string", origin_, path, key));
        }
        return v.get<std::string>();
    }

    double number(const json& obj, const char* key, const std::string& path) const {
        const json& v = member(obj, key, path);
        if (!v.is_number()) {
            throw ParseError(fmt::format("{}: {}.{}: expected a number", origin_, path, key));
        }
        return v.get<double>();
    }

    const json& array(const json& obj, const char* key, const std::string& path) const {
        const json& v = member(obj, key, path);
        if (!v.is_array()) {
            throw ParseError(fmt::format("{}: {}.{}: expected an array", origin_, path, key));
        }
        return v;
    }

    [[noreturn]] void schema(const std::string& path, const std::string& what) const {
        throw SchemaError(fmt::format("{}: {}: {}", origin_, path, what));
    }

    void set_origin(std::string origin) { origin_ = std::move(origin); }

private:
    std::string origin_;
};

} // namespace

DocumentInput document_from_json(const json& j, std::string_view origin) {
    FieldReader read{std::string(origin)};
    DocumentInput doc;
    doc.doc_id = read.string(j, "doc_id", "document");
    read.set_origin(fmt::format("{} (doc '{}')", origin, doc.doc_id));

    const json& mentions = read.array(j, "mentions", "document");
    std::unordered_map<std::string, std::size_t> mention_index;
    std::unordered_map<std::string, std::size_t> owner_of_entry;

    for (std::size_t mi = 0; mi < mentions.size(); ++mi) {
        const std::string mpath = fmt::format("mentions[{}]", mi);
        const json& mj = mentions[mi];
        std::string name = read.string(mj, "name", mpath);
        const json& cands = read.array(mj, "candidates", mpath);
        if (cands.empty()) {
            read.schema(mpath + ".candidates", fmt::format("mention '{}' has no candidates", name));
        }

        // A repeated surface name contributes its candidates to the first occurrence.
        auto [slot, inserted] = mention_index.try_emplace(name, doc.mentions.size());
        if (inserted) {
            doc.mentions.push_back(PlaceMention{name, {}});
        }
        PlaceMention& mention = doc.mentions[slot->second];

        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
            const std::string cpath = fmt::format("{}.candidates[{}]", mpath, ci);
            const json& cj = cands[ci];
            CandidateEntry entry;
            entry.entry_id = read.string(cj, "entry_id", cpath);
            entry.name = read.string(cj, "name", cpath);
            entry.source = read.string(cj, "source", cpath);
            const double lat = read.number(cj, "lat", cpath);
            const double lon = read.number(cj, "lon", cpath);
            if (!(lat >= -90.0 && lat <= 90.0)) {
                read.schema(cpath + ".lat", fmt::format("latitude {} outside [-90, 90]", lat));
            }
            if (!(lon >= -180.0 && lon <= 180.0)) {
                read.schema(cpath + ".lon", fmt::format("longitude {} outside [-180, 180]", lon));
            }
            entry.location = GeoPoint(lat, lon);

            auto [owner, fresh] = owner_of_entry.try_emplace(entry.entry_id, slot->second);
            if (!fresh) {
                if (owner->second == slot->second) {
                    continue; // same entry listed again under a repeated name
                }
                read.schema(cpath + ".entry_id",
                            fmt::format("entry_id '{}' is already a candidate of mention '{}'",
                                        entry.entry_id, doc.mentions[owner->second].name));
            }
            mention.candidates.push_back(std::move(entry));
        }
    }

    if (auto it = j.find("ground_truth"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) {
            throw ParseError(fmt::format("{} (doc '{}'): ground_truth: expected an object", origin,
                                         doc.doc_id));
        }
        GroundTruth truth;
        for (const auto& [name, value] : it->items()) {
            const std::string tpath = fmt::format("ground_truth['{}']", name);
            if (!value.is_string()) {
                throw ParseError(fmt::format("{} (doc '{}'): {}: expected a string", origin,
                                             doc.doc_id, tpath));
            }
            auto mention = mention_index.find(name);
            if (mention == mention_index.end()) {
                read.schema(tpath, "no mention with this name");
            }
            const std::string entry_id = value.get<std::string>();
            auto owner = owner_of_entry.find(entry_id);
            if (owner == owner_of_entry.end() || owner->second != mention->second) {
                read.schema(tpath, fmt::format("entry_id '{}' is not a candidate of '{}'", entry_id, name));
            }
            truth.emplace(name, entry_id);
        }
        doc.ground_truth = std::move(truth);
    }
    return doc;
}

DocumentInput load_document(std::string_view json_text, std::string_view origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("{}: malformed JSON: {}", origin, e.what()));
    }
    return document_from_json(j, origin);
}

json document_to_json(const DocumentInput& doc) {
    json mentions = json::array();
    for (const auto& m : doc.mentions) {
        json cands = json::array();
        for (const auto& c : m.candidates) {
            cands.push_back({{"entry_id", c.entry_id},
                             {"name", c.name},
                             {"lat", c.location.lat()},
                             {"lon", c.location.lon()},
                             {"source", c.source}});
        }
        mentions.push_back({{"name", m.name}, {"candidates", std::move(cands)}});
    }
    json j = {{"doc_id", doc.doc_id}, {"mentions", std::move(mentions)}};
    if (doc.ground_truth) {
        j["ground_truth"] = *doc.ground_truth;
    }
    return j;
}

std::string serialize_document(const DocumentInput& doc) {
    return document_to_json(doc).dump(2) + "\n";
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(fmt::format("{}: cannot open file", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

std::vector<DocumentInput> load_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::vector<DocumentInput> corpus;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            corpus.push_back(load_document(read_file(file), file.string()));
        }
    } else if (path.extension() == ".jsonl") {
        std::istringstream lines(read_file(path));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(lines, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            corpus.push_back(load_document(line, fmt::format("{}:{}", path.string(), line_no)));
        }
    } else {
        corpus.push_back(load_document(read_file(path), path.string()));
    }

    std::set<std::string> seen;
    for (const auto& doc : corpus) {
        if (!seen.insert(doc.doc_id).second) {
            throw SchemaError(fmt::format("{}: duplicate doc_id '{}'", path.string(), doc.doc_id));
        }
    }
    return corpus;
}

void write_corpus(const std::vector<DocumentInput>& corpus, const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    auto open = [](const fs::path& p) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError(fmt::format("{}: cannot open for writing", p.string()));
        }
        return out;
    };
    if (path.extension() == ".jsonl") {
        if (path.has_parent_path()) {
            fs::create_directories(path.parent_path());
        }
        auto out = open(path);
        for (const auto& doc : corpus) {
            out << document_to_json(doc).dump() << '\n';
        }
        return;
    }
    fs::create_directories(path);
    for (const auto& doc : corpus) {
        auto out = open(path / (doc.doc_id + ".json"));
        out << serialize_document(doc);
    }
}

PlaceMention dedupe_candidates(const PlaceMention& mention, double radius_m) {
    PlaceMention out{mention.name, {}};
    for (const auto& candidate : mention.candidates) {
        const bool duplicate =
            std::any_of(out.candidates.begin(), out.candidates.end(), [&](const CandidateEntry& kept) {
                return haversine(kept.location, candidate.location) <= radius_m;
            });
        if (!duplicate) {
            out.candidates.push_back(candidate);
        }
    }
    return out;
}

PointCloud to_point_cloud(const DocumentInput& doc) {
    PointCloud cloud;
    cloud.points.reserve(doc.total_candidates());
    for (std::size_t mi = 0; mi < doc.mentions.size(); ++mi) {
        const auto& mention = doc.mentions[mi];
        for (const auto& c : mention.candidates) {
            cloud.points.push_back(CloudPoint{c.location, c.entry_id, mi, mention.name});
        }
    }
    return cloud;
}

} // namespace densityk
