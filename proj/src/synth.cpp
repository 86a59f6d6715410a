#include "densityk/synth.hpp"

#include "densityk/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

namespace densityk {

namespace {

// Distribution helpers written against the raw engine output so corpora are
// identical across standard library implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform integer in [lo, hi].
    std::size_t integer(std::size_t lo, std::size_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return lo + static_cast<std::size_t>(draw % span);
    }

    GeoPoint on_sphere() {
        const double z = uniform(-1.0, 1.0);
        const double lon = uniform(-180.0, 180.0);
        return GeoPoint(std::asin(z) * 180.0 / std::numbers::pi, lon);
    }

    GeoPoint in_disk(const GeoPoint& center, double radius) {
        const double bearing = uniform(0.0, 2.0 * std::numbers::pi);
        const double r = radius * std::sqrt(unit());
        return destination(center, bearing, r);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace

void SynthSpec::validate() const {
    if (mentions_per_doc < 1) {
        throw ConfigError("synth: mentions per document must be at least 1");
    }
    if (decoys_min > decoys_max) {
        throw ConfigError(fmt::format("synth: decoy range [{}, {}] is empty", decoys_min, decoys_max));
    }
    if (!(context_radius > 0.0)) {
        throw ConfigError(fmt::format("synth: context radius must be positive, got {}", context_radius));
    }
    const double diameter = 2.0 * context_radius;
    if (!(min_decoy_separation > diameter) || !(min_decoy_distance_from_context > diameter)) {
        throw ConfigError(fmt::format(
            "synth: decoy separation ({}) and decoy distance from context ({}) must exceed the context diameter ({})",
            min_decoy_separation, min_decoy_distance_from_context, diameter));
    }
}

std::vector<DocumentInput> synth_generate(const SynthSpec& spec) {
    spec.validate();
    Sampler rng(spec.seed);
    std::vector<DocumentInput> corpus;
    corpus.reserve(spec.n_docs);

    for (std::size_t di = 0; di < spec.n_docs; ++di) {
        DocumentInput doc;
        doc.doc_id = fmt::format("synth-{:04}", di);
        doc.ground_truth.emplace();

        const GeoPoint center = rng.on_sphere();
        std::vector<GeoPoint> planted;
        for (std::size_t mi = 0; mi < spec.mentions_per_doc; ++mi) {
            planted.push_back(rng.in_disk(center, spec.context_radius));
        }

        std::vector<GeoPoint> decoys;
        for (std::size_t mi = 0; mi < spec.mentions_per_doc; ++mi) {
            const std::size_t n_decoys = rng.integer(spec.decoys_min, spec.decoys_max);
            std::vector<GeoPoint> locations;
            for (std::size_t k = 0; k < n_decoys; ++k) {
                std::size_t attempts = 0;
                for (;;) {
                    if (++attempts > kMaxRejectionAttempts) {
                        throw RejectionOverflow(fmt::format(
                            "synth: doc '{}': could not place a decoy in {} attempts", doc.doc_id,
                            kMaxRejectionAttempts));
                    }
                    const GeoPoint p = rng.on_sphere();
                    bool ok = true;
                    for (const auto& q : planted) {
                        ok = ok && haversine(p, q) >= spec.min_decoy_distance_from_context;
                    }
                    for (const auto& q : decoys) {
                        ok = ok && haversine(p, q) >= spec.min_decoy_separation;
                    }
                    if (ok) {
                        decoys.push_back(p);
                        locations.push_back(p);
                        break;
                    }
                }
            }
            // The true entry goes to a random slot among the decoys.
            const std::size_t truth_slot = rng.integer(0, n_decoys);
            locations.insert(locations.begin() + static_cast<std::ptrdiff_t>(truth_slot), planted[mi]);

            PlaceMention mention;
            mention.name = fmt::format("place-{:02}", mi);
            for (std::size_t ci = 0; ci < locations.size(); ++ci) {
                mention.candidates.push_back(CandidateEntry{
                    fmt::format("{}-m{:02}-c{:02}", doc.doc_id, mi, ci), mention.name, locations[ci], "synth"});
            }
            doc.ground_truth->emplace(mention.name, mention.candidates[truth_slot].entry_id);
            doc.mentions.push_back(std::move(mention));
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

} // namespace densityk
