#pragma once

#include "densityk/corpus.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace densityk {

/// Parameters of the planted-context corpus generator. Each document gets
/// one true candidate per mention inside a small context disk, plus decoys
/// spread uniformly over the sphere away from the context and from each other.
struct SynthSpec {
    std::size_t n_docs = 100;
    std::size_t mentions_per_doc = 5;
    std::size_t decoys_min = 5;
    std::size_t decoys_max = 15;
    double context_radius = 1'000.0;
    double min_decoy_separation = 50'000.0;
    double min_decoy_distance_from_context = 100'000.0;
    std::uint64_t seed = 42;

    /// Throws ConfigError unless decoys_min <= decoys_max, mentions_per_doc >= 1,
    /// context_radius > 0 and both decoy distances exceed the context diameter.
    void validate() const;
};

inline constexpr std::size_t kMaxRejectionAttempts = 1'000'000;

/// Deterministic in `spec` (same seed, same corpus, byte for byte once
/// serialized). Throws RejectionOverflow when a decoy cannot be placed within
/// kMaxRejectionAttempts draws.
std::vector<DocumentInput> synth_generate(const SynthSpec& spec);

} // namespace densityk
