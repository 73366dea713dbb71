#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "compminer/model.hpp"

namespace compminer {

/// Deterministic dataset generator: plants composites of chosen kinds plus
/// singleton noise records that can never cluster (each lives in its own
/// class-name namespace, so no anchor collides with anything else).
struct SynthOptions {
    std::uint64_t seed = 0;
    std::size_t singles = 100;
    std::map<CompositeKind, double> mix;  // empty: equal weights for all kinds
    double noise = 0.0;                   // fraction of singleton records
    double multi_commit = 0.0;            // fraction of composites spanning commits
    std::string project = "synth";
};

struct PlantedComposite {
    CompositeKind kind = CompositeKind::MethodComposition;
    ElementRef anchor;
    std::vector<std::string> member_ids;  // sorted
};

struct SynthDataset {
    std::vector<RefactoringRecord> records;  // deterministically shuffled
    std::vector<PlantedComposite> planted;
    std::vector<std::string> noise_ids;
};

/// Pure function of the options. Throws std::invalid_argument when the mix
/// weights do not sum to a positive value.
SynthDataset synthesize(const SynthOptions& options);

/// JSON-lines rendering in the detect input schema.
std::string to_jsonl(const std::vector<RefactoringRecord>& records);

/// Ground-truth document listing the planted composites and noise ids.
std::string ground_truth_json(const SynthDataset& dataset, const SynthOptions& options);

}  // namespace compminer
