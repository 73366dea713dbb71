#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "compminer/model.hpp"

namespace compminer {

/// Whole days between the most recent and the oldest member timestamp.
/// Absent when fewer than two members carry timestamps; equal timestamps
/// yield 0.
std::optional<std::int64_t> composite_age_days(const Composite& composite);

/// Scope applies to extraction composites only (composition/decomposition):
/// a member is intra-class when the extracted code stays in the origin's
/// class, inter-class when it leaves it; uniform labels give intra/inter,
/// anything else is mixed. Other kinds return nullopt (not applicable).
std::optional<Scope> classify_scope(const Composite& composite);

struct KindStats {
    std::size_t projects = 0;    // projects containing >=1 composite of the kind
    std::size_t operations = 0;  // member records, overlapping across kinds
    std::size_t composites = 0;  // occurrences
    double percent = 0.0;        // of all composites

    friend bool operator==(const KindStats&, const KindStats&) = default;
};

struct ScopeCounts {
    std::size_t intra_class = 0;
    std::size_t inter_class = 0;
    std::size_t mixed = 0;

    friend bool operator==(const ScopeCounts&, const ScopeCounts&) = default;
};

/// Histogram plus nearest-rank percentiles; all zeros when empty.
struct DistributionStats {
    std::map<std::int64_t, std::size_t> histogram;
    std::int64_t min = 0;
    std::int64_t median = 0;
    std::int64_t p75 = 0;
    std::int64_t p90 = 0;
    std::int64_t max = 0;

    friend bool operator==(const DistributionStats&, const DistributionStats&) = default;
};

struct CorpusStats {
    std::map<CompositeKind, KindStats> per_kind;  // all eight kinds present
    std::size_t singles_total = 0;
    std::size_t singles_in_composites = 0;  // distinct record ids, counted once
    double singles_in_composites_percent = 0.0;
    std::size_t composites_total = 0;
    std::size_t projects_with_composites = 0;
    DistributionStats size_distribution;
    DistributionStats age_distribution;  // over composites with a defined age
    std::map<CompositeKind, ScopeCounts> scope_breakdown;  // extraction kinds only
    std::size_t multi_commit_count = 0;
    double multi_commit_percent = 0.0;

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Aggregates corpus-level statistics. Throws IntegrityError when a composite
/// references a record id absent from `singles`.
CorpusStats corpus_stats(const std::vector<RefactoringRecord>& singles,
                         const std::vector<Composite>& composites);

/// Nearest-rank percentile over a sorted, non-empty list: the value at
/// (1-based) rank ceil(percent/100 * n).
std::int64_t nearest_rank_percentile(const std::vector<std::int64_t>& sorted_values,
                                     int percent);

}  // namespace compminer
