#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "compminer/model.hpp"

namespace compminer {

/// The grouping key a record contributes to: one composite kind plus the
/// anchor element (shared source or shared target) that defines the cluster.
struct ClusterKey {
    CompositeKind kind = CompositeKind::MethodComposition;
    ElementRef element;

    friend bool operator==(const ClusterKey& a, const ClusterKey& b) {
        return a.kind == b.kind && a.element == b.element;
    }
    friend std::strong_ordering operator<=>(const ClusterKey& a, const ClusterKey& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        return a.element <=> b.element;
    }
};

/// Every (kind, anchor) pair this record can contribute to. Extract-family
/// records contribute twice (composition via their target, decomposition via
/// their source); all other kinds contribute exactly one key.
std::vector<ClusterKey> keys_for(const RefactoringRecord& record);

/// The pairwise condition for two records to belong to one composite of
/// `kind`: matching operation family plus equality of the anchoring element.
/// Records from distinct projects never cluster.
bool pairwise_clusterable(CompositeKind kind, const RefactoringRecord& a,
                          const RefactoringRecord& b);

/// Groups records by (project, ClusterKey) and emits one Composite per key
/// with at least `min_size` contributors (never below 2). No time or commit
/// constraints. Output is canonically sorted: kind order, anchor class,
/// anchor member, then the earliest member's (timestamp, commit, id).
std::vector<Composite> cluster(const std::vector<RefactoringRecord>& records,
                               std::size_t min_size = 2);

/// Independent test oracle: O(n^2) pairwise application of the clustering
/// condition followed by transitive closure (union-find), no key derivation.
/// Semantically equal to cluster() under the canonical sort. Refuses inputs
/// beyond the test-scale guard of 10,000 records.
std::vector<Composite> brute_force_cluster(const std::vector<RefactoringRecord>& records,
                                           std::size_t min_size = 2);

}  // namespace compminer
