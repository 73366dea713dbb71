#include "compminer/cluster.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "compminer/metrics.hpp"

namespace compminer {

namespace {

// Anchor identity never includes the file path.
ElementRef identity_of(const ElementRef& element) {
    return ElementRef{element.class_fqn, element.member_kind, element.member, std::nullopt};
}

bool member_order(const RefactoringRecord& a, const RefactoringRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.commit != b.commit) return a.commit < b.commit;
    return a.id < b.id;
}

Composite make_composite(CompositeKind kind, ElementRef anchor,
                         std::vector<RefactoringRecord> members) {
    Composite composite;
    composite.kind = kind;
    composite.anchor = std::move(anchor);
    std::sort(members.begin(), members.end(), member_order);
    composite.members = std::move(members);
    for (const RefactoringRecord& member : composite.members) {
        composite.commits.insert(member.commit);
    }
    composite.age_days = composite_age_days(composite);
    composite.scope = classify_scope(composite);
    return composite;
}

bool composite_order(const Composite& a, const Composite& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.anchor.class_fqn != b.anchor.class_fqn) return a.anchor.class_fqn < b.anchor.class_fqn;
    if (a.anchor.member != b.anchor.member) return a.anchor.member < b.anchor.member;
    return member_order(a.members.front(), b.members.front());
}

}  // namespace

std::vector<ClusterKey> keys_for(const RefactoringRecord& record) {
    switch (record.kind) {
        case RefactoringKind::Extract:
        case RefactoringKind::ExtractMove:
            return {{CompositeKind::MethodComposition, identity_of(record.target)},
                    {CompositeKind::MethodDecomposition, identity_of(record.source)}};
        case RefactoringKind::Move:
        case RefactoringKind::MoveRename:
            return {{CompositeKind::ClassDecomposition,
                     ElementRef::whole_class(record.source.class_fqn)}};
        case RefactoringKind::Inline:
            return {{CompositeKind::InlineMethod, identity_of(record.source)}};
        case RefactoringKind::PullUpMethod:
            return {{CompositeKind::PullUpMethod, identity_of(record.target)}};
        case RefactoringKind::PushDownMethod:
            return {{CompositeKind::PushDownMethod, identity_of(record.source)}};
        case RefactoringKind::PullUpField:
            return {{CompositeKind::PullUpField, identity_of(record.target)}};
        case RefactoringKind::PushDownField:
            return {{CompositeKind::PushDownField, identity_of(record.source)}};
    }
    return {};
}

std::vector<Composite> cluster(const std::vector<RefactoringRecord>& records,
                               std::size_t min_size) {
    min_size = std::max<std::size_t>(min_size, 2);

    std::map<std::pair<std::string, ClusterKey>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (ClusterKey& key : keys_for(records[i])) {
            groups[{records[i].project, std::move(key)}].push_back(i);
        }
    }

    std::vector<Composite> composites;
    for (auto& [key, indices] : groups) {
        if (indices.size() < min_size) continue;
        std::vector<RefactoringRecord> members;
        members.reserve(indices.size());
        for (std::size_t index : indices) members.push_back(records[index]);
        composites.push_back(
            make_composite(key.second.kind, key.second.element, std::move(members)));
    }
    std::sort(composites.begin(), composites.end(), composite_order);
    return composites;
}

namespace {

bool extract_family(RefactoringKind kind) {
    return kind == RefactoringKind::Extract || kind == RefactoringKind::ExtractMove;
}

bool move_family(RefactoringKind kind) {
    return kind == RefactoringKind::Move || kind == RefactoringKind::MoveRename;
}

bool same_element(const ElementRef& a, const ElementRef& b) {
    return a.member == b.member && a.class_fqn == b.class_fqn;
}

bool participates(CompositeKind kind, RefactoringKind op) {
    switch (kind) {
        case CompositeKind::MethodComposition:
        case CompositeKind::MethodDecomposition:
            return extract_family(op);
        case CompositeKind::ClassDecomposition:
            return move_family(op);
        case CompositeKind::InlineMethod:
            return op == RefactoringKind::Inline;
        case CompositeKind::PullUpMethod:
            return op == RefactoringKind::PullUpMethod;
        case CompositeKind::PushDownMethod:
            return op == RefactoringKind::PushDownMethod;
        case CompositeKind::PullUpField:
            return op == RefactoringKind::PullUpField;
        case CompositeKind::PushDownField:
            return op == RefactoringKind::PushDownField;
    }
    return false;
}

ElementRef anchor_for(CompositeKind kind, const RefactoringRecord& record) {
    switch (kind) {
        case CompositeKind::MethodComposition:
        case CompositeKind::PullUpMethod:
        case CompositeKind::PullUpField:
            return identity_of(record.target);
        case CompositeKind::ClassDecomposition:
            return ElementRef::whole_class(record.source.class_fqn);
        case CompositeKind::MethodDecomposition:
        case CompositeKind::InlineMethod:
        case CompositeKind::PushDownMethod:
        case CompositeKind::PushDownField:
            return identity_of(record.source);
    }
    return {};
}

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

}  // namespace

bool pairwise_clusterable(CompositeKind kind, const RefactoringRecord& a,
                          const RefactoringRecord& b) {
    if (!participates(kind, a.kind) || !participates(kind, b.kind)) return false;
    if (a.project != b.project) return false;
    switch (kind) {
        case CompositeKind::MethodComposition:
        case CompositeKind::PullUpMethod:
        case CompositeKind::PullUpField:
            return same_element(a.target, b.target);
        case CompositeKind::ClassDecomposition:
            return a.source.class_fqn == b.source.class_fqn;
        case CompositeKind::MethodDecomposition:
        case CompositeKind::InlineMethod:
        case CompositeKind::PushDownMethod:
        case CompositeKind::PushDownField:
            return same_element(a.source, b.source);
    }
    return false;
}

std::vector<Composite> brute_force_cluster(const std::vector<RefactoringRecord>& records,
                                           std::size_t min_size) {
    constexpr std::size_t kScaleGuard = 10000;
    if (records.size() > kScaleGuard) {
        throw Error("brute_force_cluster is a test oracle, refusing " +
                    std::to_string(records.size()) + " records (limit " +
                    std::to_string(kScaleGuard) + ")");
    }
    min_size = std::max<std::size_t>(min_size, 2);

    std::vector<Composite> composites;
    for (CompositeKind kind : kAllCompositeKinds) {
        std::vector<std::size_t> eligible;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (participates(kind, records[i].kind)) eligible.push_back(i);
        }
        UnionFind sets(eligible.size());
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            for (std::size_t j = i + 1; j < eligible.size(); ++j) {
                if (pairwise_clusterable(kind, records[eligible[i]], records[eligible[j]])) {
                    sets.unite(i, j);
                }
            }
        }
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            groups[sets.find(i)].push_back(eligible[i]);
        }
        for (const auto& [root, indices] : groups) {
            if (indices.size() < min_size) continue;
            std::vector<RefactoringRecord> members;
            members.reserve(indices.size());
            for (std::size_t index : indices) members.push_back(records[index]);
            composites.push_back(
                make_composite(kind, anchor_for(kind, records[indices.front()]),
                               std::move(members)));
        }
    }
    std::sort(composites.begin(), composites.end(), composite_order);
    return composites;
}

}  // namespace compminer
