#include "compminer/metrics.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace compminer {

std::optional<std::int64_t> composite_age_days(const Composite& composite) {
    std::optional<Timestamp> oldest;
    std::optional<Timestamp> newest;
    std::size_t with_timestamp = 0;
    for (const RefactoringRecord& member : composite.members) {
        if (!member.timestamp) continue;
        ++with_timestamp;
        if (!oldest || *member.timestamp < *oldest) oldest = member.timestamp;
        if (!newest || *member.timestamp > *newest) newest = member.timestamp;
    }
    if (with_timestamp < 2) return std::nullopt;
    return (*newest - *oldest).count() / 86400;
}

std::optional<Scope> classify_scope(const Composite& composite) {
    if (composite.kind != CompositeKind::MethodComposition &&
        composite.kind != CompositeKind::MethodDecomposition) {
        return std::nullopt;
    }
    bool any_intra = false;
    bool any_inter = false;
    for (const RefactoringRecord& member : composite.members) {
        if (member.source.class_fqn == member.target.class_fqn) {
            any_intra = true;
        } else {
            any_inter = true;
        }
    }
    if (any_intra && any_inter) return Scope::Mixed;
    return any_intra ? Scope::IntraClass : Scope::InterClass;
}

std::int64_t nearest_rank_percentile(const std::vector<std::int64_t>& sorted_values,
                                     int percent) {
    const std::size_t n = sorted_values.size();
    std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
    if (rank == 0) rank = 1;
    return sorted_values[rank - 1];
}

namespace {

DistributionStats build_distribution(std::vector<std::int64_t> values) {
    DistributionStats stats;
    if (values.empty()) return stats;
    std::sort(values.begin(), values.end());
    for (std::int64_t value : values) ++stats.histogram[value];
    stats.min = values.front();
    stats.median = nearest_rank_percentile(values, 50);
    stats.p75 = nearest_rank_percentile(values, 75);
    stats.p90 = nearest_rank_percentile(values, 90);
    stats.max = values.back();
    return stats;
}

double percent_of(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

CorpusStats corpus_stats(const std::vector<RefactoringRecord>& singles,
                         const std::vector<Composite>& composites) {
    CorpusStats stats;
    stats.singles_total = singles.size();
    stats.composites_total = composites.size();
    for (CompositeKind kind : kAllCompositeKinds) stats.per_kind[kind] = KindStats{};
    stats.scope_breakdown[CompositeKind::MethodComposition] = ScopeCounts{};
    stats.scope_breakdown[CompositeKind::MethodDecomposition] = ScopeCounts{};

    std::set<std::string> known_ids;
    for (const RefactoringRecord& record : singles) known_ids.insert(record.id);

    std::set<std::string> member_ids;
    std::set<std::string> projects_any;
    std::map<CompositeKind, std::set<std::string>> projects_by_kind;
    std::vector<std::int64_t> sizes;
    std::vector<std::int64_t> ages;

    for (const Composite& composite : composites) {
        KindStats& kind_stats = stats.per_kind[composite.kind];
        ++kind_stats.composites;
        kind_stats.operations += composite.size();
        projects_by_kind[composite.kind].insert(composite.project());
        projects_any.insert(composite.project());
        for (const RefactoringRecord& member : composite.members) {
            if (!known_ids.contains(member.id)) {
                throw IntegrityError("composite references unknown record id '" +
                                     member.id + "'");
            }
            member_ids.insert(member.id);
        }
        sizes.push_back(static_cast<std::int64_t>(composite.size()));
        if (composite.age_days) ages.push_back(*composite.age_days);
        if (composite.commits.size() >= 2) ++stats.multi_commit_count;
        if (composite.scope) {
            ScopeCounts& counts = stats.scope_breakdown[composite.kind];
            switch (*composite.scope) {
                case Scope::IntraClass: ++counts.intra_class; break;
                case Scope::InterClass: ++counts.inter_class; break;
                case Scope::Mixed: ++counts.mixed; break;
            }
        }
    }

    for (auto& [kind, kind_stats] : stats.per_kind) {
        kind_stats.projects = projects_by_kind[kind].size();
        kind_stats.percent = percent_of(kind_stats.composites, stats.composites_total);
    }
    stats.singles_in_composites = member_ids.size();
    stats.singles_in_composites_percent =
        percent_of(stats.singles_in_composites, stats.singles_total);
    stats.projects_with_composites = projects_any.size();
    stats.size_distribution = build_distribution(std::move(sizes));
    stats.age_distribution = build_distribution(std::move(ages));
    stats.multi_commit_percent = percent_of(stats.multi_commit_count, stats.composites_total);
    return stats;
}

}  // namespace compminer
