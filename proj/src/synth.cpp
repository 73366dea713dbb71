#include "compminer/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "compminer/rng.hpp"

namespace compminer {

namespace {

using nlohmann::json;

std::string hex_commit(std::uint64_t a, std::uint64_t b) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%08llx%04llx", static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b & 0xFFFF));
    return buf;
}

constexpr std::int64_t kBaseEpoch = 1609459200;  // 2021-01-01T00:00:00Z

Timestamp at_offset(std::int64_t seconds) {
    return Timestamp{std::chrono::seconds{kBaseEpoch + seconds}};
}

struct CompositePlan {
    CompositeKind kind;
    std::size_t index;
    std::size_t size;
    bool multi_commit;
};

RefactoringRecord base_record(const SynthOptions& options, std::string id) {
    RefactoringRecord record;
    record.id = std::move(id);
    record.project = options.project;
    return record;
}

// Members of one planted composite; anchors are namespaced per composite so
// plants never collide with each other or with noise.
std::vector<RefactoringRecord> plant_members(const SynthOptions& options,
                                             const CompositePlan& plan,
                                             SplitMix64& rng, ElementRef& anchor_out) {
    const std::string ns = "synth.g" + std::to_string(plan.index);
    const std::string host = ns + ".Host";
    const std::string base = ns + ".Base";
    const std::string tag = std::to_string(plan.index);

    std::vector<RefactoringRecord> members;
    members.reserve(plan.size);
    const std::size_t commit_count =
        plan.multi_commit ? 2 + rng.below(plan.size - 1) : 1;

    for (std::size_t j = 0; j < plan.size; ++j) {
        RefactoringRecord record =
            base_record(options, "g" + tag + "-" + std::to_string(j));
        const std::size_t commit_index = j % commit_count;
        record.commit = hex_commit(plan.index + 1, commit_index);
        record.timestamp = at_offset(static_cast<std::int64_t>(plan.index) * 3600 +
                                     static_cast<std::int64_t>(commit_index) * 86400);
        const std::string sub = ns + ".Sub" + std::to_string(j);
        const std::string member_tag = tag + "x" + std::to_string(j);
        switch (plan.kind) {
            case CompositeKind::MethodComposition: {
                anchor_out = ElementRef::method(host, "t" + tag + "()");
                record.target = anchor_out;
                if (rng.chance(0.5)) {
                    record.kind = RefactoringKind::Extract;
                    record.source = ElementRef::method(host, "s" + member_tag + "()");
                } else {
                    record.kind = RefactoringKind::ExtractMove;
                    record.source = ElementRef::method(ns + ".From" + std::to_string(j),
                                                       "s" + member_tag + "()");
                }
                break;
            }
            case CompositeKind::MethodDecomposition: {
                anchor_out = ElementRef::method(host, "d" + tag + "()");
                record.source = anchor_out;
                if (rng.chance(0.5)) {
                    record.kind = RefactoringKind::Extract;
                    record.target = ElementRef::method(host, "t" + member_tag + "()");
                } else {
                    record.kind = RefactoringKind::ExtractMove;
                    record.target = ElementRef::method(ns + ".To" + std::to_string(j),
                                                       "t" + member_tag + "()");
                }
                break;
            }
            case CompositeKind::ClassDecomposition: {
                anchor_out = ElementRef::whole_class(host);
                record.source = ElementRef::method(host, "m" + member_tag + "()");
                const std::string destination = ns + ".Dst" + std::to_string(j);
                if (rng.chance(0.3)) {
                    record.kind = RefactoringKind::MoveRename;
                    record.target = ElementRef::method(destination, "r" + member_tag + "()");
                } else {
                    record.kind = RefactoringKind::Move;
                    record.target = ElementRef::method(destination, "m" + member_tag + "()");
                }
                break;
            }
            case CompositeKind::InlineMethod: {
                anchor_out = ElementRef::method(host, "inl" + tag + "()");
                record.kind = RefactoringKind::Inline;
                record.source = anchor_out;
                record.target = ElementRef::method(ns + ".Call" + std::to_string(j),
                                                   "use" + member_tag + "()");
                break;
            }
            case CompositeKind::PullUpMethod: {
                anchor_out = ElementRef::method(base, "pu" + tag + "()");
                record.kind = RefactoringKind::PullUpMethod;
                record.source = ElementRef::method(sub, "pu" + tag + "()");
                record.target = anchor_out;
                break;
            }
            case CompositeKind::PushDownMethod: {
                anchor_out = ElementRef::method(base, "pd" + tag + "()");
                record.kind = RefactoringKind::PushDownMethod;
                record.source = anchor_out;
                record.target = ElementRef::method(sub, "pd" + tag + "()");
                break;
            }
            case CompositeKind::PullUpField: {
                anchor_out = ElementRef::field(base, "fld" + tag);
                record.kind = RefactoringKind::PullUpField;
                record.source = ElementRef::field(sub, "fld" + tag);
                record.target = anchor_out;
                break;
            }
            case CompositeKind::PushDownField: {
                anchor_out = ElementRef::field(base, "cfg" + tag);
                record.kind = RefactoringKind::PushDownField;
                record.source = anchor_out;
                record.target = ElementRef::field(sub, "cfg" + tag);
                break;
            }
        }
        members.push_back(std::move(record));
    }
    return members;
}

RefactoringRecord noise_record(const SynthOptions& options, std::size_t index,
                               SplitMix64& rng) {
    const std::string ns = "synth.n" + std::to_string(index);
    const std::string c0 = ns + ".C0";
    const std::string c1 = ns + ".C1";
    RefactoringRecord record = base_record(options, "n" + std::to_string(index));
    record.commit = hex_commit(0x40000000ull + index, 0);
    if (rng.chance(0.5)) {
        record.timestamp = at_offset(static_cast<std::int64_t>(index) * 7200);
    }
    record.kind = kAllRefactoringKinds[rng.below(kAllRefactoringKinds.size())];
    switch (record.kind) {
        case RefactoringKind::Extract:
            record.source = ElementRef::method(c0, "a()");
            record.target = ElementRef::method(c0, "b()");
            break;
        case RefactoringKind::PullUpField:
        case RefactoringKind::PushDownField:
            record.source = ElementRef::field(c0, "fx");
            record.target = ElementRef::field(c1, "fx");
            break;
        case RefactoringKind::Move:
        case RefactoringKind::PullUpMethod:
        case RefactoringKind::PushDownMethod:
            record.source = ElementRef::method(c0, "a()");
            record.target = ElementRef::method(c1, "a()");
            break;
        default:  // extract_move, move_rename, inline
            record.source = ElementRef::method(c0, "a()");
            record.target = ElementRef::method(c1, "b()");
            break;
    }
    return record;
}

CompositeKind pick_kind(const std::map<CompositeKind, double>& weights, double total,
                        SplitMix64& rng) {
    double roll = rng.unit() * total;
    CompositeKind last_positive = CompositeKind::MethodComposition;
    for (CompositeKind kind : kAllCompositeKinds) {
        const auto it = weights.find(kind);
        if (it == weights.end() || it->second <= 0.0) continue;
        last_positive = kind;
        roll -= it->second;
        if (roll < 0) return kind;
    }
    return last_positive;  // rounding residue lands on the last positive weight
}

}  // namespace

SynthDataset synthesize(const SynthOptions& options) {
    std::map<CompositeKind, double> weights = options.mix;
    if (weights.empty()) {
        for (CompositeKind kind : kAllCompositeKinds) weights[kind] = 1.0;
    }
    double total = 0.0;
    for (const auto& [kind, weight] : weights) {
        if (weight < 0.0) {
            throw std::invalid_argument("composite-mix weight for '" +
                                        std::string(to_tag(kind)) + "' is negative");
        }
        total += weight;
    }
    if (total <= 0.0) {
        throw std::invalid_argument("composite-mix weights must sum to a positive value");
    }

    SplitMix64 rng(options.seed);
    SynthDataset dataset;

    std::size_t noise_target = static_cast<std::size_t>(
        std::llround(options.noise * static_cast<double>(options.singles)));
    noise_target = std::min(noise_target, options.singles);
    std::size_t budget = options.singles - noise_target;

    std::size_t composite_index = 0;
    while (budget >= 2) {
        CompositePlan plan;
        plan.kind = pick_kind(weights, total, rng);
        plan.index = composite_index++;
        const std::size_t max_size = std::min<std::size_t>(6, budget);
        plan.size = 2 + rng.below(max_size - 1);
        if (budget - plan.size == 1) {
            // Never strand a single un-plantable record in the budget.
            plan.size = plan.size < max_size ? plan.size + 1 : plan.size - 1;
        }
        plan.multi_commit = plan.size >= 2 && rng.chance(options.multi_commit);

        ElementRef anchor;
        std::vector<RefactoringRecord> members = plant_members(options, plan, rng, anchor);
        PlantedComposite planted;
        planted.kind = plan.kind;
        planted.anchor = anchor;
        for (const RefactoringRecord& member : members) planted.member_ids.push_back(member.id);
        std::sort(planted.member_ids.begin(), planted.member_ids.end());
        dataset.planted.push_back(std::move(planted));
        budget -= plan.size;
        for (RefactoringRecord& member : members) dataset.records.push_back(std::move(member));
    }
    const std::size_t noise_count = noise_target + budget;  // leftover becomes noise
    for (std::size_t j = 0; j < noise_count; ++j) {
        RefactoringRecord record = noise_record(options, j, rng);
        dataset.noise_ids.push_back(record.id);
        dataset.records.push_back(std::move(record));
    }

    // Fisher-Yates so planted members are not adjacent in the output.
    for (std::size_t i = dataset.records.size(); i > 1; --i) {
        std::swap(dataset.records[i - 1], dataset.records[rng.below(i)]);
    }
    return dataset;
}

std::string to_jsonl(const std::vector<RefactoringRecord>& records) {
    std::string out;
    for (const RefactoringRecord& record : records) {
        json obj;
        obj["id"] = record.id;
        obj["project"] = record.project;
        obj["commit"] = record.commit;
        if (record.timestamp) obj["timestamp"] = format_timestamp(*record.timestamp);
        obj["type"] = std::string(to_tag(record.kind));
        const auto element_json = [&](const ElementRef& element) {
            json member;
            member["class"] = element.class_fqn;
            if (element.member_kind == MemberKind::Method) {
                member["method"] = element.member;
            } else {
                member["field"] = element.member;
            }
            return member;
        };
        obj["source"] = element_json(record.source);
        obj["target"] = element_json(record.target);
        out += obj.dump();
        out += "\n";
    }
    return out;
}

std::string ground_truth_json(const SynthDataset& dataset, const SynthOptions& options) {
    json planted = json::array();
    for (const PlantedComposite& composite : dataset.planted) {
        json anchor;
        anchor["class"] = composite.anchor.class_fqn;
        if (composite.anchor.member_kind == MemberKind::Class) {
            anchor["member"] = nullptr;
        } else {
            anchor["member"] = composite.anchor.member;
        }
        planted.push_back(json{{"kind", std::string(to_tag(composite.kind))},
                               {"anchor", std::move(anchor)},
                               {"member_ids", composite.member_ids}});
    }
    const json out{{"seed", options.seed},
                   {"singles", dataset.records.size()},
                   {"planted", std::move(planted)},
                   {"noise_ids", dataset.noise_ids}};
    return out.dump(2) + "\n";
}

}  // namespace compminer
