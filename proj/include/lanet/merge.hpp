#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lanet/concepts.hpp"
#include "lanet/corpus.hpp"
#include "lanet/extract.hpp"

namespace lanet {

// ── Hidden senses ─────────────────────────────────────────────────────────

// Index of RelatedTo/IsA/UsedFor triples keyed by endpoint: the senses of a
// key are the opposite endpoints of every such triple touching it.
class SenseIndex {
public:
    static SenseIndex build(const RelationSnapshot& snapshot) {
        SenseIndex idx;
        for (const auto& t : snapshot.triples()) {
            if (t.rel != Relation::RelatedTo && t.rel != Relation::IsA &&
                t.rel != Relation::UsedFor)
                continue;
            idx.by_endpoint_[t.head].insert(t.tail);
            idx.by_endpoint_[t.tail].insert(t.head);
        }
        return idx;
    }

    const std::set<std::string>& senses_for(const std::string& key) const {
        auto it = by_endpoint_.find(key);
        return it == by_endpoint_.end() ? empty_ : it->second;
    }

private:
    std::map<std::string, std::set<std::string>> by_endpoint_;
    std::set<std::string> empty_;
};

// Senses reachable from the space-joined phrase "verb concept" and from the
// bare verb. Unknown keys yield the empty set.
inline std::set<std::string> hidden_senses(const std::string& verb,
                                           const std::string& concept_name,
                                           const SenseIndex& index) {
    std::set<std::string> out = index.senses_for(verb + " " + concept_name);
    const auto& bare = index.senses_for(verb);
    out.insert(bare.begin(), bare.end());
    return out;
}

// ── Sense-aware merging ───────────────────────────────────────────────────

struct MergeGroup {
    std::string concept_name;
    std::vector<std::string> verbs;  // sorted
    std::string sense;               // the shared hidden sense behind the merge
    int af_after = 0;
};

struct MergeResult {
    ActivitySet merged;
    std::vector<MergeGroup> groups;
};

namespace detail {

struct WorkRecord {
    ActivityRecord rec;
    std::optional<std::string> sense;  // smallest sense that justified a merge

    std::set<std::string> senses(const SenseIndex& idx) const {
        std::set<std::string> out;
        for (const auto& v : rec.verbs) {
            auto s = hidden_senses(v, rec.concept_name, idx);
            out.insert(s.begin(), s.end());
        }
        return out;
    }
};

inline void absorb(WorkRecord& into, const WorkRecord& other, const std::string& sense) {
    for (const auto& v : other.rec.verbs) {
        auto pos = std::lower_bound(into.rec.verbs.begin(), into.rec.verbs.end(), v);
        if (pos == into.rec.verbs.end() || *pos != v) into.rec.verbs.insert(pos, v);
    }
    into.rec.supporting_reviews.insert(other.rec.supporting_reviews.begin(),
                                       other.rec.supporting_reviews.end());
    if (!into.sense || sense < *into.sense) into.sense = sense;
    if (other.sense && *other.sense < *into.sense) into.sense = *other.sense;
}

}  // namespace detail

// Merges redundant activities per location. Two passes repeat to a fixpoint:
//   direct      — activities with the same concept whose hidden-sense sets
//                 intersect merge (verb groups and review sets union, AF
//                 recomputed from the union);
//   propagation — if the activities of a concept's nearest hierarchy ancestor
//                 with a recorded merge were merged over verb set V, then
//                 activities of the concept whose verbs fall in V merge too.
// Supporting reviews are unioned rather than AFs summed so one review that
// mentions several members is not double counted.
inline MergeResult merge_redundant(const ActivitySet& aset, const ConceptHierarchy& cch,
                                   const SenseIndex& senses) {
    // concept -> records at that concept, scanned in (concept, verbs) order.
    std::map<std::string, std::vector<detail::WorkRecord>> by_concept;
    for (const auto& [name, rec] : aset.activities)
        by_concept[rec.concept_name].push_back({rec, std::nullopt});

    bool changed = true;
    while (changed) {
        changed = false;

        // Direct pass.
        for (auto& [concept_name, recs] : by_concept) {
            if (recs.size() < 2) continue;
            std::vector<std::set<std::string>> sense_sets;
            sense_sets.reserve(recs.size());
            for (const auto& r : recs) sense_sets.push_back(r.senses(senses));
            for (std::size_t i = 0; i < recs.size(); ++i) {
                for (std::size_t j = i + 1; j < recs.size();) {
                    std::optional<std::string> common;
                    for (const auto& s : sense_sets[i])
                        if (sense_sets[j].count(s)) {
                            common = s;
                            break;  // sets are ordered: first hit is smallest
                        }
                    if (common) {
                        detail::absorb(recs[i], recs[j], *common);
                        sense_sets[i].insert(sense_sets[j].begin(), sense_sets[j].end());
                        recs.erase(recs.begin() + j);
                        sense_sets.erase(sense_sets.begin() + j);
                        changed = true;
                    } else {
                        ++j;
                    }
                }
            }
        }

        // Propagation pass.
        for (auto& [concept_name, recs] : by_concept) {
            if (recs.size() < 2) continue;
            if (!cch.contains(concept_name)) continue;
            // Nearest ancestor that recorded a merge; farther ancestors are
            // consulted only when the nearer ones have none.
            std::vector<const detail::WorkRecord*> ancestor_groups;
            auto ancestor = cch.parent_of(concept_name);
            while (ancestor && ancestor_groups.empty()) {
                auto it = by_concept.find(*ancestor);
                if (it != by_concept.end())
                    for (const auto& r : it->second)
                        if (r.rec.verbs.size() >= 2 && r.sense) ancestor_groups.push_back(&r);
                if (ancestor_groups.empty()) ancestor = cch.parent_of(*ancestor);
            }
            for (const auto* group : ancestor_groups) {
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < recs.size(); ++i) {
                    for (const auto& v : recs[i].rec.verbs) {
                        if (std::binary_search(group->rec.verbs.begin(), group->rec.verbs.end(),
                                               v)) {
                            members.push_back(i);
                            break;
                        }
                    }
                }
                if (members.size() < 2) continue;
                for (std::size_t k = members.size(); k-- > 1;) {
                    detail::absorb(recs[members[0]], recs[members[k]], *group->sense);
                    recs.erase(recs.begin() + members[k]);
                }
                changed = true;
            }
        }
    }

    MergeResult out;
    out.merged.location_id = aset.location_id;
    for (auto& [concept_name, recs] : by_concept) {
        for (auto& wr : recs) {
            if (wr.rec.verbs.size() >= 2)
                out.groups.push_back({concept_name, wr.rec.verbs, wr.sense.value_or(""),
                                      wr.rec.af()});
            out.merged.activities.emplace(wr.rec.name(), std::move(wr.rec));
        }
    }
    return out;
}

// Redundant-activity counts before and after merging: merging k activities
// into one removes k-1 redundancies, so the before count is the drop in
// record count; the after count re-runs detection on the merged set (zero
// once a fixpoint is reached).
inline std::pair<int, int> redundancy_count(const ActivitySet& before, const ActivitySet& after,
                                            const ConceptHierarchy& cch,
                                            const SenseIndex& senses) {
    int b = static_cast<int>(before.activities.size()) -
            static_cast<int>(after.activities.size());
    auto again = merge_redundant(after, cch, senses);
    int a = static_cast<int>(after.activities.size()) -
            static_cast<int>(again.merged.activities.size());
    return {b, a};
}

// Audit log: one line per group, "concept<TAB>sense<TAB>v1/v2/...<TAB>af_after".
inline std::string serialize_merge_audit(const std::vector<MergeGroup>& groups) {
    std::string out;
    for (const auto& g : groups) {
        out += g.concept_name;
        out += '\t';
        out += g.sense;
        out += '\t';
        out += join(g.verbs, "/");
        out += '\t';
        out += std::to_string(g.af_after);
        out += '\n';
    }
    return out;
}

}  // namespace lanet
