#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lanet/corpus.hpp"
#include "lanet/error.hpp"
#include "lanet/extract.hpp"

namespace lanet {

// ── Concept extraction ────────────────────────────────────────────────────

struct ConceptEntry {
    std::string concept_name;
    int cf = 0;  // distinct reviews referring to the concept

    bool operator==(const ConceptEntry&) const = default;
};

// One entry per distinct concept of the activity set; CF is the size of the
// union of supporting reviews over all activities sharing the concept, so a
// concept mentioned several times within one review still counts once.
inline std::vector<ConceptEntry> extract_concepts(const ActivitySet& aset) {
    std::map<std::string, std::set<std::string>> reviews_by_concept;
    for (const auto& [name, rec] : aset.activities) {
        auto& reviews = reviews_by_concept[rec.concept_name];
        reviews.insert(rec.supporting_reviews.begin(), rec.supporting_reviews.end());
    }
    std::vector<ConceptEntry> out;
    for (const auto& [concept_name, reviews] : reviews_by_concept)
        out.push_back({concept_name, static_cast<int>(reviews.size())});
    return out;
}

// ── Category-aware concept hierarchy ──────────────────────────────────────

// Leveled tree of relevant concepts. Level 1 holds the location categories;
// deeper levels hold increasingly specialized concepts. Same-level arcs carry
// RelatedTo/UsedFor, cross-level arcs carry IsA/AtLocation/DerivedFrom and
// span exactly one level.
class ConceptHierarchy {
public:
    struct Node {
        std::string concept_name;
        int level = 0;                       // 1-based; 1 = categories
        std::optional<std::string> parent;   // cross-level anchor, if extended
        std::optional<Relation> parent_rel;
    };

    struct Arc {
        std::string from;
        Relation rel{};
        std::string to;
        int level = 0;  // level of the deeper endpoint

        auto operator<=>(const Arc&) const = default;
    };

    bool contains(const std::string& concept_name) const {
        return nodes_.count(concept_name) > 0;
    }

    // Concept Level Index (root level = 1).
    int level_of(const std::string& concept_name) const {
        auto it = nodes_.find(concept_name);
        if (it == nodes_.end())
            throw NotFoundError("concept not in hierarchy: " + concept_name);
        return it->second.level;
    }

    std::optional<std::string> parent_of(const std::string& concept_name) const {
        auto it = nodes_.find(concept_name);
        if (it == nodes_.end()) return std::nullopt;
        return it->second.parent;
    }

    const std::map<std::string, Node>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    // levels()[k] is the sorted concept list of level k+1.
    const std::vector<std::vector<std::string>>& levels() const { return levels_; }
    int iterations() const { return iterations_; }

    // Structural checks: level 1 equals the categories, every deeper concept
    // comes from the extracted concept set, each concept sits at exactly one
    // level, and arc labels respect the same-level / cross-level split.
    void validate(const std::vector<std::string>& categories,
                  const std::set<std::string>& cset) const {
        std::set<std::string> cats(categories.begin(), categories.end());
        std::set<std::string> level1(levels_.empty() ? std::set<std::string>{}
                                                     : std::set<std::string>(levels_[0].begin(),
                                                                             levels_[0].end()));
        if (level1 != cats)
            throw ValidationError("hierarchy level 1 does not equal the category list");
        std::set<std::string> placed;
        for (std::size_t k = 0; k < levels_.size(); ++k) {
            for (const auto& c : levels_[k]) {
                if (!placed.insert(c).second)
                    throw ValidationError("concept placed at more than one level: " + c);
                if (k > 0 && !cset.count(c))
                    throw ValidationError("non-root concept not in concept set: " + c);
                auto it = nodes_.find(c);
                if (it == nodes_.end() || it->second.level != static_cast<int>(k) + 1)
                    throw ValidationError("node/level bookkeeping mismatch for: " + c);
            }
        }
        if (placed.size() != nodes_.size())
            throw ValidationError("node map does not match level lists");
        for (const auto& arc : arcs_) {
            int lf = level_of(arc.from);
            int lt = level_of(arc.to);
            if (lf == lt) {
                if (arc.rel != Relation::RelatedTo && arc.rel != Relation::UsedFor)
                    throw ValidationError("same-level arc with cross-level relation: " +
                                          arc.from + " -> " + arc.to);
            } else if (lf == lt + 1) {
                if (arc.rel != Relation::IsA && arc.rel != Relation::AtLocation &&
                    arc.rel != Relation::DerivedFrom)
                    throw ValidationError("cross-level arc with same-level relation: " +
                                          arc.from + " -> " + arc.to);
            } else {
                throw ValidationError("arc spans more than one level: " + arc.from + " -> " +
                                      arc.to);
            }
        }
    }

private:
    friend ConceptHierarchy build_cch(const std::vector<std::string>&,
                                      const std::set<std::string>&, const RelationSnapshot&);

    std::map<std::string, Node> nodes_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<std::string>> levels_;
    int iterations_ = 0;
};

namespace detail {

// Matching key for snapshot joins: exact concept string when the snapshot
// knows it, otherwise the head (last) noun of a multi-word concept. Local
// phrases are mostly absent from relation snapshots, so the head noun keeps
// them placeable.
inline std::string snapshot_key(const std::string& concept_name, const RelationSnapshot& snap) {
    if (snap.touches(concept_name)) return concept_name;
    auto pos = concept_name.rfind(' ');
    if (pos == std::string::npos) return concept_name;
    return concept_name.substr(pos + 1);
}

inline bool same_level_linked(const std::string& key, const std::string& anchor_key,
                              const RelationSnapshot& snap) {
    for (Relation r : {Relation::RelatedTo, Relation::UsedFor})
        if (snap.has(key, r, anchor_key) || snap.has(anchor_key, r, key)) return true;
    return false;
}

inline std::optional<Relation> child_of(const std::string& key, const std::string& parent_key,
                                        const RelationSnapshot& snap) {
    for (Relation r : {Relation::IsA, Relation::AtLocation, Relation::DerivedFrom})
        if (snap.has(key, r, parent_key)) return r;
    return std::nullopt;
}

}  // namespace detail

// Grows the hierarchy from the categories by iterating two operations on the
// current deepest level until neither adds anything:
//   Expand — adds concepts linked by RelatedTo/UsedFor (either direction) to
//            a concept already in the level, into the same level;
//   Extend — adds concepts that are a IsA/AtLocation/DerivedFrom child of a
//            concept in the level, forming the next level.
// Concepts are scanned in lexicographic order and attach to the smallest
// qualifying anchor; a concept is added at most once, at its earliest
// opportunity (Expand runs before Extend within an iteration).
inline ConceptHierarchy build_cch(const std::vector<std::string>& categories,
                                  const std::set<std::string>& cset,
                                  const RelationSnapshot& snapshot) {
    if (categories.empty()) throw ValidationError("cannot build hierarchy without categories");
    ConceptHierarchy cch;
    std::set<std::string> level1(categories.begin(), categories.end());
    cch.levels_.emplace_back(level1.begin(), level1.end());
    for (const auto& c : level1)
        cch.nodes_[c] = {c, 1, std::nullopt, std::nullopt};

    std::set<std::string> remaining;
    for (const auto& c : cset)
        if (!cch.nodes_.count(c)) remaining.insert(c);

    while (true) {
        ++cch.iterations_;
        bool added_any = false;
        int level = static_cast<int>(cch.levels_.size());
        auto& current = cch.levels_.back();

        // Expand to a fixpoint: a concept added this phase can anchor later ones.
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = remaining.begin(); it != remaining.end();) {
                const std::string key = detail::snapshot_key(*it, snapshot);
                const std::string* anchor = nullptr;
                for (const auto& x : current) {
                    if (detail::same_level_linked(key, detail::snapshot_key(x, snapshot),
                                                  snapshot)) {
                        anchor = &x;
                        break;  // level lists are sorted: first hit is smallest
                    }
                }
                if (anchor) {
                    cch.nodes_[*it] = {*it, level, std::nullopt, std::nullopt};
                    current.insert(std::lower_bound(current.begin(), current.end(), *it), *it);
                    it = remaining.erase(it);
                    changed = true;
                    added_any = true;
                } else {
                    ++it;
                }
            }
        }

        // Extend into the next level.
        std::vector<std::string> next;
        for (auto it = remaining.begin(); it != remaining.end();) {
            const std::string key = detail::snapshot_key(*it, snapshot);
            const std::string* parent = nullptr;
            Relation rel{};
            for (const auto& x : current) {
                if (auto r = detail::child_of(key, detail::snapshot_key(x, snapshot), snapshot)) {
                    parent = &x;
                    rel = *r;
                    break;
                }
            }
            if (parent) {
                cch.nodes_[*it] = {*it, level + 1, *parent, rel};
                next.push_back(*it);
                it = remaining.erase(it);
                added_any = true;
            } else {
                ++it;
            }
        }
        if (!next.empty()) cch.levels_.push_back(std::move(next));

        if (!added_any) break;
    }

    // Arcs: cross-level parent arcs plus every same-level RelatedTo/UsedFor
    // pair the snapshot connects (covers category-category links).
    std::set<ConceptHierarchy::Arc> arcs;
    for (const auto& [c, node] : cch.nodes_)
        if (node.parent)
            arcs.insert({c, *node.parent_rel, *node.parent, node.level});
    for (const auto& level_concepts : cch.levels_) {
        for (const auto& a : level_concepts) {
            for (const auto& b : level_concepts) {
                if (a == b) continue;
                const std::string ka = detail::snapshot_key(a, snapshot);
                const std::string kb = detail::snapshot_key(b, snapshot);
                for (Relation r : {Relation::RelatedTo, Relation::UsedFor})
                    if (snapshot.has(ka, r, kb))
                        arcs.insert({a, r, b, cch.nodes_.at(a).level});
            }
        }
    }
    cch.arcs_.assign(arcs.begin(), arcs.end());
    return cch;
}

// An activity is relevant iff its concept is a hierarchy node.
inline bool is_relevant(const ActivityRecord& activity, const ConceptHierarchy& cch) {
    return cch.contains(activity.concept_name);
}

// Keeps only relevant activities; AF values are untouched.
inline ActivitySet filter_relevant(const ActivitySet& aset, const ConceptHierarchy& cch) {
    ActivitySet out;
    out.location_id = aset.location_id;
    for (const auto& [name, rec] : aset.activities)
        if (is_relevant(rec, cch)) out.activities.emplace(name, rec);
    return out;
}

// ── Concept scores ────────────────────────────────────────────────────────

struct ConceptScore {
    std::string concept_name;
    int cli = 0;           // concept level index
    double gc_score = 0.0; // log10(CF) / CLI
    double sc_score = 0.0; // log10(CF) * CLI
};

// Scores are undefined for concepts outside the hierarchy.
inline ConceptScore concept_scores(const std::string& concept_name, int cf,
                                   const ConceptHierarchy& cch) {
    int cli = cch.level_of(concept_name);
    double logcf = std::log10(static_cast<double>(cf));
    return {concept_name, cli, logcf / cli, logcf * cli};
}

// Indented level tree followed by the arc list
// ("from<TAB>relation<TAB>to<TAB>level").
inline std::string export_cch(const ConceptHierarchy& cch) {
    std::string out;
    const auto& levels = cch.levels();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        for (const auto& c : levels[k]) {
            out.append(2 * k, ' ');
            out += c;
            out += '\n';
        }
    }
    out += "arcs:\n";
    for (const auto& arc : cch.arcs()) {
        out += arc.from;
        out += '\t';
        out += relation_name(arc.rel);
        out += '\t';
        out += arc.to;
        out += '\t';
        out += std::to_string(arc.level);
        out += '\n';
    }
    return out;
}

}  // namespace lanet
