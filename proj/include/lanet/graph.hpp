#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lanet/corpus.hpp"
#include "lanet/error.hpp"
#include "lanet/extract.hpp"
#include "lanet/network.hpp"

namespace lanet {

// ── Property-graph model ──────────────────────────────────────────────────

struct LocationNode {
    std::string location_id;
    std::string name;
    std::string formatted_address;
    double latitude = 0.0;
    double longitude = 0.0;
    std::vector<std::string> categories;
    int review_count = 0;

    bool operator==(const LocationNode&) const = default;
};

struct ActivityNode {
    std::string name;  // "(v1/v2/..., concept)"

    bool operator==(const ActivityNode&) const = default;
};

// "Is_Performed_At" link.
struct ActivityLocationLink {
    std::string activity;
    std::string location;
    int activity_frequency = 0;
    double popularity_index = 0.0;
    double gc_score = 0.0;
    double sc_score = 0.0;
    std::optional<double> bou_m;  // empty = unbounded
    int concept_cf = 0;           // concept frequency at this location

    bool operator==(const ActivityLocationLink&) const = default;
};

// "Is_Similar_To" link; undirected, stored with loc_p < loc_q.
struct InterLocationLink {
    std::string loc_p;
    std::string loc_q;
    double similarity = 0.0;
    double distance_m = 0.0;
    std::vector<std::string> common_activities;

    bool operator==(const InterLocationLink&) const = default;
};

struct LANetGraph {
    std::vector<LocationNode> locations;        // sorted by location_id
    std::vector<ActivityNode> activities;       // sorted by name
    std::vector<ActivityLocationLink> al_links; // sorted by (activity, location)
    std::vector<InterLocationLink> il_links;    // sorted by (loc_p, loc_q)

    bool operator==(const LANetGraph&) const = default;

    const LocationNode* find_location(const std::string& id) const {
        for (const auto& l : locations)
            if (l.location_id == id) return &l;
        return nullptr;
    }

    const LocationNode& location(const std::string& id) const {
        if (const auto* l = find_location(id)) return *l;
        throw NotFoundError("unknown location: " + id);
    }

    bool has_activity(const std::string& name) const {
        for (const auto& a : activities)
            if (a.name == name) return true;
        return false;
    }

    std::vector<const ActivityLocationLink*> links_of_location(const std::string& id) const {
        std::vector<const ActivityLocationLink*> out;
        for (const auto& l : al_links)
            if (l.location == id) out.push_back(&l);
        return out;
    }

    std::vector<const ActivityLocationLink*> links_of_activity(const std::string& name) const {
        std::vector<const ActivityLocationLink*> out;
        for (const auto& l : al_links)
            if (l.activity == name) out.push_back(&l);
        return out;
    }

    const ActivityLocationLink* find_al_link(const std::string& activity,
                                             const std::string& location) const {
        for (const auto& l : al_links)
            if (l.activity == activity && l.location == location) return &l;
        return nullptr;
    }

    std::vector<const InterLocationLink*> il_links_of(const std::string& id) const {
        std::vector<const InterLocationLink*> out;
        for (const auto& l : il_links)
            if (l.loc_p == id || l.loc_q == id) out.push_back(&l);
        return out;
    }

    // Structural invariants that must hold for every assembled graph.
    void validate() const {
        std::set<std::string> loc_ids;
        for (const auto& l : locations)
            if (!loc_ids.insert(l.location_id).second)
                throw ValidationError("duplicate location node: " + l.location_id);
        std::set<std::string> act_names;
        for (const auto& a : activities)
            if (!act_names.insert(a.name).second)
                throw ValidationError("duplicate activity node: " + a.name);
        std::set<std::pair<std::string, std::string>> al_keys;
        for (const auto& l : al_links) {
            if (!act_names.count(l.activity) || !loc_ids.count(l.location))
                throw ValidationError("activity-location link references missing node");
            if (!al_keys.insert({l.activity, l.location}).second)
                throw ValidationError("duplicate activity-location link");
            if (l.activity_frequency < 1)
                throw ValidationError("activity-location link with AF < 1");
        }
        for (const auto& a : activities)
            if (std::none_of(al_links.begin(), al_links.end(),
                             [&](const auto& l) { return l.activity == a.name; }))
                throw ValidationError("activity node without any link: " + a.name);
        for (const auto& l : il_links) {
            if (l.loc_p >= l.loc_q)
                throw ValidationError("inter-location link endpoints out of order");
            if (!loc_ids.count(l.loc_p) || !loc_ids.count(l.loc_q))
                throw ValidationError("inter-location link references missing location");
            if (!(l.similarity > 0.0) || l.similarity > 1.0)
                throw ValidationError("inter-location link with similarity outside (0,1]");
            if (l.common_activities.empty())
                throw ValidationError("inter-location link with empty common activity list");
            for (const auto& name : l.common_activities)
                if (!act_names.count(name))
                    throw ValidationError("common activity list references missing node");
        }
    }
};

// Per-location concept statistics attached to activity-location links.
struct ConceptScoreInfo {
    int cf = 0;
    int cli = 0;
    double gc_score = 0.0;
    double sc_score = 0.0;
};

// location_id -> concept -> scores
using LocationConceptScores = std::map<std::string, std::map<std::string, ConceptScoreInfo>>;

// ── Assembly ──────────────────────────────────────────────────────────────

// Builds the property graph from the pipeline products. Inputs must agree:
// location ids across corpus/activity sets/matrix, and matrix cells equal to
// the per-location AF values.
inline LANetGraph assemble_graph(const Corpus& corpus, const std::vector<ActivitySet>& asets,
                                 const LocationConceptScores& scores,
                                 const ActivityLocationMatrix& alm,
                                 const std::vector<std::vector<double>>& si,
                                 const std::vector<std::vector<double>>& dist,
                                 const std::vector<std::vector<BouEntry>>& bou) {
    int m = alm.cols();
    if (static_cast<int>(corpus.size()) != m || static_cast<int>(asets.size()) != m)
        throw ValidationError("graph assembly: corpus, activity sets and matrix disagree");
    std::map<std::string, int> col_of;
    for (int j = 0; j < m; ++j) col_of[alm.location_ids[j]] = j;
    std::map<std::string, int> row_of;
    for (int i = 0; i < alm.rows(); ++i) row_of[alm.activity_names[i]] = i;

    LANetGraph g;
    for (const auto& loc : corpus) {
        if (!col_of.count(loc.location_id))
            throw ValidationError("graph assembly: location missing from matrix: " +
                                  loc.location_id);
        g.locations.push_back({loc.location_id, loc.name, loc.formatted_address, loc.latitude,
                               loc.longitude, loc.categories,
                               static_cast<int>(loc.reviews.size())});
    }

    for (const auto& name : alm.activity_names) g.activities.push_back({name});

    for (const auto& aset : asets) {
        int col = col_of.at(aset.location_id);
        std::map<std::string, BouEntry> bou_by_name;
        for (const auto& e : bou[col]) bou_by_name[e.activity_name] = e;
        auto score_it = scores.find(aset.location_id);
        for (const auto& [name, rec] : aset.activities) {
            int row = row_of.at(name);
            if (alm.cells[row][col] != rec.af())
                throw ValidationError("graph assembly: matrix cell disagrees with activity set"
                                      " for " + name + " at " + aset.location_id);
            ActivityLocationLink link;
            link.activity = name;
            link.location = aset.location_id;
            link.activity_frequency = rec.af();
            link.popularity_index = popularity_index(alm, row, col);
            if (score_it != scores.end()) {
                auto cs = score_it->second.find(rec.concept_name);
                if (cs != score_it->second.end()) {
                    link.gc_score = cs->second.gc_score;
                    link.sc_score = cs->second.sc_score;
                    link.concept_cf = cs->second.cf;
                }
            }
            auto be = bou_by_name.find(name);
            if (be != bou_by_name.end()) link.bou_m = be->second.bou_m;
            g.al_links.push_back(std::move(link));
        }
    }
    std::sort(g.al_links.begin(), g.al_links.end(), [](const auto& a, const auto& b) {
        return std::tie(a.activity, a.location) < std::tie(b.activity, b.location);
    });

    // Inter-location links exist exactly where SI > 0.
    std::map<std::string, std::set<std::string>> names_by_loc;
    for (const auto& aset : asets)
        for (const auto& [name, rec] : aset.activities)
            names_by_loc[aset.location_id].insert(name);
    for (int p = 0; p < m; ++p) {
        for (int q = p + 1; q < m; ++q) {
            if (!(si[p][q] > 0.0)) continue;
            InterLocationLink link;
            link.loc_p = alm.location_ids[p];
            link.loc_q = alm.location_ids[q];
            link.similarity = si[p][q];
            link.distance_m = dist[p][q];
            const auto& sp = names_by_loc[link.loc_p];
            const auto& sq = names_by_loc[link.loc_q];
            for (const auto& name : sp)
                if (sq.count(name)) link.common_activities.push_back(name);
            g.il_links.push_back(std::move(link));
        }
    }

    g.validate();
    return g;
}

}  // namespace lanet
