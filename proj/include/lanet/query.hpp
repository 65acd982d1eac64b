#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lanet/error.hpp"
#include "lanet/graph.hpp"
#include "lanet/network.hpp"

namespace lanet {

// ── Query parsing and matching ────────────────────────────────────────────

// Accepts the canonical "(v1/v2, concept)" form or the bare "verb concept"
// form users type ("have chicken").
inline ActivityName parse_activity_query(const std::string& text) {
    std::string t = trim(text);
    if (t.starts_with("(")) return ActivityName::parse(t);
    auto pos = t.find(' ');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= t.size())
        throw ParseError("activity query needs a verb and a concept: '" + text + "'");
    return ActivityName{{to_lower(t.substr(0, pos))}, to_lower(t.substr(pos + 1))};
}

// A stored activity matches a query when the concepts are equal and the verb
// groups intersect, so "(have, chicken)" finds a merged "(eat/have, chicken)".
inline bool activity_matches(const std::string& stored_name, const ActivityName& query) {
    return ActivityName::parse(stored_name).matches(query);
}

// ── Ranked results ────────────────────────────────────────────────────────

struct RankedEntry {
    std::string item;
    double score = 0.0;
};

struct RankedList {
    std::vector<RankedEntry> entries;
};

enum class ConceptFilter { None, Generalized, Specialized };
enum class LocationRankBy { AF, API };

namespace detail {

// Top-m distinct concepts at a location by the chosen score, ties broken by
// CF descending then concept ascending.
inline std::set<std::string> top_m_concepts(const std::vector<const ActivityLocationLink*>& links,
                                            ConceptFilter filter, int m) {
    struct Row {
        std::string concept_name;
        double score;
        int cf;
    };
    std::map<std::string, Row> distinct;
    for (const auto* l : links) {
        auto parsed = ActivityName::parse(l->activity);
        double score = filter == ConceptFilter::Specialized ? l->sc_score : l->gc_score;
        distinct.emplace(parsed.concept_name, Row{parsed.concept_name, score, l->concept_cf});
    }
    std::vector<Row> rows;
    for (const auto& [name, row] : distinct) rows.push_back(row);
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.cf != b.cf) return a.cf > b.cf;
        return a.concept_name < b.concept_name;
    });
    std::set<std::string> keep;
    for (int i = 0; i < static_cast<int>(rows.size()) && i < m; ++i)
        keep.insert(rows[i].concept_name);
    return keep;
}

}  // namespace detail

// Activities at a location ranked by AF descending (name ascending on ties).
// With a concept filter, the top-m distinct concepts by SC/GC score are
// selected first and the ranking is restricted to their activities.
inline RankedList top_k_activities(const LANetGraph& g, const std::string& location_id, int k,
                                   ConceptFilter filter = ConceptFilter::None, int m = 1) {
    g.location(location_id);  // not-found check
    auto links = g.links_of_location(location_id);
    if (filter != ConceptFilter::None) {
        if (m < 1) throw ValidationError("concept filter needs m >= 1");
        auto keep = detail::top_m_concepts(links, filter, m);
        std::erase_if(links, [&](const ActivityLocationLink* l) {
            return !keep.count(ActivityName::parse(l->activity).concept_name);
        });
    }
    std::sort(links.begin(), links.end(),
              [](const ActivityLocationLink* a, const ActivityLocationLink* b) {
                  if (a->activity_frequency != b->activity_frequency)
                      return a->activity_frequency > b->activity_frequency;
                  return a->activity < b->activity;
              });
    RankedList out;
    for (const auto* l : links) {
        if (static_cast<int>(out.entries.size()) >= k) break;
        out.entries.push_back({l->activity, static_cast<double>(l->activity_frequency)});
    }
    return out;
}

// Locations supporting an activity, ranked by AF or API descending
// (location-id ascending on ties).
inline RankedList top_k_locations(const LANetGraph& g, const std::string& activity_query, int k,
                                  LocationRankBy rank_by = LocationRankBy::AF) {
    ActivityName query = parse_activity_query(activity_query);
    std::vector<const ActivityLocationLink*> links;
    for (const auto& l : g.al_links)
        if (activity_matches(l.activity, query)) links.push_back(&l);
    if (links.empty()) throw NotFoundError("unknown activity: " + activity_query);
    auto score = [&](const ActivityLocationLink* l) {
        return rank_by == LocationRankBy::AF ? static_cast<double>(l->activity_frequency)
                                             : l->popularity_index;
    };
    std::sort(links.begin(), links.end(),
              [&](const ActivityLocationLink* a, const ActivityLocationLink* b) {
                  if (score(a) != score(b)) return score(a) > score(b);
                  return a->location < b->location;
              });
    RankedList out;
    for (const auto* l : links) {
        if (static_cast<int>(out.entries.size()) >= k) break;
        out.entries.push_back({l->location, score(l)});
    }
    return out;
}

// ── Alternate locations ───────────────────────────────────────────────────

struct AlternateRow {
    std::string location_id;
    double similarity = 0.0;
    double distance_m = 0.0;
    std::vector<std::string> common_activities;
};

// Inter-location neighbours ranked by SI descending, ties by distance
// ascending then id ascending.
inline std::vector<AlternateRow> alternate_locations(const LANetGraph& g,
                                                     const std::string& location_id, int k) {
    g.location(location_id);
    std::vector<AlternateRow> rows;
    for (const auto* l : g.il_links_of(location_id)) {
        const std::string& other = l->loc_p == location_id ? l->loc_q : l->loc_p;
        rows.push_back({other, l->similarity, l->distance_m, l->common_activities});
    }
    std::sort(rows.begin(), rows.end(), [](const AlternateRow& a, const AlternateRow& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
        return a.location_id < b.location_id;
    });
    if (static_cast<int>(rows.size()) > k) rows.resize(k);
    return rows;
}

// ── Uniqueness ────────────────────────────────────────────────────────────

struct UniquenessReport {
    std::string activity;                      // stored node name
    std::optional<double> bou_m;               // empty = unbounded
    std::optional<std::string> nearest_alternative;
    struct Alternative {
        std::string location_id;
        double distance_m = 0.0;
        int af = 0;
    };
    std::vector<Alternative> alternatives;     // ascending distance, id on ties
};

// The stored BoU plus every other location supporting the activity, ordered
// by distance from the subject location.
inline UniquenessReport uniqueness_report(const LANetGraph& g, const std::string& location_id,
                                          const std::string& activity_query) {
    const LocationNode& here = g.location(location_id);
    ActivityName query = parse_activity_query(activity_query);
    const ActivityLocationLink* link = nullptr;
    for (const auto& l : g.al_links)
        if (l.location == location_id && activity_matches(l.activity, query)) {
            link = &l;
            break;
        }
    if (!link)
        throw NotFoundError("activity '" + activity_query + "' is not performed at location " +
                            location_id);
    UniquenessReport report;
    report.activity = link->activity;
    report.bou_m = link->bou_m;
    for (const auto* other : g.links_of_activity(link->activity)) {
        if (other->location == location_id) continue;
        const LocationNode& loc = g.location(other->location);
        double d = radial_distance_m(here.latitude, here.longitude, loc.latitude, loc.longitude);
        report.alternatives.push_back({other->location, d, other->activity_frequency});
    }
    std::sort(report.alternatives.begin(), report.alternatives.end(),
              [](const auto& a, const auto& b) {
                  if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
                  return a.location_id < b.location_id;
              });
    if (!report.alternatives.empty())
        report.nearest_alternative = report.alternatives.front().location_id;
    return report;
}

// ── Broadcast digest ──────────────────────────────────────────────────────

struct BroadcastDigest {
    double center_lat = 0.0;
    double center_lon = 0.0;
    double radius_m = 0.0;
    int k = 0;
    struct Entry {
        std::string location_id;
        std::string name;
        double distance_m = 0.0;
        struct Act {
            std::string activity;
            int af = 0;
            std::optional<double> bou_m;
        };
        std::vector<Act> top;
    };
    std::vector<Entry> entries;  // ascending location_id
};

// Top-k activity lists for every location within the radius of the center.
inline BroadcastDigest broadcast_digest(const LANetGraph& g, double lat, double lon,
                                        double radius_m, int k) {
    if (!(radius_m > 0.0)) throw ValidationError("broadcast radius must be positive");
    BroadcastDigest digest{lat, lon, radius_m, k, {}};
    for (const auto& loc : g.locations) {
        double d = radial_distance_m(lat, lon, loc.latitude, loc.longitude);
        if (d > radius_m) continue;
        BroadcastDigest::Entry entry{loc.location_id, loc.name, d, {}};
        for (const auto& ranked : top_k_activities(g, loc.location_id, k).entries) {
            const auto* link = g.find_al_link(ranked.item, loc.location_id);
            entry.top.push_back({ranked.item, static_cast<int>(ranked.score),
                                 link ? link->bou_m : std::nullopt});
        }
        digest.entries.push_back(std::move(entry));
    }
    return digest;
}

// Line-delimited digest stream for periodic emission.
inline std::string serialize_digest(const BroadcastDigest& d) {
    std::string out = "digest\t" + fmt_double(d.center_lat) + '\t' + fmt_double(d.center_lon) +
                      '\t' + fmt_double(d.radius_m) + '\t' + std::to_string(d.k) + '\n';
    for (const auto& e : d.entries) {
        out += "loc\t" + e.location_id + '\t' + e.name + '\t' + fmt_display(e.distance_m) + '\n';
        for (const auto& a : e.top)
            out += "act\t" + e.location_id + '\t' + a.activity + '\t' + std::to_string(a.af) +
                   '\t' + (a.bou_m ? fmt_display(*a.bou_m) : std::string("unbounded")) + '\n';
    }
    return out;
}

// ── Recommendation ────────────────────────────────────────────────────────

// The candidate with the highest AF for the activity; smallest location id on
// ties; no result when no candidate supports it. An empty candidate list
// means "all locations".
inline std::optional<std::string> recommend_location(const LANetGraph& g,
                                                     const std::string& activity_query,
                                                     const std::vector<std::string>& candidates = {}) {
    ActivityName query = parse_activity_query(activity_query);
    std::set<std::string> allowed(candidates.begin(), candidates.end());
    std::optional<std::string> best;
    int best_af = 0;
    for (const auto& l : g.al_links) {
        if (!allowed.empty() && !allowed.count(l.location)) continue;
        if (!activity_matches(l.activity, query)) continue;
        if (l.activity_frequency > best_af ||
            (l.activity_frequency == best_af && best && l.location < *best)) {
            best = l.location;
            best_af = l.activity_frequency;
        }
    }
    return best;
}

// AF of the best matching activity at a location (0 when unsupported).
inline int activity_frequency_at(const LANetGraph& g, const ActivityName& query,
                                 const std::string& location_id) {
    int best = 0;
    for (const auto& l : g.al_links)
        if (l.location == location_id && activity_matches(l.activity, query))
            best = std::max(best, l.activity_frequency);
    return best;
}

}  // namespace lanet
