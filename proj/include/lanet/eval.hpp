#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lanet/corpus.hpp"
#include "lanet/extract.hpp"
#include "lanet/graph.hpp"
#include "lanet/query.hpp"
#include "lanet/text.hpp"

namespace lanet {

// ── Baseline extractor ────────────────────────────────────────────────────

// Window-based extraction: each non-copula verb pairs with the nearest noun
// among the five tokens following it. No dependency information, no relevance
// filter, no merge. By construction it never pairs a verb with a noun that
// precedes it, which is exactly its passive-voice blind spot.
inline ActivitySet baseline_extract(const LocationRecord& location) {
    ActivitySet out;
    out.location_id = location.location_id;
    for (const auto& review : location.reviews) {
        for (const auto& sentence : review.sentences) {
            int n = static_cast<int>(sentence.tokens.size());
            for (const auto& t : sentence.tokens) {
                if (!is_verb_pos(t.pos) || t.lemma == "be") continue;
                for (int j = t.index + 1; j <= t.index + 5 && j < n; ++j) {
                    if (!is_noun_pos(sentence.tokens[j].pos)) continue;
                    std::string verb = to_lower(t.lemma);
                    std::string concept_name = to_lower(sentence.tokens[j].lemma);
                    std::string name = activity_name({verb}, concept_name);
                    auto& rec = out.activities[name];
                    if (rec.verbs.empty()) {
                        rec.verbs = {verb};
                        rec.concept_name = concept_name;
                    }
                    rec.supporting_reviews.insert(review.review_id);
                    break;  // nearest noun only
                }
            }
        }
    }
    return out;
}

// ── Accuracy ──────────────────────────────────────────────────────────────

// |Aset ∩ GT| / |Aset|, where a merged activity matches a ground-truth entry
// through any of its member verbs. Undefined (no result) for an empty set.
inline std::optional<double> accuracy(const ActivitySet& aset,
                                      const std::set<std::string>& gt_names) {
    if (aset.activities.empty()) return std::nullopt;
    std::vector<ActivityName> gt;
    gt.reserve(gt_names.size());
    for (const auto& name : gt_names) gt.push_back(ActivityName::parse(name));
    int matched = 0;
    for (const auto& [name, rec] : aset.activities) {
        ActivityName mine{rec.verbs, rec.concept_name};
        for (const auto& g : gt)
            if (mine.matches(g)) {
                ++matched;
                break;
            }
    }
    return static_cast<double>(matched) / static_cast<double>(aset.activities.size());
}

// ── Rank shift ────────────────────────────────────────────────────────────

struct RankShift {
    std::string activity;
    int subject_rank = 0;                 // 1-based
    std::optional<int> baseline_rank;     // empty = absent from the baseline
    std::optional<int> shift;             // baseline − subject, when both exist
};

// Locates each subject top-k activity in the baseline ranking (merged groups
// match any member; the best member rank counts) and reports the shift.
inline std::vector<RankShift> rank_shift(const std::vector<std::string>& subject_topk,
                                         const std::vector<std::string>& baseline_ranking) {
    std::vector<ActivityName> baseline;
    baseline.reserve(baseline_ranking.size());
    for (const auto& name : baseline_ranking) baseline.push_back(ActivityName::parse(name));
    std::vector<RankShift> out;
    for (std::size_t i = 0; i < subject_topk.size(); ++i) {
        RankShift row;
        row.activity = subject_topk[i];
        row.subject_rank = static_cast<int>(i) + 1;
        ActivityName mine = ActivityName::parse(subject_topk[i]);
        for (std::size_t r = 0; r < baseline.size(); ++r) {
            if (mine.matches(baseline[r])) {
                row.baseline_rank = static_cast<int>(r) + 1;
                row.shift = *row.baseline_rank - row.subject_rank;
                break;  // best (lowest) baseline rank
            }
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Full AF ranking of a location's activities in a graph (AF descending, name
// ascending), used as the baseline rank list.
inline std::vector<std::string> full_ranking(const LANetGraph& g, const std::string& location_id) {
    auto links = g.links_of_location(location_id);
    std::sort(links.begin(), links.end(), [](const auto* a, const auto* b) {
        if (a->activity_frequency != b->activity_frequency)
            return a->activity_frequency > b->activity_frequency;
        return a->activity < b->activity;
    });
    std::vector<std::string> out;
    out.reserve(links.size());
    for (const auto* l : links) out.push_back(l->activity);
    return out;
}

// ── Win-loss experiment ───────────────────────────────────────────────────

struct WinLossTally {
    int wins = 0;    // system A recommends the location with higher AF
    int losses = 0;  // system B does
    int draws = 0;

    int total() const { return wins + losses + draws; }
};

// Per query activity, both systems recommend their best location; equal
// locations draw, otherwise the system whose own knowledgebase reports the
// higher AF wins. Queries unsupported by both systems are excluded; a system
// that alone supports the query wins it (the other's AF is zero).
inline WinLossTally win_loss(const std::vector<std::string>& queries, const LANetGraph& a,
                             const LANetGraph& b) {
    WinLossTally tally;
    for (const auto& q : queries) {
        ActivityName query = parse_activity_query(q);
        auto ra = recommend_location(a, q);
        auto rb = recommend_location(b, q);
        if (!ra && !rb) continue;
        if (ra && rb && *ra == *rb) {
            ++tally.draws;
            continue;
        }
        int af_a = ra ? activity_frequency_at(a, query, *ra) : 0;
        int af_b = rb ? activity_frequency_at(b, query, *rb) : 0;
        if (af_a > af_b)
            ++tally.wins;
        else if (af_b > af_a)
            ++tally.losses;
        else
            ++tally.draws;
    }
    return tally;
}

// Distinct activity names across both knowledgebases, the query workload of
// the win-loss experiment.
inline std::vector<std::string> distinct_activity_queries(const LANetGraph& a,
                                                          const LANetGraph& b) {
    std::set<std::string> names;
    for (const auto& n : a.activities) names.insert(n.name);
    for (const auto& n : b.activities) names.insert(n.name);
    return {names.begin(), names.end()};
}

// ── CSV reports ───────────────────────────────────────────────────────────

inline std::string accuracy_csv(const std::vector<std::tuple<std::string, int, int>>& rows) {
    // rows: (location_id, |aset|, matched)
    std::string out = "location_id,activities,matched,accuracy\n";
    for (const auto& [loc, total, matched] : rows) {
        out += loc + ',' + std::to_string(total) + ',' + std::to_string(matched) + ',';
        out += total == 0 ? std::string("no-result")
                          : fmt_display(static_cast<double>(matched) / total);
        out += '\n';
    }
    return out;
}

inline std::string redundancy_csv(const std::vector<std::tuple<std::string, int, int>>& rows) {
    std::string out = "location_id,redundant_before,redundant_after\n";
    for (const auto& [loc, before, after] : rows)
        out += loc + ',' + std::to_string(before) + ',' + std::to_string(after) + '\n';
    return out;
}

// k × locations matrix of rank shifts; "ABSENT" marks activities the baseline
// never found, empty cells pad locations with fewer than k activities.
inline std::string rank_shift_csv(const std::vector<std::string>& location_ids,
                                  const std::map<std::string, std::vector<RankShift>>& by_location,
                                  int k) {
    std::string out = "rank";
    for (const auto& loc : location_ids) out += ",loc_" + loc;
    out += '\n';
    for (int r = 1; r <= k; ++r) {
        out += std::to_string(r);
        for (const auto& loc : location_ids) {
            out += ',';
            auto it = by_location.find(loc);
            if (it == by_location.end() || r > static_cast<int>(it->second.size())) continue;
            const RankShift& row = it->second[r - 1];
            out += row.shift ? std::to_string(*row.shift) : std::string("ABSENT");
        }
        out += '\n';
    }
    return out;
}

inline std::string win_loss_csv(const WinLossTally& t) {
    std::string out = "wins,losses,draws,total,win_pct,loss_pct,draw_pct\n";
    out += std::to_string(t.wins) + ',' + std::to_string(t.losses) + ',' +
           std::to_string(t.draws) + ',' + std::to_string(t.total());
    auto pct = [&](int n) {
        return t.total() == 0 ? std::string("0") : fmt_display(100.0 * n / t.total());
    };
    out += ',' + pct(t.wins) + ',' + pct(t.losses) + ',' + pct(t.draws) + '\n';
    return out;
}

}  // namespace lanet
