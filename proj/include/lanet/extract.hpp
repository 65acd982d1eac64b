#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lanet/corpus.hpp"
#include "lanet/error.hpp"
#include "lanet/text.hpp"

namespace lanet {

// ── Activity types ────────────────────────────────────────────────────────

// Parsed form of an activity name "(v1/v2/..., concept)". Verbs are kept
// sorted; the concept is a lowercase noun or noun-phrase lemma string.
struct ActivityName {
    std::vector<std::string> verbs;
    std::string concept_name;

    std::string str() const {
        return "(" + join(verbs, "/") + ", " + concept_name + ")";
    }

    static ActivityName parse(const std::string& name) {
        if (name.size() < 4 || name.front() != '(' || name.back() != ')')
            throw ParseError("malformed activity name: " + name);
        std::string body = name.substr(1, name.size() - 2);
        auto sep = body.find(", ");
        if (sep == std::string::npos)
            throw ParseError("malformed activity name: " + name);
        ActivityName out;
        out.verbs = split(body.substr(0, sep), '/');
        out.concept_name = body.substr(sep + 2);
        if (out.verbs.empty() || out.concept_name.empty())
            throw ParseError("malformed activity name: " + name);
        return out;
    }

    // True when the two names denote the same concept and share a verb.
    bool matches(const ActivityName& other) const {
        if (concept_name != other.concept_name) return false;
        for (const auto& v : verbs)
            for (const auto& w : other.verbs)
                if (v == w) return true;
        return false;
    }
};

inline std::string activity_name(const std::vector<std::string>& verbs,
                                 const std::string& concept_name) {
    return ActivityName{verbs, concept_name}.str();
}

struct ActivityRecord {
    std::vector<std::string> verbs;            // sorted, unique
    std::string concept_name;
    std::set<std::string> supporting_reviews;  // distinct review ids

    int af() const { return static_cast<int>(supporting_reviews.size()); }
    std::string name() const { return activity_name(verbs, concept_name); }

    bool operator==(const ActivityRecord&) const = default;
};

struct ActivitySet {
    std::string location_id;
    std::map<std::string, ActivityRecord> activities;  // keyed by name()

    bool operator==(const ActivitySet&) const = default;
};

// ── Per-sentence extraction rules ─────────────────────────────────────────

inline bool is_verb_pos(std::string_view pos) { return pos.starts_with("VB"); }
inline bool is_noun_pos(std::string_view pos) { return pos.starts_with("NN"); }

// Verb tokens that can anchor an activity: VB*-tagged, not a copula ("be" in
// any inflection) and not the dependent of an aux/auxpass arc. The arc-based
// auxiliary test keeps main-verb "have"/"had" alive.
inline std::set<int> potential_verbs(const AnnotatedSentence& sentence) {
    std::set<int> aux_dependents;
    for (const auto& arc : sentence.arcs)
        if (arc.label == "aux" || arc.label == "auxpass")
            aux_dependents.insert(arc.dependent);
    std::set<int> out;
    for (const auto& t : sentence.tokens)
        if (is_verb_pos(t.pos) && t.lemma != "be" && !aux_dependents.count(t.index))
            out.insert(t.index);
    return out;
}

// Half-open token span [begin, end).
struct PhraseSpan {
    int begin = 0;
    int end = 0;

    bool contains(int index) const { return index >= begin && index < end; }
    bool operator==(const PhraseSpan&) const = default;
};

namespace detail {

// Maximal runs of >=2 consecutive noun tokens, where is_noun decides
// candidacy per token index.
template <typename Pred>
std::vector<PhraseSpan> noun_runs(const AnnotatedSentence& s, Pred is_noun) {
    std::vector<PhraseSpan> spans;
    int n = static_cast<int>(s.tokens.size());
    int i = 0;
    while (i < n) {
        if (!is_noun(i)) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && is_noun(j)) ++j;
        if (j - i >= 2) spans.push_back({i, j});
        i = j;
    }
    return spans;
}

}  // namespace detail

// Noun phrases: maximal runs of >=2 consecutive NN*-tagged tokens.
inline std::vector<PhraseSpan> noun_phrases(const AnnotatedSentence& sentence) {
    return detail::noun_runs(sentence,
                             [&](int i) { return is_noun_pos(sentence.tokens[i].pos); });
}

struct ExtractedPair {
    int verb_index = 0;
    int noun_index = 0;
    std::string relation;  // arc label, or "ing" for promoted pairs

    bool operator==(const ExtractedPair&) const = default;
};

inline bool pair_producing_label(std::string_view label) {
    return label == "dobj" || label == "ccomp" || label == "nsubjpass" ||
           label.starts_with("prep_");
}

// Dependency-derived (verb, noun) pairs: arcs labeled dobj/ccomp/nsubjpass or
// any collapsed preposition, whose governor is a potential verb and whose
// dependent is noun-tagged. For nsubjpass the dependent is the passive
// subject, which is what makes "The food was served ..." yield (serve, food).
// One pair per (verb, noun) even if several qualifying arcs connect them.
inline std::vector<ExtractedPair> extract_pairs(const AnnotatedSentence& sentence) {
    auto verbs = potential_verbs(sentence);
    std::vector<ExtractedPair> out;
    std::set<std::pair<int, int>> seen;
    for (const auto& arc : sentence.arcs) {
        if (!pair_producing_label(arc.label)) continue;
        if (!verbs.count(arc.head)) continue;
        if (!is_noun_pos(sentence.tokens[arc.dependent].pos)) continue;
        if (!seen.insert({arc.head, arc.dependent}).second) continue;
        out.push_back({arc.head, arc.dependent, arc.label});
    }
    return out;
}

namespace detail {

// Noun tokens whose surface ends in "ing" and whose base verb is known are
// treated as verbs for the rest of the sentence pipeline.
inline std::set<int> promoted_ing_tokens(const AnnotatedSentence& s, const LemmaLexicon& lexicon) {
    std::set<int> out;
    for (const auto& t : s.tokens) {
        if (!is_noun_pos(t.pos)) continue;
        if (!to_lower(t.surface).ends_with("ing")) continue;
        if (lexicon.ing_base_verb(t.surface)) out.insert(t.index);
    }
    return out;
}

inline std::vector<std::pair<int, int>> promote_pairs(const AnnotatedSentence& s,
                                                      const std::set<int>& promoted) {
    std::vector<std::pair<int, int>> out;
    for (int p : promoted) {
        int best = -1;
        int best_dist = 0;
        for (const auto& t : s.tokens) {
            if (t.index == p || promoted.count(t.index) || !is_noun_pos(t.pos)) continue;
            int dist = t.index > p ? t.index - p : p - t.index;
            if (best == -1 || dist < best_dist || (dist == best_dist && t.index < best)) {
                best = t.index;
                best_dist = dist;
            }
        }
        if (best >= 0) out.push_back({p, best});
    }
    return out;
}

}  // namespace detail

// Promoted "-ing" noun pairs: each qualifying noun is paired with the nearest
// other noun by absolute token distance (ties go to the earlier token).
// Returns (pseudo-verb index, noun index) pairs.
inline std::vector<std::pair<int, int>> promote_ing_nouns(const AnnotatedSentence& sentence,
                                                          const LemmaLexicon& lexicon) {
    return detail::promote_pairs(sentence, detail::promoted_ing_tokens(sentence, lexicon));
}

// Widens a noun index to its containing phrase span, if any.
inline PhraseSpan substitute_phrase(int noun_index, const std::vector<PhraseSpan>& spans) {
    for (const auto& span : spans)
        if (span.contains(noun_index)) return span;
    return {noun_index, noun_index + 1};
}

// ── Per-location pipeline ─────────────────────────────────────────────────

// Runs the full phase-I pipeline over every sentence of every review:
// potential verbs, -ing promotion, dependency pairs, noun-phrase widening,
// base-form rendering, and aggregation with distinct-review AF counting.
inline ActivitySet build_activity_set(const LocationRecord& location,
                                      const LemmaLexicon& lexicon) {
    ActivitySet out;
    out.location_id = location.location_id;
    for (const auto& review : location.reviews) {
        for (const auto& sentence : review.sentences) {
            auto promoted = detail::promoted_ing_tokens(sentence, lexicon);
            // Promoted tokens act as verbs from here on: they are excluded
            // from phrase runs and from noun positions of dependency pairs.
            auto spans = detail::noun_runs(sentence, [&](int i) {
                return is_noun_pos(sentence.tokens[i].pos) && !promoted.count(i);
            });

            std::vector<ExtractedPair> pairs;
            for (const auto& p : extract_pairs(sentence))
                if (!promoted.count(p.noun_index)) pairs.push_back(p);
            for (const auto& [pseudo_verb, noun] : detail::promote_pairs(sentence, promoted))
                pairs.push_back({pseudo_verb, noun, "ing"});

            std::set<std::pair<int, int>> seen;
            for (const auto& pair : pairs) {
                if (!seen.insert({pair.verb_index, pair.noun_index}).second) continue;
                std::string verb;
                if (pair.relation == "ing")
                    verb = *lexicon.ing_base_verb(sentence.tokens[pair.verb_index].surface);
                else
                    verb = to_lower(sentence.tokens[pair.verb_index].lemma);

                PhraseSpan span = substitute_phrase(pair.noun_index, spans);
                std::vector<std::string> lemmas;
                for (int i = span.begin; i < span.end; ++i)
                    lemmas.push_back(to_lower(sentence.tokens[i].lemma));
                std::string concept_name = join(lemmas, " ");

                std::string name = activity_name({verb}, concept_name);
                auto& rec = out.activities[name];
                if (rec.verbs.empty()) {
                    rec.verbs = {verb};
                    rec.concept_name = concept_name;
                }
                rec.supporting_reviews.insert(review.review_id);
            }
        }
    }
    return out;
}

// "location_id<TAB>verb-group<TAB>concept<TAB>af<TAB>review-id-list" lines,
// sorted by AF descending then name ascending.
inline std::string serialize_activity_set(const ActivitySet& aset) {
    std::vector<const ActivityRecord*> recs;
    for (const auto& [name, rec] : aset.activities) recs.push_back(&rec);
    std::sort(recs.begin(), recs.end(), [](const ActivityRecord* a, const ActivityRecord* b) {
        if (a->af() != b->af()) return a->af() > b->af();
        return a->name() < b->name();
    });
    std::string out;
    for (const auto* rec : recs) {
        out += aset.location_id;
        out += '\t';
        out += join(rec->verbs, "/");
        out += '\t';
        out += rec->concept_name;
        out += '\t';
        out += std::to_string(rec->af());
        out += '\t';
        out += join(rec->supporting_reviews, ",");
        out += '\n';
    }
    return out;
}

}  // namespace lanet
