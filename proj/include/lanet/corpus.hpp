#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lanet/error.hpp"
#include "lanet/text.hpp"

namespace lanet {

// ── Domain types ──────────────────────────────────────────────────────────
//
// Reviews arrive pre-annotated (tokens, lemmas, Penn-Treebank POS tags and
// typed dependency arcs); the engine never runs NLP models itself.

struct Token {
    int index = 0;           // 0-based position in the sentence
    std::string surface;
    std::string lemma;       // base form, lowercase
    std::string pos;         // Penn-Treebank tag ("VBD", "NN", ...)

    bool operator==(const Token&) const = default;
};

struct DependencyArc {
    int head = 0;            // governor token index
    int dependent = 0;
    std::string label;       // "dobj", "nsubjpass", "prep_for", "aux", ...

    bool operator==(const DependencyArc&) const = default;
    auto operator<=>(const DependencyArc&) const = default;
};

struct AnnotatedSentence {
    std::vector<Token> tokens;
    std::vector<DependencyArc> arcs;

    bool operator==(const AnnotatedSentence&) const = default;
};

struct ReviewRecord {
    std::string review_id;   // unique within its location
    std::vector<AnnotatedSentence> sentences;

    bool operator==(const ReviewRecord&) const = default;
};

struct LocationRecord {
    std::string location_id;
    std::string name;
    std::string formatted_address;  // "street, city, state, PIN, country"
    double latitude = 0.0;
    double longitude = 0.0;
    std::vector<std::string> categories;  // normalized lowercase concepts
    std::vector<ReviewRecord> reviews;

    bool operator==(const LocationRecord&) const = default;
};

using Corpus = std::vector<LocationRecord>;

enum class Relation { IsA, AtLocation, DerivedFrom, UsedFor, RelatedTo };

inline std::optional<Relation> parse_relation(std::string_view s) {
    if (s == "IsA") return Relation::IsA;
    if (s == "AtLocation") return Relation::AtLocation;
    if (s == "DerivedFrom") return Relation::DerivedFrom;
    if (s == "UsedFor") return Relation::UsedFor;
    if (s == "RelatedTo") return Relation::RelatedTo;
    return std::nullopt;
}

inline std::string relation_name(Relation r) {
    switch (r) {
        case Relation::IsA: return "IsA";
        case Relation::AtLocation: return "AtLocation";
        case Relation::DerivedFrom: return "DerivedFrom";
        case Relation::UsedFor: return "UsedFor";
        case Relation::RelatedTo: return "RelatedTo";
    }
    return "?";
}

struct Triple {
    std::string head;
    Relation rel{};
    std::string tail;

    auto operator<=>(const Triple&) const = default;
};

// Concept-relation snapshot with lookup indexes by head and by tail.
class RelationSnapshot {
public:
    void add(Triple t) {
        if (!triples_.insert(t).second) return;  // set semantics
        by_head_[t.head].push_back(t);
        by_tail_[t.tail].push_back(t);
    }

    const std::set<Triple>& triples() const { return triples_; }

    bool has(const std::string& head, Relation rel, const std::string& tail) const {
        return triples_.count(Triple{head, rel, tail}) > 0;
    }

    const std::vector<Triple>& by_head(const std::string& c) const {
        auto it = by_head_.find(c);
        return it == by_head_.end() ? empty_ : it->second;
    }

    const std::vector<Triple>& by_tail(const std::string& c) const {
        auto it = by_tail_.find(c);
        return it == by_tail_.end() ? empty_ : it->second;
    }

    bool touches(const std::string& c) const {
        return by_head_.count(c) > 0 || by_tail_.count(c) > 0;
    }

private:
    std::set<Triple> triples_;
    std::map<std::string, std::vector<Triple>> by_head_;
    std::map<std::string, std::vector<Triple>> by_tail_;
    std::vector<Triple> empty_;
};

// Base-form lexicon. Lookups are total: an unknown surface maps to itself
// (lowercased) so unknown words never abort extraction.
class LemmaLexicon {
public:
    void add_entry(const std::string& surface, const std::string& pos_class,
                   const std::string& lemma) {
        entries_[{to_lower(surface), pos_class}] = to_lower(lemma);
    }

    void add_ing_verb(const std::string& noun_surface, const std::string& base_verb) {
        ing_verb_map_[to_lower(noun_surface)] = to_lower(base_verb);
    }

    // pos_class is "v" or "n".
    std::string lemma(const std::string& surface, const std::string& pos_class) const {
        auto it = entries_.find({to_lower(surface), pos_class});
        if (it != entries_.end()) return it->second;
        return to_lower(surface);
    }

    // Base verb hidden in an "-ing" noun ("driving" -> "drive"), if known.
    std::optional<std::string> ing_base_verb(const std::string& noun_surface) const {
        auto it = ing_verb_map_.find(to_lower(noun_surface));
        if (it == ing_verb_map_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<std::pair<std::string, std::string>, std::string> entries_;
    std::map<std::string, std::string> ing_verb_map_;
};

// Human-annotated activity lists, "(verb, concept)" names per location.
struct GroundTruth {
    std::map<std::string, std::set<std::string>> by_location;
};

// ── Loaders ───────────────────────────────────────────────────────────────

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
T get_field(const nlohmann::json& j, const char* field, const std::string& where) {
    if (!j.contains(field))
        throw ParseError(where + ": missing field '" + field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(where + ": field '" + field + "' has wrong type");
    }
}

inline void validate_sentence(const AnnotatedSentence& s, const std::string& where) {
    if (s.tokens.empty()) throw ValidationError(where + ": sentence has no tokens");
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        if (s.tokens[i].index != static_cast<int>(i))
            throw ValidationError(where + ": token indices must be consecutive from 0");
        if (s.tokens[i].lemma.empty())
            throw ValidationError(where + ": token " + std::to_string(i) + " has empty lemma");
    }
    int n = static_cast<int>(s.tokens.size());
    for (const auto& a : s.arcs) {
        if (a.head < 0 || a.head >= n || a.dependent < 0 || a.dependent >= n)
            throw ValidationError(where + ": arc endpoint out of range");
        if (a.head == a.dependent)
            throw ValidationError(where + ": arc head equals dependent");
    }
}

}  // namespace detail

// Loads a line-delimited JSON corpus. Each line is either a location header
//   {"type":"location","location_id":...,"name":...,"formatted_address":...,
//    "latitude":...,"longitude":...,"categories":[...]}
// or a review belonging to the most recent location header
//   {"type":"review","review_id":...,"sentences":[{"tokens":[{"i","surface",
//    "lemma","pos"}],"arcs":[{"head","dep","label"}]}]}
// Locations are returned sorted by location_id.
inline Corpus load_corpus(const std::string& path) {
    std::string content = detail::read_file(path);
    Corpus corpus;
    std::set<std::string> seen_ids;
    std::istringstream lines(content);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::string where = path + ":" + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": invalid JSON: " + e.what());
        }
        auto type = detail::get_field<std::string>(j, "type", where);
        if (type == "location") {
            LocationRecord loc;
            loc.location_id = detail::get_field<std::string>(j, "location_id", where);
            loc.name = detail::get_field<std::string>(j, "name", where);
            loc.formatted_address = detail::get_field<std::string>(j, "formatted_address", where);
            loc.latitude = detail::get_field<double>(j, "latitude", where);
            loc.longitude = detail::get_field<double>(j, "longitude", where);
            for (const auto& c : detail::get_field<std::vector<std::string>>(j, "categories", where))
                loc.categories.push_back(normalize_concept(c));
            if (loc.location_id.empty())
                throw ValidationError(where + ": empty location_id");
            if (!seen_ids.insert(loc.location_id).second)
                throw ValidationError(where + ": duplicate location_id '" + loc.location_id + "'");
            if (loc.latitude < -90.0 || loc.latitude > 90.0)
                throw ValidationError(where + ": latitude out of range [-90,90]");
            if (loc.longitude < -180.0 || loc.longitude > 180.0)
                throw ValidationError(where + ": longitude out of range [-180,180]");
            if (loc.categories.empty())
                throw ValidationError(where + ": categories must be non-empty");
            corpus.push_back(std::move(loc));
        } else if (type == "review") {
            if (corpus.empty())
                throw ParseError(where + ": review record before any location header");
            LocationRecord& loc = corpus.back();
            ReviewRecord review;
            review.review_id = detail::get_field<std::string>(j, "review_id", where);
            for (const auto& r : loc.reviews)
                if (r.review_id == review.review_id)
                    throw ValidationError(where + ": duplicate review_id '" + review.review_id +
                                          "' in location '" + loc.location_id + "'");
            auto sentences = detail::get_field<std::vector<nlohmann::json>>(j, "sentences", where);
            if (sentences.empty())
                throw ValidationError(where + ": review has no sentences");
            for (const auto& js : sentences) {
                AnnotatedSentence sent;
                for (const auto& jt : detail::get_field<std::vector<nlohmann::json>>(js, "tokens", where)) {
                    Token t;
                    t.index = detail::get_field<int>(jt, "i", where);
                    t.surface = detail::get_field<std::string>(jt, "surface", where);
                    t.lemma = to_lower(detail::get_field<std::string>(jt, "lemma", where));
                    t.pos = detail::get_field<std::string>(jt, "pos", where);
                    sent.tokens.push_back(std::move(t));
                }
                if (js.contains("arcs")) {
                    std::set<DependencyArc> uniq;  // at most one arc per (head, dep, label)
                    for (const auto& ja : detail::get_field<std::vector<nlohmann::json>>(js, "arcs", where)) {
                        DependencyArc a;
                        a.head = detail::get_field<int>(ja, "head", where);
                        a.dependent = detail::get_field<int>(ja, "dep", where);
                        a.label = detail::get_field<std::string>(ja, "label", where);
                        if (uniq.insert(a).second) sent.arcs.push_back(a);
                    }
                }
                detail::validate_sentence(sent, where);
                sent.arcs.shrink_to_fit();
                review.sentences.push_back(std::move(sent));
            }
            loc.reviews.push_back(std::move(review));
        } else {
            throw ParseError(where + ": unknown record type '" + type + "'");
        }
    }
    std::sort(corpus.begin(), corpus.end(),
              [](const LocationRecord& a, const LocationRecord& b) {
                  return a.location_id < b.location_id;
              });
    return corpus;
}

// Writes the corpus back in the same line-delimited schema (round-trippable).
inline std::string corpus_to_jsonl(const Corpus& corpus) {
    std::string out;
    for (const auto& loc : corpus) {
        nlohmann::ordered_json j;
        j["type"] = "location";
        j["location_id"] = loc.location_id;
        j["name"] = loc.name;
        j["formatted_address"] = loc.formatted_address;
        j["latitude"] = loc.latitude;
        j["longitude"] = loc.longitude;
        j["categories"] = loc.categories;
        out += j.dump();
        out += '\n';
        for (const auto& review : loc.reviews) {
            nlohmann::ordered_json jr;
            jr["type"] = "review";
            jr["review_id"] = review.review_id;
            auto& sentences = jr["sentences"] = nlohmann::ordered_json::array();
            for (const auto& s : review.sentences) {
                nlohmann::ordered_json js;
                auto& tokens = js["tokens"] = nlohmann::ordered_json::array();
                for (const auto& t : s.tokens)
                    tokens.push_back({{"i", t.index},
                                      {"surface", t.surface},
                                      {"lemma", t.lemma},
                                      {"pos", t.pos}});
                auto& arcs = js["arcs"] = nlohmann::ordered_json::array();
                for (const auto& a : s.arcs)
                    arcs.push_back({{"head", a.head}, {"dep", a.dependent}, {"label", a.label}});
                sentences.push_back(std::move(js));
            }
            out += jr.dump();
            out += '\n';
        }
    }
    return out;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << corpus_to_jsonl(corpus);
}

// Loads tab-separated "head<TAB>relation<TAB>tail" triples. Duplicates
// collapse; an unknown relation tag reports the offending line.
inline RelationSnapshot load_relation_snapshot(const std::string& path) {
    std::string content = detail::read_file(path);
    RelationSnapshot snap;
    std::istringstream lines(content);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (trim(line).empty() || line.starts_with("#")) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected head<TAB>relation<TAB>tail, got: " + line);
        auto rel = parse_relation(trim(fields[1]));
        if (!rel)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": unknown relation tag in line: " + line);
        snap.add(Triple{normalize_concept(fields[0]), *rel, normalize_concept(fields[2])});
    }
    return snap;
}

// Loads the lemma lexicon. Three-field lines are "surface<TAB>pos-class<TAB>lemma"
// entries; two-field lines form the ing-verb map "noun<TAB>base-verb".
inline LemmaLexicon load_lexicon(const std::string& path) {
    std::string content = detail::read_file(path);
    LemmaLexicon lex;
    std::istringstream lines(content);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (trim(line).empty() || line.starts_with("#")) continue;
        auto fields = split(line, '\t');
        if (fields.size() == 3) {
            lex.add_entry(trim(fields[0]), trim(fields[1]), trim(fields[2]));
        } else if (fields.size() == 2) {
            lex.add_ing_verb(trim(fields[0]), trim(fields[1]));
        } else {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 2 or 3 tab-separated fields, got: " + line);
        }
    }
    return lex;
}

// Loads "location_id<TAB>verb<TAB>concept" lines. Names are normalized to
// base forms via the lexicon; unknown location ids are rejected.
inline GroundTruth load_ground_truth(const std::string& path,
                                     const std::set<std::string>& valid_location_ids,
                                     const LemmaLexicon& lexicon) {
    std::string content = detail::read_file(path);
    GroundTruth gt;
    std::istringstream lines(content);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (trim(line).empty() || line.starts_with("#")) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected location_id<TAB>verb<TAB>concept, got: " + line);
        std::string loc = trim(fields[0]);
        if (!valid_location_ids.count(loc))
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": unknown location_id '" + loc + "'");
        std::string verb = lexicon.lemma(trim(fields[1]), "v");
        std::vector<std::string> concept_tokens;
        for (const auto& tok : split(normalize_concept(fields[2]), ' '))
            if (!tok.empty()) concept_tokens.push_back(lexicon.lemma(tok, "n"));
        gt.by_location[loc].insert("(" + verb + ", " + join(concept_tokens, " ") + ")");
    }
    return gt;
}

inline std::set<std::string> location_ids(const Corpus& corpus) {
    std::set<std::string> ids;
    for (const auto& loc : corpus) ids.insert(loc.location_id);
    return ids;
}

}  // namespace lanet
