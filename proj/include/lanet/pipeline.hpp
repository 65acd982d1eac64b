#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lanet/concepts.hpp"
#include "lanet/corpus.hpp"
#include "lanet/error.hpp"
#include "lanet/eval.hpp"
#include "lanet/extract.hpp"
#include "lanet/graph.hpp"
#include "lanet/merge.hpp"
#include "lanet/network.hpp"

namespace lanet {

enum class Extractor { Dependency, Baseline };

struct BuildManifest {
    std::string corpus_path;
    std::string snapshot_path;
    std::string lexicon_path;
    std::string output_path;
    bool skip_filter = false;
    bool skip_merge = false;
    Extractor extractor = Extractor::Dependency;
    std::string log_level = "info";
};

struct BuildStats {
    int locations = 0;
    int activity_nodes = 0;
    int al_links = 0;
    int il_links = 0;
    int activities_extracted = 0;  // records before filtering, all locations
    int activities_filtered = 0;   // records removed as irrelevant
    int activities_merged = 0;     // records removed by merging
    std::vector<std::pair<std::string, double>> stage_ms;
};

struct BuildResult {
    LANetGraph graph;
    BuildStats stats;
    // Intermediate per-location products, kept for the evaluation harness.
    std::vector<ActivitySet> raw_sets;       // phase I output
    std::vector<ActivitySet> filtered_sets;  // after relevance filtering
    std::vector<ActivitySet> final_sets;     // after merging
    std::vector<std::vector<MergeGroup>> merge_audit;
    std::vector<ConceptHierarchy> hierarchies;  // indexed like the corpus
};

namespace detail {

class StageClock {
public:
    explicit StageClock(BuildStats& stats) : stats_(stats) {}

    template <typename F>
    auto run(const std::string& stage, F&& f) {
        auto start = std::chrono::steady_clock::now();
        try {
            auto out = f();
            auto ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
            stats_.stage_ms.emplace_back(stage, ms);
            return out;
        } catch (const Error& e) {
            throw Error("stage '" + stage + "' failed: " + e.what());
        }
    }

private:
    BuildStats& stats_;
};

}  // namespace detail

// Runs the discovery pipeline over an in-memory corpus:
//   1. extract activities per location (dependency rules or the window
//      baseline),
//   2. extract concepts and grow the per-location concept hierarchy,
//   3. drop irrelevant activities (unless skipped),
//   4. merge redundant activities (unless skipped),
//   5. fill the activity-location matrix, AF-ILF vectors and similarities,
//   6. sweep boundaries of uniqueness,
//   7. assemble the property graph.
// The whole pipeline is deterministic: the same inputs and flags produce a
// byte-identical graph serialization.
inline BuildResult build_lanet(const Corpus& corpus, const RelationSnapshot& snapshot,
                               const LemmaLexicon& lexicon, bool skip_filter = false,
                               bool skip_merge = false,
                               Extractor extractor = Extractor::Dependency) {
    if (corpus.empty()) throw ValidationError("corpus has no locations");
    BuildResult result;
    detail::StageClock clock(result.stats);
    const bool baseline = extractor == Extractor::Baseline;

    result.raw_sets = clock.run("extract", [&] {
        std::vector<ActivitySet> sets;
        sets.reserve(corpus.size());
        for (const auto& loc : corpus)
            sets.push_back(baseline ? baseline_extract(loc) : build_activity_set(loc, lexicon));
        return sets;
    });
    for (const auto& s : result.raw_sets)
        result.stats.activities_extracted += static_cast<int>(s.activities.size());

    // Concept statistics and hierarchies come from the unfiltered sets.
    struct LocationConcepts {
        std::map<std::string, int> cf;
        ConceptHierarchy cch;
    };
    auto hierarchies = clock.run("concepts", [&] {
        std::vector<LocationConcepts> out;
        out.reserve(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            LocationConcepts lc;
            std::set<std::string> cset;
            for (const auto& entry : extract_concepts(result.raw_sets[i])) {
                lc.cf[entry.concept_name] = entry.cf;
                cset.insert(entry.concept_name);
            }
            lc.cch = build_cch(corpus[i].categories, cset, snapshot);
            lc.cch.validate(corpus[i].categories, cset);
            out.push_back(std::move(lc));
        }
        return out;
    });

    const bool filtering = !skip_filter && !baseline;
    result.filtered_sets = clock.run("filter", [&] {
        if (!filtering) return result.raw_sets;
        std::vector<ActivitySet> sets;
        sets.reserve(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i)
            sets.push_back(filter_relevant(result.raw_sets[i], hierarchies[i].cch));
        return sets;
    });
    for (std::size_t i = 0; i < corpus.size(); ++i)
        result.stats.activities_filtered +=
            static_cast<int>(result.raw_sets[i].activities.size()) -
            static_cast<int>(result.filtered_sets[i].activities.size());

    const bool merging = !skip_merge && !baseline;
    auto senses = SenseIndex::build(snapshot);
    result.merge_audit.resize(corpus.size());
    result.final_sets = clock.run("merge", [&] {
        if (!merging) return result.filtered_sets;
        std::vector<ActivitySet> sets;
        sets.reserve(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto merged = merge_redundant(result.filtered_sets[i], hierarchies[i].cch, senses);
            result.merge_audit[i] = std::move(merged.groups);
            sets.push_back(std::move(merged.merged));
        }
        return sets;
    });
    for (std::size_t i = 0; i < corpus.size(); ++i)
        result.stats.activities_merged +=
            static_cast<int>(result.filtered_sets[i].activities.size()) -
            static_cast<int>(result.final_sets[i].activities.size());

    auto alm = clock.run("matrix", [&] { return ActivityLocationMatrix::build(result.final_sets); });
    auto vectors = clock.run("af-ilf", [&] { return af_ilf(alm); });
    auto si = clock.run("similarity", [&] { return similarity_matrix(vectors, alm.cols()); });

    auto dist = clock.run("distances", [&] {
        std::vector<std::vector<double>> d(alm.cols(), std::vector<double>(alm.cols(), 0.0));
        std::map<std::string, const LocationRecord*> by_id;
        for (const auto& loc : corpus) by_id[loc.location_id] = &loc;
        for (int p = 0; p < alm.cols(); ++p) {
            for (int q = p + 1; q < alm.cols(); ++q) {
                const auto* a = by_id.at(alm.location_ids[p]);
                const auto* b = by_id.at(alm.location_ids[q]);
                d[p][q] = d[q][p] =
                    radial_distance_m(a->latitude, a->longitude, b->latitude, b->longitude);
            }
        }
        return d;
    });

    auto bou = clock.run("uniqueness", [&] {
        std::vector<std::set<std::string>> names(alm.cols());
        std::map<std::string, int> col_of;
        for (int j = 0; j < alm.cols(); ++j) col_of[alm.location_ids[j]] = j;
        for (const auto& aset : result.final_sets)
            for (const auto& [name, rec] : aset.activities)
                names[col_of.at(aset.location_id)].insert(name);
        std::vector<std::vector<BouEntry>> out(alm.cols());
        for (int j = 0; j < alm.cols(); ++j)
            out[j] = compute_bou(j, alm.location_ids, names, si, dist);
        return out;
    });

    result.graph = clock.run("assemble", [&] {
        LocationConceptScores scores;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& cch = hierarchies[i].cch;
            auto& per_loc = scores[corpus[i].location_id];
            for (const auto& [concept_name, cf] : hierarchies[i].cf) {
                if (!cch.contains(concept_name)) continue;  // no score for irrelevant concepts
                auto cs = concept_scores(concept_name, cf, cch);
                per_loc[concept_name] = {cf, cs.cli, cs.gc_score, cs.sc_score};
            }
        }
        return assemble_graph(corpus, result.final_sets, scores, alm, si, dist, bou);
    });

    result.stats.locations = static_cast<int>(result.graph.locations.size());
    result.stats.activity_nodes = static_cast<int>(result.graph.activities.size());
    result.stats.al_links = static_cast<int>(result.graph.al_links.size());
    result.stats.il_links = static_cast<int>(result.graph.il_links.size());
    result.hierarchies.reserve(hierarchies.size());
    for (auto& lc : hierarchies) result.hierarchies.push_back(std::move(lc.cch));
    return result;
}

// File-level build: loads the manifest inputs (checking paths up front),
// runs the pipeline and leaves the graph in memory for the caller to save.
inline BuildResult run_build(const BuildManifest& manifest) {
    auto require = [](const char* what, const std::string& path) {
        if (!std::filesystem::exists(path))
            throw ValidationError(std::string(what) + " path does not exist: " + path);
    };
    require("corpus", manifest.corpus_path);
    require("snapshot", manifest.snapshot_path);
    require("lexicon", manifest.lexicon_path);
    Corpus corpus = load_corpus(manifest.corpus_path);
    RelationSnapshot snapshot = load_relation_snapshot(manifest.snapshot_path);
    LemmaLexicon lexicon = load_lexicon(manifest.lexicon_path);
    return build_lanet(corpus, snapshot, lexicon, manifest.skip_filter, manifest.skip_merge,
                       manifest.extractor);
}

// Machine-readable build report (tab-separated key/value lines).
inline std::string report_text(const BuildStats& stats) {
    std::string out;
    out += "locations\t" + std::to_string(stats.locations) + '\n';
    out += "activity_nodes\t" + std::to_string(stats.activity_nodes) + '\n';
    out += "activity_location_links\t" + std::to_string(stats.al_links) + '\n';
    out += "inter_location_links\t" + std::to_string(stats.il_links) + '\n';
    out += "activities_extracted\t" + std::to_string(stats.activities_extracted) + '\n';
    out += "activities_removed_irrelevant\t" + std::to_string(stats.activities_filtered) + '\n';
    out += "activities_removed_merged\t" + std::to_string(stats.activities_merged) + '\n';
    for (const auto& [stage, ms] : stats.stage_ms)
        out += "stage_ms\t" + stage + '\t' + fmt_display(ms) + '\n';
    return out;
}

}  // namespace lanet
