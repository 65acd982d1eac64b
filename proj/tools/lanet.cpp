// Command-line front end for the LANet knowledgebase engine: builds the
// property graph from an annotated review corpus, answers activity queries
// over it, exports it, and runs the evaluation experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanet/eval.hpp"
#include "lanet/graph_io.hpp"
#include "lanet/pipeline.hpp"
#include "lanet/query.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoResult = 2;

int g_log_level = 1;  // 0=quiet 1=info 2=debug

void log_info(const std::string& msg) {
    if (g_log_level >= 1) std::cerr << "[lanet] " << msg << '\n';
}

int log_level_from_name(const std::string& name) {
    if (name == "quiet" || name == "error") return 0;
    if (name == "debug") return 2;
    return 1;
}

// Left-aligned text table for human-readable query output.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out.append(width[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_quote(row[c]);
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

std::string render(const std::string& format, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    return format == "csv" ? render_csv(header, rows) : render_table(header, rows);
}

void write_output(const std::string& content, const std::string& path) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lanet::Error("cannot write file: " + path);
    out << content;
    log_info("wrote " + path);
}

std::string bou_display(const std::optional<double>& bou) {
    return bou ? lanet::fmt_display(*bou) : std::string("unbounded");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LANet: location-specific activity knowledgebase"};
    app.require_subcommand(1);
    std::string log_level = "info";
    int seed = 0;  // reserved; the pipeline is deterministic
    app.add_option("--log-level", log_level, "quiet|info|debug")->capture_default_str();
    app.add_option("--seed", seed, "reserved (pipeline is deterministic)");

    // ── build ──
    lanet::BuildManifest manifest;
    std::string extractor_name = "dependency";
    auto* build = app.add_subcommand("build", "build a graph from corpus+snapshot+lexicon");
    build->add_option("--corpus", manifest.corpus_path, "annotated corpus (JSONL)")->required();
    build->add_option("--snapshot", manifest.snapshot_path, "relation snapshot (TSV)")->required();
    build->add_option("--lexicon", manifest.lexicon_path, "lemma lexicon (TSV)")->required();
    build->add_option("--output", manifest.output_path, "graph output path")->required();
    build->add_flag("--skip-filter", manifest.skip_filter, "skip relevance filtering");
    build->add_flag("--skip-merge", manifest.skip_merge, "skip redundancy merging");
    build->add_option("--extractor", extractor_name, "dependency|baseline")
        ->check(CLI::IsMember({"dependency", "baseline"}));

    // ── query ──
    auto* query = app.add_subcommand("query", "query a built graph");
    query->require_subcommand(1);
    std::string graph_path, loc_id, activity, format = "table", filter_name = "none",
                rank_by = "af", candidates_arg;
    int k = 10, m = 1;
    double lat = 0.0, lon = 0.0, radius = 0.0;

    auto add_graph = [&](CLI::App* cmd) {
        cmd->add_option("--graph", graph_path, "graph records file")->required();
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "table|csv")
            ->check(CLI::IsMember({"table", "csv"}));
    };

    auto* q_act = query->add_subcommand("activities", "top-k activities at a location");
    add_graph(q_act);
    q_act->add_option("--loc", loc_id)->required();
    q_act->add_option("--k", k);
    q_act->add_option("--filter", filter_name, "none|generalized|specialized")
        ->check(CLI::IsMember({"none", "generalized", "specialized"}));
    q_act->add_option("--m", m, "number of top concepts for the filter");
    add_format(q_act);

    auto* q_loc = query->add_subcommand("locations", "top-k locations for an activity");
    add_graph(q_loc);
    q_loc->add_option("--activity", activity, "e.g. 'have chicken'")->required();
    q_loc->add_option("--k", k);
    q_loc->add_option("--rank-by", rank_by, "af|api")->check(CLI::IsMember({"af", "api"}));
    add_format(q_loc);

    auto* q_alt = query->add_subcommand("alternates", "similar locations");
    add_graph(q_alt);
    q_alt->add_option("--loc", loc_id)->required();
    q_alt->add_option("--k", k);
    add_format(q_alt);

    auto* q_uni = query->add_subcommand("unique", "uniqueness of an activity at a location");
    add_graph(q_uni);
    q_uni->add_option("--loc", loc_id)->required();
    q_uni->add_option("--activity", activity)->required();
    add_format(q_uni);

    auto* q_bc = query->add_subcommand("broadcast", "digest of locations near a center");
    add_graph(q_bc);
    q_bc->add_option("--lat", lat)->required();
    q_bc->add_option("--lon", lon)->required();
    q_bc->add_option("--radius", radius, "meters")->required();
    q_bc->add_option("--k", k);
    q_bc->add_option("--format", format, "records|table|csv")
        ->check(CLI::IsMember({"records", "table", "csv"}));

    auto* q_rec = query->add_subcommand("recommend", "best location for an activity");
    add_graph(q_rec);
    q_rec->add_option("--activity", activity)->required();
    q_rec->add_option("--candidates", candidates_arg, "comma-separated location ids");

    // ── export ──
    auto* exp = app.add_subcommand("export", "export a built graph");
    exp->require_subcommand(1);
    std::string out_path;
    auto* e_gml = exp->add_subcommand("graphml", "GraphML with typed attributes");
    auto* e_rec = exp->add_subcommand("records", "line-delimited node/link records");
    auto* e_si = exp->add_subcommand("si-csv", "similarity matrix CSV");
    for (auto* cmd : {e_gml, e_rec, e_si}) {
        add_graph(cmd);
        cmd->add_option("--output", out_path, "output path (default stdout)");
    }

    // ── eval ──
    auto* eval = app.add_subcommand("eval", "evaluation experiments");
    eval->require_subcommand(1);
    std::string gt_path, lexicon_path, baseline_graph_path, corpus_path, snapshot_path;

    auto* ev_acc = eval->add_subcommand("accuracy", "per-location accuracy against ground truth");
    add_graph(ev_acc);
    ev_acc->add_option("--gt", gt_path, "ground truth TSV")->required();
    ev_acc->add_option("--lexicon", lexicon_path, "lemma lexicon")->required();
    ev_acc->add_option("--output", out_path, "CSV output path (default stdout)");

    auto* ev_red = eval->add_subcommand("redundancy", "redundant activities before/after merge");
    ev_red->add_option("--corpus", corpus_path)->required();
    ev_red->add_option("--snapshot", snapshot_path)->required();
    ev_red->add_option("--lexicon", lexicon_path)->required();
    ev_red->add_option("--output", out_path, "CSV output path (default stdout)");

    auto* ev_rank = eval->add_subcommand("rankshift", "top-k rank shifts vs a baseline graph");
    add_graph(ev_rank);
    ev_rank->add_option("--baseline-graph", baseline_graph_path)->required();
    ev_rank->add_option("--k", k);
    ev_rank->add_option("--output", out_path, "CSV output path (default stdout)");

    auto* ev_wl = eval->add_subcommand("winloss", "win-loss experiment vs a baseline graph");
    add_graph(ev_wl);
    ev_wl->add_option("--baseline-graph", baseline_graph_path)->required();
    ev_wl->add_option("--output", out_path, "CSV output path (default stdout)");

    // ── stats ──
    auto* stats_cmd = app.add_subcommand("stats", "node/link totals of a graph");
    add_graph(stats_cmd);

    CLI11_PARSE(app, argc, argv);
    g_log_level = log_level_from_name(log_level);

    try {
        if (*build) {
            manifest.log_level = log_level;
            manifest.extractor = extractor_name == "baseline" ? lanet::Extractor::Baseline
                                                              : lanet::Extractor::Dependency;
            auto result = lanet::run_build(manifest);
            lanet::save_graph(result.graph, manifest.output_path);
            std::cout << lanet::report_text(result.stats);
            log_info("graph written to " + manifest.output_path);
            return kExitOk;
        }

        if (*stats_cmd) {
            auto g = lanet::load_graph(graph_path);
            auto bytes = std::filesystem::file_size(graph_path);
            std::cout << g.locations.size() << " location nodes, " << g.activities.size()
                      << " activity nodes, " << (g.al_links.size() + g.il_links.size())
                      << " links (" << g.al_links.size() << " activity-location, "
                      << g.il_links.size() << " inter-location), " << bytes << " bytes\n";
            return kExitOk;
        }

        if (*exp) {
            auto g = lanet::load_graph(graph_path);
            if (*e_gml) write_output(lanet::to_graphml(g), out_path);
            if (*e_rec) write_output(lanet::to_records(g), out_path);
            if (*e_si) write_output(lanet::si_matrix_csv(g), out_path);
            return kExitOk;
        }

        if (*query) {
            auto g = lanet::load_graph(graph_path);
            if (*q_act) {
                auto filter = filter_name == "generalized" ? lanet::ConceptFilter::Generalized
                              : filter_name == "specialized"
                                  ? lanet::ConceptFilter::Specialized
                                  : lanet::ConceptFilter::None;
                auto ranked = lanet::top_k_activities(g, loc_id, k, filter, m);
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < ranked.entries.size(); ++i)
                    rows.push_back({std::to_string(i + 1), ranked.entries[i].item,
                                    std::to_string(static_cast<int>(ranked.entries[i].score))});
                std::cout << render(format, {"rank", "activity", "af"}, rows);
                return rows.empty() ? kExitNoResult : kExitOk;
            }
            if (*q_loc) {
                auto ranked = lanet::top_k_locations(
                    g, activity, k,
                    rank_by == "api" ? lanet::LocationRankBy::API : lanet::LocationRankBy::AF);
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < ranked.entries.size(); ++i)
                    rows.push_back({std::to_string(i + 1), ranked.entries[i].item,
                                    rank_by == "api"
                                        ? lanet::fmt_display(ranked.entries[i].score)
                                        : std::to_string(
                                              static_cast<int>(ranked.entries[i].score))});
                std::cout << render(format, {"rank", "location", rank_by}, rows);
                return rows.empty() ? kExitNoResult : kExitOk;
            }
            if (*q_alt) {
                auto alts = lanet::alternate_locations(g, loc_id, k);
                std::vector<std::vector<std::string>> rows;
                for (const auto& a : alts)
                    rows.push_back({a.location_id, lanet::fmt_display(a.similarity),
                                    lanet::fmt_display(a.distance_m),
                                    lanet::join(a.common_activities, "|")});
                std::cout << render(format, {"location", "si", "distance_m", "common_activities"},
                                    rows);
                return rows.empty() ? kExitNoResult : kExitOk;
            }
            if (*q_uni) {
                auto report = lanet::uniqueness_report(g, loc_id, activity);
                std::vector<std::string> alt_ids;
                for (const auto& a : report.alternatives) alt_ids.push_back(a.location_id);
                std::vector<std::vector<std::string>> rows{
                    {report.activity, lanet::join(alt_ids, " "), bou_display(report.bou_m),
                     report.nearest_alternative.value_or("none")}};
                std::cout << render(format,
                                    {"activity", "alternatives_by_distance", "bou_m", "nearest"},
                                    rows);
                return kExitOk;
            }
            if (*q_bc) {
                auto digest = lanet::broadcast_digest(g, lat, lon, radius, k);
                if (format == "records") {
                    std::cout << lanet::serialize_digest(digest);
                } else {
                    std::vector<std::vector<std::string>> rows;
                    for (const auto& e : digest.entries)
                        for (const auto& a : e.top)
                            rows.push_back({e.location_id, e.name,
                                            lanet::fmt_display(e.distance_m), a.activity,
                                            std::to_string(a.af), bou_display(a.bou_m)});
                    std::cout << render(format,
                                        {"location", "name", "distance_m", "activity", "af",
                                         "bou_m"},
                                        rows);
                }
                return digest.entries.empty() ? kExitNoResult : kExitOk;
            }
            if (*q_rec) {
                std::vector<std::string> candidates;
                if (!candidates_arg.empty()) candidates = lanet::split(candidates_arg, ',');
                auto best = lanet::recommend_location(g, activity, candidates);
                if (!best) {
                    log_info("no location supports '" + activity + "'");
                    return kExitNoResult;
                }
                std::cout << *best << '\n';
                return kExitOk;
            }
        }

        if (*eval) {
            if (*ev_acc) {
                auto g = lanet::load_graph(graph_path);
                auto lexicon = lanet::load_lexicon(lexicon_path);
                std::set<std::string> ids;
                for (const auto& l : g.locations) ids.insert(l.location_id);
                auto gt = lanet::load_ground_truth(gt_path, ids, lexicon);
                std::vector<std::tuple<std::string, int, int>> rows;
                for (const auto& l : g.locations) {
                    auto links = g.links_of_location(l.location_id);
                    int total = static_cast<int>(links.size());
                    int matched = 0;
                    auto it = gt.by_location.find(l.location_id);
                    if (it != gt.by_location.end()) {
                        std::vector<lanet::ActivityName> names;
                        for (const auto& n : it->second)
                            names.push_back(lanet::ActivityName::parse(n));
                        for (const auto* link : links) {
                            auto mine = lanet::ActivityName::parse(link->activity);
                            for (const auto& n : names)
                                if (mine.matches(n)) {
                                    ++matched;
                                    break;
                                }
                        }
                    }
                    rows.emplace_back(l.location_id, total, matched);
                }
                write_output(lanet::accuracy_csv(rows), out_path);
                return kExitOk;
            }
            if (*ev_red) {
                lanet::BuildManifest red;
                red.corpus_path = corpus_path;
                red.snapshot_path = snapshot_path;
                red.lexicon_path = lexicon_path;
                auto result = lanet::run_build(red);
                auto snapshot = lanet::load_relation_snapshot(snapshot_path);
                auto senses = lanet::SenseIndex::build(snapshot);
                std::vector<std::tuple<std::string, int, int>> rows;
                for (std::size_t i = 0; i < result.filtered_sets.size(); ++i) {
                    auto [before, after] =
                        lanet::redundancy_count(result.filtered_sets[i], result.final_sets[i],
                                                result.hierarchies[i], senses);
                    rows.emplace_back(result.filtered_sets[i].location_id, before, after);
                }
                write_output(lanet::redundancy_csv(rows), out_path);
                return kExitOk;
            }
            if (*ev_rank) {
                auto g = lanet::load_graph(graph_path);
                auto baseline = lanet::load_graph(baseline_graph_path);
                std::map<std::string, std::vector<lanet::RankShift>> by_location;
                std::vector<std::string> ids;
                for (const auto& l : g.locations) {
                    ids.push_back(l.location_id);
                    std::vector<std::string> topk;
                    for (const auto& e :
                         lanet::top_k_activities(g, l.location_id, k).entries)
                        topk.push_back(e.item);
                    std::vector<std::string> base;
                    if (baseline.find_location(l.location_id))
                        base = lanet::full_ranking(baseline, l.location_id);
                    by_location[l.location_id] = lanet::rank_shift(topk, base);
                }
                write_output(lanet::rank_shift_csv(ids, by_location, k), out_path);
                return kExitOk;
            }
            if (*ev_wl) {
                auto g = lanet::load_graph(graph_path);
                auto baseline = lanet::load_graph(baseline_graph_path);
                auto queries = lanet::distinct_activity_queries(g, baseline);
                auto tally = lanet::win_loss(queries, g, baseline);
                write_output(lanet::win_loss_csv(tally), out_path);
                return kExitOk;
            }
        }
    } catch (const lanet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
