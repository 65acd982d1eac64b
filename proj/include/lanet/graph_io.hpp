#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lanet/error.hpp"
#include "lanet/graph.hpp"
#include "lanet/text.hpp"

namespace lanet {

// Line-delimited record format for the property graph. One line per node and
// link, tab-separated, lists joined with '|':
//   lanet-graph 1
//   location <id> <name> <address> <lat> <lon> <cat1|cat2> <review_count>
//   activity <name>
//   allink   <activity> <location> <af> <api> <gc> <sc> <bou|"unbounded"> <cf>
//   illink   <loc_p> <loc_q> <si> <distance_m> <a1|a2|...>
// The format round-trips exactly; rebuilding a graph from the same inputs
// yields byte-identical output.

namespace detail {

inline void check_field(const std::string& s, const char* what) {
    if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos ||
        s.find('|') != std::string::npos)
        throw ValidationError(std::string(what) + " contains a reserved character: " + s);
}

inline double parse_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw ParseError(where + ": bad number '" + s + "'");
    return v;
}

inline int parse_int(const std::string& s, const std::string& where) {
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size())
        throw ParseError(where + ": bad integer '" + s + "'");
    return static_cast<int>(v);
}

}  // namespace detail

inline std::string to_records(const LANetGraph& g) {
    std::string out = "lanet-graph 1\n";
    for (const auto& l : g.locations) {
        detail::check_field(l.location_id, "location_id");
        detail::check_field(l.name, "location name");
        detail::check_field(l.formatted_address, "formatted_address");
        for (const auto& c : l.categories) detail::check_field(c, "category");
        out += "location\t" + l.location_id + '\t' + l.name + '\t' + l.formatted_address +
               '\t' + fmt_double(l.latitude) + '\t' + fmt_double(l.longitude) + '\t' +
               join(l.categories, "|") + '\t' + std::to_string(l.review_count) + '\n';
    }
    for (const auto& a : g.activities) {
        detail::check_field(a.name, "activity name");
        out += "activity\t" + a.name + '\n';
    }
    for (const auto& l : g.al_links) {
        out += "allink\t" + l.activity + '\t' + l.location + '\t' +
               std::to_string(l.activity_frequency) + '\t' + fmt_double(l.popularity_index) +
               '\t' + fmt_double(l.gc_score) + '\t' + fmt_double(l.sc_score) + '\t' +
               bou_to_string(l.bou_m) + '\t' + std::to_string(l.concept_cf) + '\n';
    }
    for (const auto& l : g.il_links) {
        out += "illink\t" + l.loc_p + '\t' + l.loc_q + '\t' + fmt_double(l.similarity) + '\t' +
               fmt_double(l.distance_m) + '\t' + join(l.common_activities, "|") + '\n';
    }
    return out;
}

inline LANetGraph from_records(const std::string& content) {
    std::istringstream lines(content);
    std::string line;
    int lineno = 0;
    LANetGraph g;
    bool header_seen = false;
    while (std::getline(lines, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::string where = "graph record line " + std::to_string(lineno);
        if (!header_seen) {
            if (line != "lanet-graph 1")
                throw ParseError(where + ": expected header 'lanet-graph 1'");
            header_seen = true;
            continue;
        }
        auto f = split(line, '\t');
        if (f[0] == "location") {
            if (f.size() != 8) throw ParseError(where + ": location record needs 8 fields");
            LocationNode l;
            l.location_id = f[1];
            l.name = f[2];
            l.formatted_address = f[3];
            l.latitude = detail::parse_double(f[4], where);
            l.longitude = detail::parse_double(f[5], where);
            if (!f[6].empty()) l.categories = split(f[6], '|');
            l.review_count = detail::parse_int(f[7], where);
            g.locations.push_back(std::move(l));
        } else if (f[0] == "activity") {
            if (f.size() != 2) throw ParseError(where + ": activity record needs 2 fields");
            g.activities.push_back({f[1]});
        } else if (f[0] == "allink") {
            if (f.size() != 9) throw ParseError(where + ": allink record needs 9 fields");
            ActivityLocationLink l;
            l.activity = f[1];
            l.location = f[2];
            l.activity_frequency = detail::parse_int(f[3], where);
            l.popularity_index = detail::parse_double(f[4], where);
            l.gc_score = detail::parse_double(f[5], where);
            l.sc_score = detail::parse_double(f[6], where);
            if (f[7] != "unbounded") l.bou_m = detail::parse_double(f[7], where);
            l.concept_cf = detail::parse_int(f[8], where);
            g.al_links.push_back(std::move(l));
        } else if (f[0] == "illink") {
            if (f.size() != 6) throw ParseError(where + ": illink record needs 6 fields");
            InterLocationLink l;
            l.loc_p = f[1];
            l.loc_q = f[2];
            l.similarity = detail::parse_double(f[3], where);
            l.distance_m = detail::parse_double(f[4], where);
            if (!f[5].empty()) l.common_activities = split(f[5], '|');
            g.il_links.push_back(std::move(l));
        } else {
            throw ParseError(where + ": unknown record type '" + f[0] + "'");
        }
    }
    if (!header_seen) throw ParseError("graph record file is missing its header");
    g.validate();
    return g;
}

inline void save_graph(const LANetGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << to_records(g);
}

inline LANetGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_records(ss.str());
}

// ── GraphML export ────────────────────────────────────────────────────────

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// GraphML with typed node/edge attributes. Location nodes carry the location
// properties, activity nodes their name; edges carry the link label plus the
// link properties.
inline std::string to_graphml(const LANetGraph& g) {
    using detail::xml_escape;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    auto key = [&](const char* id, const char* dom, const char* name, const char* type) {
        out += std::string("  <key id=\"") + id + "\" for=\"" + dom + "\" attr.name=\"" + name +
               "\" attr.type=\"" + type + "\"/>\n";
    };
    key("kind", "node", "Kind", "string");
    key("name", "node", "Name_of_Location", "string");
    key("addr", "node", "Formatted_Address", "string");
    key("lat", "node", "Latitude", "double");
    key("lon", "node", "Longitude", "double");
    key("cat", "node", "Category", "string");
    key("nrev", "node", "No_of_Reviews", "long");
    key("aname", "node", "Activity_Name", "string");
    key("label", "edge", "Label", "string");
    key("af", "edge", "Activity_Frequency", "long");
    key("api", "edge", "Activity_Popularity_Index", "double");
    key("gc", "edge", "Generalized_Concept_Score", "double");
    key("sc", "edge", "Specialized_Concept_Score", "double");
    key("bou", "edge", "Boundary_of_Uniqueness", "string");
    key("cf", "edge", "Concept_Frequency", "long");
    key("si", "edge", "Similarity_Index", "double");
    key("cal", "edge", "Common_Activity_List", "string");
    key("dist", "edge", "Distance", "double");
    out += "  <graph id=\"lanet\" edgedefault=\"undirected\">\n";
    for (const auto& l : g.locations) {
        out += "    <node id=\"L:" + xml_escape(l.location_id) + "\">\n";
        out += "      <data key=\"kind\">location</data>\n";
        out += "      <data key=\"name\">" + xml_escape(l.name) + "</data>\n";
        out += "      <data key=\"addr\">" + xml_escape(l.formatted_address) + "</data>\n";
        out += "      <data key=\"lat\">" + fmt_double(l.latitude) + "</data>\n";
        out += "      <data key=\"lon\">" + fmt_double(l.longitude) + "</data>\n";
        out += "      <data key=\"cat\">" + xml_escape(join(l.categories, "|")) + "</data>\n";
        out += "      <data key=\"nrev\">" + std::to_string(l.review_count) + "</data>\n";
        out += "    </node>\n";
    }
    for (const auto& a : g.activities) {
        out += "    <node id=\"A:" + xml_escape(a.name) + "\">\n";
        out += "      <data key=\"kind\">activity</data>\n";
        out += "      <data key=\"aname\">" + xml_escape(a.name) + "</data>\n";
        out += "    </node>\n";
    }
    for (const auto& l : g.al_links) {
        out += "    <edge source=\"A:" + xml_escape(l.activity) + "\" target=\"L:" +
               xml_escape(l.location) + "\">\n";
        out += "      <data key=\"label\">Is_Performed_At</data>\n";
        out += "      <data key=\"af\">" + std::to_string(l.activity_frequency) + "</data>\n";
        out += "      <data key=\"api\">" + fmt_double(l.popularity_index) + "</data>\n";
        out += "      <data key=\"gc\">" + fmt_double(l.gc_score) + "</data>\n";
        out += "      <data key=\"sc\">" + fmt_double(l.sc_score) + "</data>\n";
        out += "      <data key=\"bou\">" + bou_to_string(l.bou_m) + "</data>\n";
        out += "      <data key=\"cf\">" + std::to_string(l.concept_cf) + "</data>\n";
        out += "    </edge>\n";
    }
    for (const auto& l : g.il_links) {
        out += "    <edge source=\"L:" + xml_escape(l.loc_p) + "\" target=\"L:" +
               xml_escape(l.loc_q) + "\">\n";
        out += "      <data key=\"label\">Is_Similar_To</data>\n";
        out += "      <data key=\"si\">" + fmt_double(l.similarity) + "</data>\n";
        out += "      <data key=\"cal\">" + xml_escape(join(l.common_activities, "|")) +
               "</data>\n";
        out += "      <data key=\"dist\">" + fmt_double(l.distance_m) + "</data>\n";
        out += "    </edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

// m×m similarity matrix as CSV with a location-id header row/column.
// Diagonal entries are 1 for locations that support at least one activity.
inline std::string si_matrix_csv(const LANetGraph& g) {
    std::map<std::string, std::map<std::string, double>> si;
    for (const auto& l : g.il_links) {
        si[l.loc_p][l.loc_q] = l.similarity;
        si[l.loc_q][l.loc_p] = l.similarity;
    }
    std::set<std::string> active;
    for (const auto& l : g.al_links) active.insert(l.location);
    std::string out = "location_id";
    for (const auto& l : g.locations) out += "," + l.location_id;
    out += '\n';
    for (const auto& p : g.locations) {
        out += p.location_id;
        for (const auto& q : g.locations) {
            double v = 0.0;
            if (p.location_id == q.location_id) {
                v = active.count(p.location_id) ? 1.0 : 0.0;
            } else {
                auto it = si.find(p.location_id);
                if (it != si.end()) {
                    auto jt = it->second.find(q.location_id);
                    if (jt != it->second.end()) v = jt->second;
                }
            }
            out += "," + fmt_display(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace lanet
