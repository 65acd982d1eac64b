#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lanet/error.hpp"
#include "lanet/extract.hpp"

namespace lanet {

// ── Activity-Location Matrix and AF-ILF ──────────────────────────────────

// Rows are distinct activity names (sorted), columns are locations (sorted by
// id); cells hold the AF of the activity at the location, zero when absent.
struct ActivityLocationMatrix {
    std::vector<std::string> activity_names;
    std::vector<std::string> location_ids;
    std::vector<std::vector<int>> cells;  // n rows × m columns

    int rows() const { return static_cast<int>(activity_names.size()); }
    int cols() const { return static_cast<int>(location_ids.size()); }

    static ActivityLocationMatrix build(const std::vector<ActivitySet>& sets) {
        ActivityLocationMatrix alm;
        std::set<std::string> names;
        std::set<std::string> ids;
        for (const auto& aset : sets) {
            ids.insert(aset.location_id);
            for (const auto& [name, rec] : aset.activities) names.insert(name);
        }
        if (names.empty()) throw ValidationError("no activities");
        alm.activity_names.assign(names.begin(), names.end());
        alm.location_ids.assign(ids.begin(), ids.end());
        std::map<std::string, int> row_of;
        for (int i = 0; i < alm.rows(); ++i) row_of[alm.activity_names[i]] = i;
        std::map<std::string, int> col_of;
        for (int j = 0; j < alm.cols(); ++j) col_of[alm.location_ids[j]] = j;
        alm.cells.assign(alm.rows(), std::vector<int>(alm.cols(), 0));
        for (const auto& aset : sets) {
            int j = col_of.at(aset.location_id);
            for (const auto& [name, rec] : aset.activities)
                alm.cells[row_of.at(name)][j] = rec.af();
        }
        return alm;
    }
};

// Log-scaled AF weighted by inverse location frequency:
//   AF_ij    = log10(1 + ALM_ij)
//   ILF_i    = log10(m / |{j : ALM_ij > 0}|)
//   AFILF_ij = AF_ij × ILF_i
// A location's feature vector is its column.
struct AfIlfMatrix {
    std::vector<double> ilf;                  // per activity row
    std::vector<std::vector<double>> values;  // n × m

    std::vector<double> location_vector(int col) const {
        std::vector<double> v(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i][col];
        return v;
    }
};

inline AfIlfMatrix af_ilf(const ActivityLocationMatrix& alm) {
    AfIlfMatrix out;
    int n = alm.rows(), m = alm.cols();
    out.ilf.resize(n);
    out.values.assign(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i) {
        int nnz = 0;
        for (int j = 0; j < m; ++j)
            if (alm.cells[i][j] > 0) ++nnz;
        out.ilf[i] = nnz == 0 ? 0.0 : std::log10(static_cast<double>(m) / nnz);
        for (int j = 0; j < m; ++j)
            out.values[i][j] = std::log10(1.0 + alm.cells[i][j]) * out.ilf[i];
    }
    return out;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (dot == 0.0 || na == 0.0 || nb == 0.0) return 0.0;
    double si = dot / (std::sqrt(na) * std::sqrt(nb));
    return si > 1.0 ? 1.0 : si;
}

// Similarity Index: cosine of the two locations' AF-ILF vectors. Zero-norm
// vectors have no similarity to anything.
inline double similarity_index(const AfIlfMatrix& afilf, int p, int q) {
    return cosine(afilf.location_vector(p), afilf.location_vector(q));
}

inline std::vector<std::vector<double>> similarity_matrix(const AfIlfMatrix& afilf, int m) {
    std::vector<std::vector<double>> si(m, std::vector<double>(m, 0.0));
    for (int p = 0; p < m; ++p)
        for (int q = p; q < m; ++q)
            si[p][q] = si[q][p] = similarity_index(afilf, p, q);
    return si;
}

// Activity Popularity Index: the location's share of the activity's total AF.
inline double popularity_index(const ActivityLocationMatrix& alm, int row, int col) {
    long long sum = 0;
    for (int j = 0; j < alm.cols(); ++j) sum += alm.cells[row][j];
    if (sum == 0) throw ValidationError("popularity index undefined for an all-zero row");
    return static_cast<double>(alm.cells[row][col]) / static_cast<double>(sum);
}

// ── Geometry ──────────────────────────────────────────────────────────────

// Haversine great-circle distance on a 6,371,000 m sphere.
inline double radial_distance_m(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusM = 6'371'000.0;
    auto rad = [](double deg) { return deg * std::numbers::pi / 180.0; };
    double phi1 = rad(lat1);
    double phi2 = rad(lat2);
    double dphi = rad(lat2 - lat1);
    double dlambda = rad(lon2 - lon1);
    double s1 = std::sin(dphi / 2.0);
    double s2 = std::sin(dlambda / 2.0);
    double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    double root = std::sqrt(a);
    if (root > 1.0) root = 1.0;
    return 2.0 * kEarthRadiusM * std::asin(root);
}

// ── Boundary of Uniqueness ────────────────────────────────────────────────

struct BouEntry {
    std::string activity_name;
    std::optional<double> bou_m;              // empty = unbounded
    std::optional<std::string> nearest_alternative;

    bool operator==(const BouEntry&) const = default;
};

inline std::string bou_to_string(const std::optional<double>& bou) {
    return bou ? fmt_double(*bou) : std::string("unbounded");
}

// Nearest-first sweep over the similarity set of one location: walk locations
// with SI > 0 in ascending distance order (ties in location-id order) and
// give every still-unassigned shared activity the current distance as its
// BoU. The sweep stops once every location was visited or every activity is
// assigned; activities never shared stay unbounded.
inline std::vector<BouEntry> compute_bou(int loc,
                                         const std::vector<std::string>& location_ids,
                                         const std::vector<std::set<std::string>>& activities,
                                         const std::vector<std::vector<double>>& si,
                                         const std::vector<std::vector<double>>& dist) {
    std::vector<int> sim_set;
    for (int j = 0; j < static_cast<int>(location_ids.size()); ++j)
        if (j != loc && si[loc][j] > 0.0) sim_set.push_back(j);
    std::sort(sim_set.begin(), sim_set.end(), [&](int a, int b) {
        if (dist[loc][a] != dist[loc][b]) return dist[loc][a] < dist[loc][b];
        return location_ids[a] < location_ids[b];
    });

    std::map<std::string, BouEntry> out;
    for (const auto& name : activities[loc]) out[name] = {name, std::nullopt, std::nullopt};

    std::size_t assigned = 0;
    for (int j : sim_set) {
        if (assigned == out.size()) break;
        for (const auto& name : activities[j]) {
            auto it = out.find(name);
            if (it == out.end() || it->second.bou_m) continue;
            it->second.bou_m = dist[loc][j];
            it->second.nearest_alternative = location_ids[j];
            ++assigned;
        }
    }

    std::vector<BouEntry> result;
    result.reserve(out.size());
    for (auto& [name, e] : out) result.push_back(std::move(e));
    return result;
}

}  // namespace lanet
