#include "graphkm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "graphkm/errors.hpp"
#include "parallel_util.hpp"

namespace graphkm {

std::vector<std::vector<double>> pairwise_distances(const std::vector<AttributedGraph>& sample,
                                                    DistanceOracle& oracle, int threads) {
    const std::size_t n = sample.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    // Flatten the upper triangle so chunks balance.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    detail::parallel_for(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto [i, j] = pairs[p];
            const double d = oracle.distance(sample[i], sample[j]).distance;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    });
    return dist;
}

SilhouetteResult silhouette_index(const std::vector<std::vector<double>>& dist,
                                  const MembershipMatrix& membership) {
    const std::size_t n = membership.n();
    const std::size_t k = membership.k;
    if (k < 2) throw ConfigError("silhouette index needs at least two clusters");
    if (dist.size() != n) throw DimensionError("distance matrix does not match the sample");
    const auto sizes = membership.cluster_sizes();
    for (std::size_t j = 0; j < k; ++j)
        if (sizes[j] == 0) throw ConfigError("silhouette index on an empty cluster");

    SilhouetteResult res;
    res.per_pattern.assign(n, 0.0);
    res.per_cluster.assign(k, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = membership.assignment[i];
        if (sizes[own] == 1) {
            res.per_pattern[i] = 0.0;  // singleton convention
            continue;
        }
        std::vector<double> sums(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[membership.assignment[j]] += dist[i][j];
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own) continue;
            b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        const double m = std::max(a, b);
        res.per_pattern[i] = m == 0.0 ? 0.0 : (b - a) / m;
    }

    for (std::size_t i = 0; i < n; ++i)
        res.per_cluster[membership.assignment[i]] += res.per_pattern[i];
    for (std::size_t j = 0; j < k; ++j)
        res.per_cluster[j] /= static_cast<double>(sizes[j]);
    for (double s : res.per_cluster) res.index += s;
    res.index /= static_cast<double>(k);
    return res;
}

double cluster_error(const std::vector<AttributedGraph>& sample,
                     const std::vector<AttributedGraph>& centroids,
                     const MembershipMatrix& membership, DistanceOracle& oracle, int threads) {
    if (membership.n() != sample.size())
        throw DimensionError("membership does not match the sample");
    std::vector<double> assigned(sample.size(), 0.0);
    detail::parallel_for(sample.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t j = membership.assignment[i];
            if (j >= centroids.size()) throw DimensionError("assignment out of centroid range");
            assigned[i] = oracle.distance(sample[i], centroids[j]).distance;
        }
    });
    return cluster_error(assigned);
}

double cluster_error(const std::vector<double>& assigned_distances) {
    double j = 0.0;
    for (double d : assigned_distances) j += d * d;
    return j;
}

namespace {

// Hungarian algorithm (O(k^3), square cost matrix, minimization).
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // match[col] = row, 1-based
    for (std::size_t r = 1; r <= n; ++r) {
        match[0] = r;
        std::size_t col = 0;
        std::vector<double> min_v(n + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(n + 1, false);
        std::vector<std::size_t> prev(n + 1, 0);
        do {
            used[col] = true;
            const std::size_t row = match[col];
            double delta = std::numeric_limits<double>::infinity();
            std::size_t next_col = 0;
            for (std::size_t c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const double cur = cost[row - 1][c - 1] - u[row] - v[c];
                if (cur < min_v[c]) {
                    min_v[c] = cur;
                    prev[c] = col;
                }
                if (min_v[c] < delta) {
                    delta = min_v[c];
                    next_col = c;
                }
            }
            for (std::size_t c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    min_v[c] -= delta;
                }
            }
            col = next_col;
        } while (match[col] != 0);
        do {
            const std::size_t p = prev[col];
            match[col] = match[p];
            col = p;
        } while (col != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t c = 1; c <= n; ++c) row_to_col[match[c] - 1] = c - 1;
    return row_to_col;
}

}  // namespace

double classification_accuracy(const std::vector<AttributedGraph>& sample,
                               const MembershipMatrix& membership, LabelMapping mapping) {
    if (membership.n() != sample.size())
        throw DimensionError("membership does not match the sample");
    std::map<std::string, std::size_t> label_ids;
    for (const auto& g : sample) {
        if (!g.label) throw LabelsRequiredError("graph '" + g.id + "' has no class label");
        label_ids.emplace(*g.label, label_ids.size());
    }
    const std::size_t k = membership.k;
    const std::size_t L = label_ids.size();
    std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(L, 0));
    for (std::size_t i = 0; i < sample.size(); ++i)
        ++counts[membership.assignment[i]][label_ids.at(*sample[i].label)];

    std::size_t matched = 0;
    if (mapping == LabelMapping::majority) {
        for (std::size_t j = 0; j < k; ++j)
            matched += *std::max_element(counts[j].begin(), counts[j].end());
    } else {
        // Distinct labels per cluster; pad to a square matrix of
        // negated counts and minimize.
        const std::size_t m = std::max(k, L);
        std::vector<std::vector<double>> cost(m, std::vector<double>(m, 0.0));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < L; ++l)
                cost[j][l] = -static_cast<double>(counts[j][l]);
        const auto assign = hungarian(cost);
        for (std::size_t j = 0; j < k; ++j)
            if (assign[j] < L) matched += counts[j][assign[j]];
    }
    return static_cast<double>(matched) / static_cast<double>(sample.size());
}

double set_distance(const std::vector<AttributedGraph>& a,
                    const std::vector<AttributedGraph>& b, DistanceOracle& oracle) {
    if (a.empty() || b.empty()) throw EmptySampleError("set_distance over an empty set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a)
        for (const auto& y : b) best = std::min(best, oracle.distance(x, y).distance);
    return best;
}

}  // namespace graphkm
