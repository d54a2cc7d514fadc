#include "graphkm/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "graphkm/errors.hpp"
#include "graphkm/mean.hpp"
#include "graphkm/seeding.hpp"
#include "parallel_util.hpp"

namespace graphkm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Improvement test used for termination. A tolerance keeps last-ulp
// fluctuations of recomputed means from resetting the counter.
bool improved(double best, double j) {
    return (best - j) > 1e-9 * std::max(1.0, std::abs(best));
}

std::vector<std::vector<std::size_t>> members_by_cluster(const MembershipMatrix& m) {
    std::vector<std::vector<std::size_t>> out(m.k);
    for (std::size_t i = 0; i < m.assignment.size(); ++i)
        out[m.assignment[i]].push_back(i);
    return out;
}

// Recomputes every centroid as the incremental mean of its cluster, seeded
// per (run seed, cluster, iteration) so both algorithms derive identical
// centroids from identical memberships. Returns the new centroids.
std::vector<AttributedGraph> recompute_centroids(const std::vector<AttributedGraph>& sample,
                                                 const MembershipMatrix& membership,
                                                 const std::vector<AttributedGraph>& old_centroids,
                                                 std::uint64_t run_seed, std::size_t iter,
                                                 int threads, DistanceOracle& oracle) {
    const auto clusters = members_by_cluster(membership);
    std::vector<AttributedGraph> next(old_centroids.size());
    detail::parallel_for(clusters.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            if (clusters[j].empty()) {
                next[j] = old_centroids[j];  // drop policy leaves no empties; defensive
                continue;
            }
            std::vector<AttributedGraph> members;
            members.reserve(clusters[j].size());
            for (std::size_t idx : clusters[j]) members.push_back(sample[idx]);
            next[j] = iam_mean(members, centroid_seed(run_seed, j, iter), oracle,
                               /*compute_ssd=*/false)
                          .mean;
        }
    });
    return next;
}

struct PhaseMeter {
    DistanceOracle& oracle;
    std::uint64_t mark;

    explicit PhaseMeter(DistanceOracle& o) : oracle(o), mark(o.calls()) {}
    std::uint64_t take() {
        const std::uint64_t now = oracle.calls();
        const std::uint64_t spent = now - mark;
        mark = now;
        return spent;
    }
};

}  // namespace

std::vector<std::vector<int>> MembershipMatrix::dense() const {
    std::vector<std::vector<int>> m(assignment.size(), std::vector<int>(k, 0));
    for (std::size_t i = 0; i < assignment.size(); ++i) m[i][assignment[i]] = 1;
    return m;
}

std::vector<std::size_t> MembershipMatrix::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t a : assignment) ++sizes[a];
    return sizes;
}

void ClusterConfig::validate(std::size_t sample_size) const {
    if (sample_size == 0) throw EmptySampleError("clustering requires a non-empty sample");
    if (k < 1 || k > sample_size)
        throw ConfigError("k must be in [1, " + std::to_string(sample_size) + "], got " +
                          std::to_string(k));
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (no_improve_limit < 1) throw ConfigError("no_improve_limit must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

BoundsTable::BoundsTable(std::size_t n_, std::size_t k_)
    : n(n_), k(k_), lower(n_ * k_, 0.0), upper(n_, kInf), upper_stale(n_, 1), assignment(n_, 0) {}

void BoundsTable::drop_column(std::size_t j) {
    std::vector<double> next(n * (k - 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0, w = 0; c < k; ++c) {
            if (c == j) continue;
            next[i * (k - 1) + w++] = lower[i * k + c];
        }
    lower = std::move(next);
    for (auto& a : assignment)
        if (a > j) --a;
    --k;
}

std::vector<AttributedGraph> init_furthest_first(const std::vector<AttributedGraph>& sample,
                                                 std::size_t k, DistanceOracle& oracle,
                                                 std::uint64_t seed) {
    if (sample.empty()) throw EmptySampleError("init_furthest_first on an empty sample");
    if (k < 1 || k > sample.size())
        throw ConfigError("init_furthest_first: k out of range");

    const AttributedGraph overall =
        iam_mean(sample, init_mean_seed(seed), oracle, /*compute_ssd=*/false).mean;

    std::vector<bool> chosen(sample.size(), false);
    std::vector<std::size_t> picks;
    picks.reserve(k);

    std::size_t first = 0;
    double best = kInf;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double dist = oracle.distance(sample[i], overall).distance;
        if (dist < best) {
            best = dist;
            first = i;
        }
    }
    picks.push_back(first);
    chosen[first] = true;

    std::vector<double> min_dist(sample.size(), kInf);
    while (picks.size() < k) {
        const AttributedGraph& latest = sample[picks.back()];
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (chosen[i]) continue;
            min_dist[i] = std::min(min_dist[i], oracle.distance(sample[i], latest).distance);
        }
        std::size_t next = sample.size();
        double far = -1.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (chosen[i]) continue;
            if (min_dist[i] > far) {
                far = min_dist[i];
                next = i;
            }
        }
        picks.push_back(next);
        chosen[next] = true;
    }

    std::vector<AttributedGraph> centroids;
    centroids.reserve(k);
    for (std::size_t idx : picks) {
        AttributedGraph c = sample[idx];
        c.id.clear();  // centroids are transient copies, never memo keys
        c.label.reset();
        centroids.push_back(std::move(c));
    }
    return centroids;
}

std::vector<RepairEvent> handle_empty_clusters(std::vector<AttributedGraph>& centroids,
                                               MembershipMatrix& membership,
                                               std::vector<double>& assigned_distance,
                                               const std::vector<AttributedGraph>& sample,
                                               EmptyClusterPolicy policy, BoundsTable* bounds) {
    std::vector<RepairEvent> events;
    auto sizes = membership.cluster_sizes();

    if (policy == EmptyClusterPolicy::drop) {
        for (std::size_t j = membership.k; j-- > 0;) {
            if (sizes[j] != 0) continue;
            centroids.erase(centroids.begin() + static_cast<std::ptrdiff_t>(j));
            for (auto& a : membership.assignment)
                if (a > j) --a;
            --membership.k;
            if (bounds) bounds->drop_column(j);
        }
        return events;
    }

    std::vector<bool> moved(sample.size(), false);
    for (std::size_t j = 0; j < membership.k; ++j) {
        if (sizes[j] != 0) continue;
        // Farthest pattern from its own centroid, judged by the distances the
        // algorithm already holds; no new matchings.
        std::size_t pick = sample.size();
        double far = -1.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (moved[i] || sizes[membership.assignment[i]] <= 1) continue;
            if (assigned_distance[i] > far) {
                far = assigned_distance[i];
                pick = i;
            }
        }
        if (pick == sample.size()) continue;  // nothing movable
        --sizes[membership.assignment[pick]];
        ++sizes[j];
        membership.assignment[pick] = j;
        assigned_distance[pick] = 0.0;
        AttributedGraph c = sample[pick];
        c.id.clear();
        c.label.reset();
        centroids[j] = std::move(c);
        moved[pick] = true;
        if (bounds) {
            for (std::size_t i = 0; i < bounds->n; ++i) bounds->l(i, j) = 0.0;
            bounds->assignment[pick] = j;
            bounds->upper[pick] = 0.0;
            bounds->upper_stale[pick] = 1;
        }
        events.push_back({j, pick});
    }
    return events;
}

ClusteringResult kmeans_std(const std::vector<AttributedGraph>& sample,
                            const ClusterConfig& config, DistanceOracle& oracle) {
    config.validate(sample.size());
    const std::size_t n = sample.size();

    ClusteringResult res;
    res.algorithm = Algorithm::std_kmeans;
    res.seed = config.seed;

    PhaseMeter meter(oracle);
    std::vector<AttributedGraph> centroids =
        init_furthest_first(sample, config.k, oracle, config.seed);
    res.init_matchings = meter.take();

    MembershipMatrix membership{centroids.size(), std::vector<std::size_t>(n, 0)};
    {
        // Same seeded start as the accelerated variant so the two visit the
        // same membership sequence even through exact distance ties.
        std::mt19937_64 rng(initial_assignment_seed(config.seed));
        std::uniform_int_distribution<std::size_t> pick(0, centroids.size() - 1);
        for (std::size_t i = 0; i < n; ++i) membership.assignment[i] = pick(rng);
    }
    std::vector<double> assigned(n, 0.0);

    double best = kInf;
    std::size_t no_improve = 0;
    MembershipMatrix best_membership;
    std::vector<AttributedGraph> best_centroids;

    for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
        IterationCounters counters;
        membership.k = centroids.size();

        detail::parallel_for(n, config.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                // the current cluster wins ties, mirroring the strict
                // improvement test of the bounded variant
                const std::size_t cur = membership.assignment[i];
                std::size_t arg = cur;
                double dmin = oracle.distance(sample[i], centroids[cur]).distance;
                for (std::size_t j = 0; j < centroids.size(); ++j) {
                    if (j == cur) continue;
                    const double dist = oracle.distance(sample[i], centroids[j]).distance;
                    if (dist < dmin) {
                        dmin = dist;
                        arg = j;
                    }
                }
                membership.assignment[i] = arg;
                assigned[i] = dmin;
            }
        });
        counters.assignment = meter.take();

        res.repairs += handle_empty_clusters(centroids, membership, assigned, sample,
                                             config.empty_policy, nullptr)
                           .size();

        double j_value = 0.0;
        for (double dist : assigned) j_value += dist * dist;
        res.objective_trace.push_back(j_value);
        if (config.record_membership_trace) res.membership_trace.push_back(membership);
        res.iterations = iter;

        const bool imp = improved(best, j_value);
        if (j_value < best) {
            best = j_value;
            res.best_iteration = iter;
            best_membership = membership;
            best_centroids = centroids;
        }
        no_improve = imp ? 0 : no_improve + 1;
        if (no_improve >= config.no_improve_limit) {
            res.per_iteration.push_back(counters);
            break;
        }
        if (iter == config.max_iters) {
            res.per_iteration.push_back(counters);
            break;
        }

        centroids = recompute_centroids(sample, membership, centroids, config.seed, iter,
                                        config.threads, oracle);
        counters.mean_recompute = meter.take();
        res.per_iteration.push_back(counters);
    }

    res.best_objective = best;
    res.membership = std::move(best_membership);
    res.centroids = std::move(best_centroids);
    for (const auto& c : res.per_iteration) res.total_matchings += c.total();
    res.total_matchings += res.init_matchings;
    return res;
}

namespace {

struct ElkanVerifier {
    // Audits bounds and skip decisions against an uncounted exact matcher.
    const std::vector<AttributedGraph>& sample;
    const std::vector<AttributedGraph>& centroids;
    const BoundsTable& bounds;
    DistanceOracle audit{MatcherKind::exact};
    std::atomic<std::uint64_t> bound_checks{0}, bound_violations{0};
    std::atomic<std::uint64_t> prune_checks{0}, prune_violations{0};

    static constexpr double kSlack = 1e-9;

    void check_bounds(std::size_t i, std::size_t j) {
        const double truth = audit.distance(sample[i], centroids[j]).distance;
        const double own =
            audit.distance(sample[i], centroids[bounds.assignment[i]]).distance;
        bound_checks.fetch_add(1);
        if (bounds.l(i, j) > truth + kSlack || bounds.upper[i] < own - kSlack)
            bound_violations.fetch_add(1);
    }

    void check_skip(std::size_t i, std::size_t j) {
        // A skipped centroid must not beat the assigned one.
        const double truth = audit.distance(sample[i], centroids[j]).distance;
        const double own =
            audit.distance(sample[i], centroids[bounds.assignment[i]]).distance;
        prune_checks.fetch_add(1);
        if (truth < own - kSlack) prune_violations.fetch_add(1);
    }
};

}  // namespace

ClusteringResult kmeans_elkan(const std::vector<AttributedGraph>& sample,
                              const ClusterConfig& config, DistanceOracle& oracle) {
    config.validate(sample.size());
    if (config.verification && !oracle.exact())
        throw ConfigError("verification mode requires the exact matcher");
    const std::size_t n = sample.size();

    ClusteringResult res;
    res.algorithm = Algorithm::elkan;
    res.seed = config.seed;

    PhaseMeter meter(oracle);
    std::vector<AttributedGraph> centroids =
        init_furthest_first(sample, config.k, oracle, config.seed);
    res.init_matchings = meter.take();

    BoundsTable bounds(n, centroids.size());
    {
        std::mt19937_64 rng(initial_assignment_seed(config.seed));
        std::uniform_int_distribution<std::size_t> pick(0, centroids.size() - 1);
        for (std::size_t i = 0; i < n; ++i) bounds.assignment[i] = pick(rng);
    }

    double best = kInf;
    std::size_t no_improve = 0;

    for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
        IterationCounters counters;
        const std::size_t k = centroids.size();

        const auto center_dist = inter_centroid_distances(centroids, oracle);
        counters.inter_centroid = meter.take();

        ElkanVerifier verifier{sample, centroids, bounds};

        detail::parallel_for(n, config.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                // The first iteration refreshes every pattern so that its
                // membership matches a full assignment scan.
                if (iter == 1 && bounds.upper_stale[i]) {
                    const std::size_t own = bounds.assignment[i];
                    bounds.upper[i] = oracle.distance(sample[i], centroids[own]).distance;
                    bounds.l(i, own) = bounds.upper[i];
                    bounds.upper_stale[i] = 0;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    if (j == bounds.assignment[i]) continue;  // C1
                    const double half = 0.5 * center_dist[bounds.assignment[i]][j];
                    if (config.verification) verifier.check_bounds(i, j);
                    if (bounds.upper[i] <= half || bounds.upper[i] <= bounds.l(i, j)) {
                        if (config.verification) verifier.check_skip(i, j);
                        continue;  // C2 or C3
                    }
                    if (bounds.upper_stale[i]) {
                        const std::size_t own = bounds.assignment[i];
                        bounds.upper[i] = oracle.distance(sample[i], centroids[own]).distance;
                        bounds.l(i, own) = bounds.upper[i];
                        bounds.upper_stale[i] = 0;
                        if (config.verification) verifier.check_bounds(i, j);
                        if (bounds.upper[i] <= half || bounds.upper[i] <= bounds.l(i, j)) {
                            if (config.verification) verifier.check_skip(i, j);
                            continue;
                        }
                    }
                    bounds.l(i, j) = oracle.distance(sample[i], centroids[j]).distance;
                    if (bounds.l(i, j) < bounds.upper[i]) {
                        bounds.upper[i] = bounds.l(i, j);
                        bounds.upper_stale[i] = 0;
                        bounds.assignment[i] = j;
                    }
                }
            }
        });
        counters.assignment = meter.take();
        res.verification.bound_checks += verifier.bound_checks.load();
        res.verification.bound_violations += verifier.bound_violations.load();
        res.verification.prune_checks += verifier.prune_checks.load();
        res.verification.prune_violations += verifier.prune_violations.load();

        MembershipMatrix membership{k, bounds.assignment};
        res.repairs += handle_empty_clusters(centroids, membership, bounds.upper, sample,
                                             config.empty_policy, &bounds)
                           .size();
        bounds.assignment = membership.assignment;

        double j_value = 0.0;
        for (double u : bounds.upper) j_value += u * u;
        res.objective_trace.push_back(j_value);
        if (config.record_membership_trace) res.membership_trace.push_back(membership);
        res.iterations = iter;

        const bool imp = improved(best, j_value);
        if (j_value < best) {
            best = j_value;
            res.best_iteration = iter;
        }
        no_improve = imp ? 0 : no_improve + 1;
        if (no_improve >= config.no_improve_limit || iter == config.max_iters) {
            res.per_iteration.push_back(counters);
            res.membership = std::move(membership);
            break;
        }

        const auto next = recompute_centroids(sample, membership, centroids, config.seed,
                                              iter, config.threads, oracle);
        counters.mean_recompute = meter.take();

        std::vector<double> delta(membership.k, 0.0);
        for (std::size_t j = 0; j < membership.k; ++j)
            delta[j] = oracle.distance(centroids[j], next[j]).distance;
        counters.delta = meter.take();

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < membership.k; ++j)
                bounds.l(i, j) = std::max(bounds.l(i, j) - delta[j], 0.0);
            const double own_delta = delta[bounds.assignment[i]];
            bounds.upper[i] += own_delta;
            if (own_delta > 0.0) bounds.upper_stale[i] = 1;
        }
        centroids = next;
        res.per_iteration.push_back(counters);
    }

    res.best_objective = best;
    res.centroids = std::move(centroids);
    for (const auto& c : res.per_iteration) res.total_matchings += c.total();
    res.total_matchings += res.init_matchings;
    return res;
}

}  // namespace graphkm
