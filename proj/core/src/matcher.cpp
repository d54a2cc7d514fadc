#include "graphkm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "graphkm/errors.hpp"

namespace graphkm {

namespace {

AttributeSpace common_space(const AttributedGraph& x, const AttributedGraph& y) {
    if (x.node_dim != y.node_dim || x.edge_dim != y.edge_dim)
        throw DimensionError("graphs '" + x.id + "' and '" + y.id +
                             "' live in different attribute spaces");
    return space_of(x);
}

double cell_sq_diff(const Representation& a, std::size_t ai, std::size_t aj,
                    const Representation& b, std::size_t bi, std::size_t bj) {
    const double* pa = a.data.data() + a.offset(ai, aj);
    const double* pb = b.data.data() + b.offset(bi, bj);
    double s = 0.0;
    for (std::size_t c = 0; c < a.d; ++c) {
        const double diff = pa[c] - pb[c];
        s += diff * diff;
    }
    return s;
}

struct BnbSearch {
    const Representation& xa;
    const Representation& xb;
    std::size_t n;
    std::vector<std::size_t> expand_order;   // pattern vertices, largest attrs first
    std::vector<std::size_t> perm;           // perm[pattern vertex] = y vertex
    std::vector<bool> used;
    std::vector<std::size_t> best_perm;
    double best_cost;                        // squared
    const BnbOptions& opts;
    std::vector<double> diag_cost;           // n x n pattern-diag vs y-diag, lookahead only

    BnbSearch(const Representation& a, const Representation& b, const BnbOptions& o)
        : xa(a), xb(b), n(a.n), perm(a.n), used(a.n, false), opts(o) {
        // Identity incumbent: deterministic tie resolution, self match -> identity.
        best_perm.resize(n);
        std::iota(best_perm.begin(), best_perm.end(), std::size_t{0});
        best_cost = squared_distance(xa, xb);

        expand_order.resize(n);
        std::iota(expand_order.begin(), expand_order.end(), std::size_t{0});
        std::vector<double> norms(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (double c : xa.cell(i, i)) s += c * c;
            norms[i] = s;
        }
        std::stable_sort(expand_order.begin(), expand_order.end(),
                         [&](std::size_t a_, std::size_t b_) { return norms[a_] > norms[b_]; });

        if (opts.diagonal_lookahead) {
            diag_cost.resize(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t w = 0; w < n; ++w)
                    diag_cost[i * n + w] = cell_sq_diff(xa, i, i, xb, w, w);
        }
    }

    double lookahead(std::size_t depth) const {
        if (!opts.diagonal_lookahead) return 0.0;
        double s = 0.0;
        for (std::size_t t = depth; t < n; ++t) {
            const std::size_t v = expand_order[t];
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t w = 0; w < n; ++w)
                if (!used[w]) m = std::min(m, diag_cost[v * n + w]);
            s += m;
        }
        return s;
    }

    void dfs(std::size_t depth, double partial) {
        if (partial + lookahead(depth) >= best_cost) return;
        if (depth == n) {
            best_cost = partial;
            best_perm = perm;
            return;
        }
        const std::size_t v = expand_order[depth];
        for (std::size_t w = 0; w < n; ++w) {
            if (used[w]) continue;
            double delta = cell_sq_diff(xa, v, v, xb, w, w);
            for (std::size_t t = 0; t < depth && partial + delta < best_cost; ++t) {
                const std::size_t u = expand_order[t];
                delta += 2.0 * cell_sq_diff(xa, v, u, xb, w, perm[u]);
            }
            if (partial + delta >= best_cost) continue;
            perm[v] = w;
            used[w] = true;
            dfs(depth + 1, partial + delta);
            used[w] = false;
        }
    }
};

}  // namespace

void GaParams::validate() const {
    if (!(beta0 > 0.0)) throw ConfigError("beta0 must be > 0");
    if (!(beta_rate > 1.0)) throw ConfigError("beta_rate must be > 1");
    if (!(beta_max > beta0)) throw ConfigError("beta_max must exceed beta0");
    if (sinkhorn_iters < 1) throw ConfigError("sinkhorn_iters must be >= 1");
    if (!(sinkhorn_tol > 0.0)) throw ConfigError("sinkhorn_tol must be > 0");
    if (outer_iters < 1) throw ConfigError("outer_iters must be >= 1");
}

Alignment distance_exact(const AttributedGraph& x, const AttributedGraph& y,
                         const BnbOptions& opts) {
    const AttributeSpace space = common_space(x, y);
    const std::size_t n = std::max(x.order, y.order);
    if (opts.max_order != 0 && n > opts.max_order)
        throw ScaleGuardError("exact matcher refused at order " + std::to_string(n) +
                              " (limit " + std::to_string(opts.max_order) + ")");
    const Representation xa = embed(x, space, n);
    const Representation xb = embed(y, space, n);

    BnbSearch search(xa, xb, opts);
    search.dfs(0, 0.0);

    Alignment out;
    out.permutation = std::move(search.best_perm);
    out.exact = true;
    // Recompute from scratch so the reported distance is exactly the cost of
    // the reported permutation, free of incremental rounding.
    out.distance = euclidean_distance(xa, permute(xb, out.permutation));
    return out;
}

Alignment distance_ga(const AttributedGraph& x, const AttributedGraph& y,
                      const GaParams& params) {
    params.validate();
    const AttributeSpace space = common_space(x, y);
    const std::size_t n = std::max(x.order, y.order);
    const std::size_t d = space.dim();
    const Representation xa = embed(x, space, n);
    const Representation xb = embed(y, space, n);

    // Soft match matrix M[i*n + a] ~ P(pattern vertex i -> y vertex a).
    std::vector<double> M(n * n, 1.0 / static_cast<double>(n));
    std::vector<double> Q(n * n), S(n * n);

    auto dot_cells = [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
        const double* pa = xa.data.data() + xa.offset(i, j);
        const double* pb = xb.data.data() + xb.offset(a, b);
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += pa[c] * pb[c];
        return s;
    };

    for (double beta = params.beta0; beta <= params.beta_max; beta *= params.beta_rate) {
        for (int outer = 0; outer < params.outer_iters; ++outer) {
            // Gradient of the total compatibility: node term plus soft edge
            // support, contracted per attribute coordinate to keep it O(n^3 d).
            std::fill(Q.begin(), Q.end(), 0.0);
            for (std::size_t c = 0; c < d; ++c) {
                // S[j*n + a] = sum_b M[j][b] * xb(a,b)[c]
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t a = 0; a < n; ++a) {
                        double s = 0.0;
                        for (std::size_t b = 0; b < n; ++b)
                            s += M[j * n + b] * xb.data[xb.offset(a, b) + c];
                        S[j * n + a] = s;
                    }
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t a = 0; a < n; ++a) {
                        double s = 0.0;
                        for (std::size_t j = 0; j < n; ++j)
                            s += xa.data[xa.offset(i, j) + c] * S[j * n + a];
                        Q[i * n + a] += s;
                    }
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t a = 0; a < n; ++a) {
                    // Drop infeasible soft support (j == i or b == a), then
                    // count the node compatibility once, unweighted.
                    double excl = 0.0;
                    for (std::size_t b = 0; b < n; ++b)
                        excl += M[i * n + b] * dot_cells(i, i, a, b);
                    for (std::size_t j = 0; j < n; ++j)
                        excl += M[j * n + a] * dot_cells(i, j, a, a);
                    excl -= M[i * n + a] * dot_cells(i, i, a, a);
                    Q[i * n + a] += -excl + dot_cells(i, i, a, a);
                }

            // Row-stabilized exponentiation followed by Sinkhorn balancing.
            for (std::size_t i = 0; i < n; ++i) {
                double row_max = -std::numeric_limits<double>::infinity();
                for (std::size_t a = 0; a < n; ++a)
                    row_max = std::max(row_max, Q[i * n + a]);
                for (std::size_t a = 0; a < n; ++a)
                    M[i * n + a] = std::exp(beta * (Q[i * n + a] - row_max));
            }
            for (int it = 0; it < params.sinkhorn_iters; ++it) {
                double dev = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (std::size_t a = 0; a < n; ++a) s += M[i * n + a];
                    if (!(s > 1e-300)) throw AnnealingDivergedError("softassign row collapsed");
                    for (std::size_t a = 0; a < n; ++a) M[i * n + a] /= s;
                }
                for (std::size_t a = 0; a < n; ++a) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) s += M[i * n + a];
                    if (!(s > 1e-300)) throw AnnealingDivergedError("softassign column collapsed");
                    for (std::size_t i = 0; i < n; ++i) M[i * n + a] /= s;
                    dev = std::max(dev, std::abs(s - 1.0));
                }
                if (dev < params.sinkhorn_tol) break;
            }
            for (double v : M)
                if (!std::isfinite(v))
                    throw AnnealingDivergedError("softassign produced non-finite values");
        }
    }

    // Greedy discretization: repeatedly fix the largest soft entry.
    std::vector<std::size_t> perm(n, 0);
    std::vector<bool> row_done(n, false), col_done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        double best = -1.0;
        std::size_t bi = 0, ba = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (row_done[i]) continue;
            for (std::size_t a = 0; a < n; ++a) {
                if (col_done[a]) continue;
                if (M[i * n + a] > best) {
                    best = M[i * n + a];
                    bi = i;
                    ba = a;
                }
            }
        }
        perm[bi] = ba;
        row_done[bi] = true;
        col_done[ba] = true;
    }

    Alignment out;
    out.permutation = std::move(perm);
    out.exact = false;
    out.distance = euclidean_distance(xa, permute(xb, out.permutation));
    return out;
}

DistanceOracle::DistanceOracle(MatcherKind kind, GaParams ga, bool memoize, BnbOptions bnb)
    : kind_(kind), ga_(ga), bnb_(bnb), memoize_(memoize) {
    ga_.validate();
}

Alignment DistanceOracle::distance(const AttributedGraph& x, const AttributedGraph& y) {
    const bool cacheable = memoize_ && !x.id.empty() && !y.id.empty();
    std::pair<std::string, std::string> key;
    bool swapped = false;
    if (cacheable) {
        key = {x.id, y.id};
        if (key.second < key.first) {
            std::swap(key.first, key.second);
            swapped = true;
        }
        std::lock_guard lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            memo_hits_.fetch_add(1);
            Alignment a = it->second;
            if (swapped) {
                // Cached under (y, x): invert the permutation.
                std::vector<std::size_t> inv(a.permutation.size());
                for (std::size_t i = 0; i < a.permutation.size(); ++i)
                    inv[a.permutation[i]] = i;
                a.permutation = std::move(inv);
            }
            return a;
        }
    }

    Alignment a = kind_ == MatcherKind::exact ? distance_exact(x, y, bnb_)
                                              : distance_ga(x, y, ga_);
    calls_.fetch_add(1);
    if (cacheable) {
        Alignment store = a;
        if (swapped) {
            std::vector<std::size_t> inv(store.permutation.size());
            for (std::size_t i = 0; i < store.permutation.size(); ++i)
                inv[store.permutation[i]] = i;
            store.permutation = std::move(inv);
        }
        std::lock_guard lock(memo_mutex_);
        memo_.emplace(std::move(key), std::move(store));
    }
    return a;
}

void DistanceOracle::reset_counters() {
    calls_.store(0);
    memo_hits_.store(0);
    std::lock_guard lock(memo_mutex_);
    memo_.clear();
}

std::vector<std::vector<double>> inter_centroid_distances(
    const std::vector<AttributedGraph>& centroids, DistanceOracle& oracle) {
    const std::size_t k = centroids.size();
    std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double dist = oracle.distance(centroids[i], centroids[j]).distance;
            m[i][j] = dist;
            m[j][i] = dist;
        }
    return m;
}

}  // namespace graphkm
