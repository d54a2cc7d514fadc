#include "graphkm/mean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "graphkm/errors.hpp"

namespace graphkm {

namespace {

AttributeSpace sample_space(const std::vector<AttributedGraph>& sample) {
    if (sample.empty()) throw EmptySampleError("sample is empty");
    const AttributeSpace space = space_of(sample.front());
    for (const auto& g : sample)
        if (space_of(g) != space)
            throw DimensionError("sample graphs live in different attribute spaces");
    return space;
}

std::size_t max_order(const std::vector<AttributedGraph>& sample) {
    std::size_t n = 0;
    for (const auto& g : sample) n = std::max(n, g.order);
    return n;
}

}  // namespace

double ssd(const AttributedGraph& candidate, const std::vector<AttributedGraph>& sample,
           DistanceOracle& oracle) {
    if (sample.empty()) throw EmptySampleError("ssd over an empty sample");
    double f = 0.0;
    for (const auto& g : sample) {
        const double dist = oracle.distance(candidate, g).distance;
        f += dist * dist;
    }
    return 0.5 * f;
}

SampleMeanResult iam_mean(const std::vector<AttributedGraph>& sample, std::uint64_t seed,
                          DistanceOracle& oracle, bool compute_ssd) {
    const AttributeSpace space = sample_space(sample);
    const std::size_t n = max_order(sample);

    SampleMeanResult res;
    res.seed = seed;
    res.presentation_order.resize(sample.size());
    std::iota(res.presentation_order.begin(), res.presentation_order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(res.presentation_order.begin(), res.presentation_order.end(), rng);

    // Running estimate kept as a dense representation in a fixed frame; each
    // sample graph is aligned onto it before the convex update.
    Representation y = embed(sample[res.presentation_order[0]], space, n);
    for (std::size_t i = 1; i < sample.size(); ++i) {
        const AttributedGraph& xg = sample[res.presentation_order[i]];
        const AttributedGraph yg = graph_from_representation(y, space, "");
        const Alignment a = oracle.distance(yg, xg);
        const Representation x = permute(embed(xg, space, n), a.permutation);
        const double w = 1.0 / static_cast<double>(i + 1);
        for (std::size_t c = 0; c < y.data.size(); ++c)
            y.data[c] = (1.0 - w) * y.data[c] + w * x.data[c];
        ++res.alignments_used;
    }

    res.mean = trim_trailing_zero_vertices(graph_from_representation(y, space, ""));
    res.ssd = compute_ssd ? ssd(res.mean, sample, oracle)
                          : std::numeric_limits<double>::quiet_NaN();
    return res;
}

AttributedGraph set_mean(const std::vector<AttributedGraph>& sample, DistanceOracle& oracle) {
    if (sample.empty()) throw EmptySampleError("set_mean over an empty sample");
    const std::size_t n = sample.size();
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = oracle.distance(sample[i], sample[j]).distance;
            f[i] += dist * dist;
            f[j] += dist * dist;
        }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (f[i] < f[best]) best = i;
    return sample[best];
}

BruteForceMeanResult brute_force_mean(const std::vector<AttributedGraph>& sample) {
    const AttributeSpace space = sample_space(sample);
    const std::size_t count = sample.size();
    const std::size_t n = max_order(sample);
    if (count > 5 || n > 4)
        throw ScaleGuardError("brute_force_mean limited to 5 graphs of padded order 4, got " +
                              std::to_string(count) + " of order " + std::to_string(n));

    std::vector<Representation> base;
    base.reserve(count);
    for (const auto& g : sample) base.push_back(embed(g, space, n));

    // The first representation stays fixed; every other graph runs through
    // all n! vertex permutations in lexicographic order.
    std::vector<std::vector<std::size_t>> perms(count);
    for (auto& p : perms) {
        p.resize(n);
        std::iota(p.begin(), p.end(), std::size_t{0});
    }

    MultipleAlignment current(count);
    current[0] = base[0];

    BruteForceMeanResult res;
    double best_raw = std::numeric_limits<double>::infinity();

    const std::size_t cells = n * n * space.dim();
    Representation mean{n, space.dim(), std::vector<double>(cells, 0.0)};

    bool done = false;
    while (!done) {
        for (std::size_t g = 1; g < count; ++g) current[g] = permute(base[g], perms[g]);

        std::fill(mean.data.begin(), mean.data.end(), 0.0);
        for (const auto& rep : current)
            for (std::size_t c = 0; c < cells; ++c) mean.data[c] += rep.data[c];
        const double inv = 1.0 / static_cast<double>(count);
        for (double& v : mean.data) v *= inv;

        double raw = 0.0;
        for (const auto& rep : current) raw += squared_distance(rep, mean);
        raw *= 0.5;

        if (raw < best_raw) {
            best_raw = raw;
            res.alignment = current;
        }

        // Advance the tuple of permutations like a mixed-radix counter.
        done = true;
        for (std::size_t g = count; g-- > 1;) {
            if (std::next_permutation(perms[g].begin(), perms[g].end())) {
                done = false;
                break;
            }
            // wrapped back to identity, carry on to the next graph
        }
        if (count == 1) done = true;
    }

    std::fill(mean.data.begin(), mean.data.end(), 0.0);
    for (const auto& rep : res.alignment)
        for (std::size_t c = 0; c < cells; ++c) mean.data[c] += rep.data[c];
    const double inv = 1.0 / static_cast<double>(count);
    for (double& v : mean.data) v *= inv;

    res.mean = graph_from_representation(mean, space, "");
    res.ssd = best_raw;
    res.sps = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < cells; ++c)
                s += res.alignment[i].data[c] * res.alignment[j].data[c];
            res.sps += s;
        }
    return res;
}

}  // namespace graphkm
