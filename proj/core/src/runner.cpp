#include "graphkm/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "graphkm/errors.hpp"
#include "graphkm/seeding.hpp"

namespace graphkm {

namespace {

bool fully_labeled(const std::vector<AttributedGraph>& sample) {
    return std::all_of(sample.begin(), sample.end(),
                       [](const AttributedGraph& g) { return g.label.has_value(); });
}

double loop_matchings_per_iteration(const ClusteringResult& r) {
    if (r.iterations == 0) return 0.0;
    const double loop = static_cast<double>(r.total_matchings - r.init_matchings);
    return loop / static_cast<double>(r.iterations);
}

const char* algorithm_name(Algorithm a) {
    return a == Algorithm::std_kmeans ? "std" : "elkan";
}

const char* policy_name(EmptyClusterPolicy p) {
    return p == EmptyClusterPolicy::repair_farthest ? "repair-farthest" : "drop";
}

Json config_json(const ExperimentSpec& spec) {
    Json c;
    c["algorithm"] = algorithm_name(spec.algorithm);
    c["k"] = spec.config.k;
    c["runs"] = spec.runs;
    c["seed"] = spec.config.seed;
    c["max_iters"] = spec.config.max_iters;
    c["no_improve_limit"] = spec.config.no_improve_limit;
    c["empty_policy"] = policy_name(spec.config.empty_policy);
    c["threads"] = spec.config.threads;
    c["verify"] = spec.config.verification;
    if (spec.matcher == MatcherKind::exact) {
        c["matcher"] = "exact";
        c["exact_max_order"] = spec.bnb.max_order;
        c["diagonal_lookahead"] = spec.bnb.diagonal_lookahead;
    } else {
        c["matcher"] = "ga";
        Json g;
        g["beta0"] = spec.ga.beta0;
        g["beta_rate"] = spec.ga.beta_rate;
        g["beta_max"] = spec.ga.beta_max;
        g["sinkhorn_iters"] = spec.ga.sinkhorn_iters;
        g["sinkhorn_tol"] = spec.ga.sinkhorn_tol;
        g["outer_iters"] = spec.ga.outer_iters;
        c["ga"] = std::move(g);
    }
    c["memoize"] = spec.memoize;
    c["silhouette"] = spec.with_silhouette;
    c["accuracy_mapping"] = spec.mapping == LabelMapping::majority ? "majority" : "optimal";
    return c;
}

Json dataset_json(const Dataset& ds, const std::string& path) {
    Json d;
    d["path"] = path;
    d["checksum"] = ds.checksum;
    d["graphs"] = ds.stats.graphs;
    d["classes"] = ds.stats.classes;
    d["node_dim"] = ds.space.node_dim;
    d["edge_dim"] = ds.space.edge_dim;
    return d;
}

Json optional_json(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

struct ManifestMatcher {
    MatcherKind kind = MatcherKind::exact;
    GaParams ga;
    BnbOptions bnb;
};

ManifestMatcher matcher_from_manifest(const Json& manifest) {
    ManifestMatcher m;
    const auto& c = manifest.at("config");
    if (c.at("matcher").get<std::string>() == "ga") {
        m.kind = MatcherKind::graduated_assignment;
        const auto& g = c.at("ga");
        m.ga.beta0 = g.at("beta0").get<double>();
        m.ga.beta_rate = g.at("beta_rate").get<double>();
        m.ga.beta_max = g.at("beta_max").get<double>();
        m.ga.sinkhorn_iters = g.at("sinkhorn_iters").get<std::size_t>();
        m.ga.sinkhorn_tol = g.at("sinkhorn_tol").get<double>();
        m.ga.outer_iters = g.at("outer_iters").get<std::size_t>();
    } else {
        m.bnb.max_order = c.at("exact_max_order").get<std::size_t>();
        m.bnb.diagonal_lookahead = c.at("diagonal_lookahead").get<bool>();
    }
    return m;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (runs == 0) throw ConfigError("runs must be at least 1");
    if (config.verification && matcher != MatcherKind::exact)
        throw ConfigError("bound verification requires the exact matcher");
    ga.validate();
}

Experiment run_experiment(const std::vector<AttributedGraph>& sample, const ExperimentSpec& spec,
                          const std::vector<std::vector<double>>* pairwise) {
    spec.validate();
    spec.config.validate(sample.size());

    DistanceOracle oracle(spec.matcher, spec.ga, spec.memoize, spec.bnb);
    Experiment ex;
    for (std::size_t r = 0; r < spec.runs; ++r) {
        ClusterConfig cfg = spec.config;
        cfg.seed = repetition_seed(spec.config.seed, r);
        oracle.reset_counters();

        RunRecord rec;
        rec.seed = cfg.seed;
        rec.result = spec.algorithm == Algorithm::std_kmeans ? kmeans_std(sample, cfg, oracle)
                                                             : kmeans_elkan(sample, cfg, oracle);
        const std::uint64_t before = oracle.calls();
        rec.error = cluster_error(sample, rec.result.centroids, rec.result.membership, oracle,
                                  cfg.threads);
        rec.eval_matchings = oracle.calls() - before;
        ex.runs.push_back(std::move(rec));
    }

    ex.best_run = 0;
    for (std::size_t r = 1; r < ex.runs.size(); ++r)
        if (ex.runs[r].error < ex.runs[ex.best_run].error) ex.best_run = r;

    const RunRecord& best = ex.runs[ex.best_run];
    EvalReport& rep = ex.report;
    rep.error = best.error;
    rep.clustering_matchings = best.result.total_matchings;
    rep.matchings_per_iteration = loop_matchings_per_iteration(best.result);
    for (const auto& rec : ex.runs) rep.eval_matchings += rec.eval_matchings;

    if (fully_labeled(sample))
        rep.accuracy = classification_accuracy(sample, best.result.membership, spec.mapping);

    if (spec.with_silhouette && best.result.membership.k >= 2) {
        std::vector<std::vector<double>> local;
        if (pairwise == nullptr) {
            const std::uint64_t before = oracle.calls();
            local = pairwise_distances(sample, oracle, spec.config.threads);
            rep.eval_matchings += oracle.calls() - before;
            pairwise = &local;
        }
        const SilhouetteResult sil = silhouette_index(*pairwise, best.result.membership);
        rep.silhouette = sil.index;
        rep.per_cluster_silhouette = sil.per_cluster;
    }
    return ex;
}

Json cluster_manifest(const Dataset& dataset, const std::string& dataset_path,
                      const ExperimentSpec& spec, const Experiment& experiment) {
    Json m;
    m["format"] = "graphkm-manifest 1";
    m["command"] = "cluster";
    m["dataset"] = dataset_json(dataset, dataset_path);
    m["config"] = config_json(spec);

    Json runs = Json::array();
    for (std::size_t r = 0; r < experiment.runs.size(); ++r) {
        const RunRecord& rec = experiment.runs[r];
        Json j;
        j["run"] = r;
        j["seed"] = rec.seed;
        j["iterations"] = rec.result.iterations;
        j["init_matchings"] = rec.result.init_matchings;
        Json per_iter = Json::array();
        for (const auto& c : rec.result.per_iteration) {
            Json p;
            p["inter_centroid"] = c.inter_centroid;
            p["assignment"] = c.assignment;
            p["mean_recompute"] = c.mean_recompute;
            p["delta"] = c.delta;
            per_iter.push_back(std::move(p));
        }
        j["per_iteration"] = std::move(per_iter);
        j["total_matchings"] = rec.result.total_matchings;
        j["objective_trace"] = rec.result.objective_trace;
        j["best_objective"] = rec.result.best_objective;
        j["best_iteration"] = rec.result.best_iteration;
        j["repairs"] = rec.result.repairs;
        j["error"] = rec.error;
        j["eval_matchings"] = rec.eval_matchings;
        if (spec.config.verification) {
            Json v;
            v["bound_checks"] = rec.result.verification.bound_checks;
            v["bound_violations"] = rec.result.verification.bound_violations;
            v["prune_checks"] = rec.result.verification.prune_checks;
            v["prune_violations"] = rec.result.verification.prune_violations;
            j["verification"] = std::move(v);
        } else {
            j["verification"] = nullptr;
        }
        runs.push_back(std::move(j));
    }
    m["runs"] = std::move(runs);
    m["best_run"] = experiment.best_run;

    const RunRecord& best = experiment.runs[experiment.best_run];
    const EvalReport& rep = experiment.report;
    Json res;
    res["membership"] = best.result.membership.assignment;
    res["cluster_sizes"] = best.result.membership.cluster_sizes();
    res["error"] = rep.error;
    res["accuracy"] = optional_json(rep.accuracy);
    res["silhouette"] = optional_json(rep.silhouette);
    res["per_cluster_silhouette"] = rep.per_cluster_silhouette;
    res["matchings_total"] = rep.clustering_matchings;
    res["matchings_per_iteration"] = rep.matchings_per_iteration;
    res["eval_matchings"] = rep.eval_matchings;
    m["result"] = std::move(res);

    Json centroids = Json::array();
    for (std::size_t j = 0; j < best.result.centroids.size(); ++j) {
        AttributedGraph g = best.result.centroids[j];
        g.id = "centroid_" + std::to_string(j);
        centroids.push_back(graph_to_json(g));
    }
    m["centroids"] = std::move(centroids);
    return m;
}

EvalReport evaluate_manifest(const Json& manifest, const Dataset& dataset, bool with_silhouette,
                             LabelMapping mapping, int threads, const Json* baseline) {
    MembershipMatrix membership;
    std::vector<AttributedGraph> centroids;
    ManifestMatcher matcher;
    EvalReport rep;
    try {
        matcher = matcher_from_manifest(manifest);
        const auto& res = manifest.at("result");
        membership.assignment = res.at("membership").get<std::vector<std::size_t>>();
        membership.k = res.at("cluster_sizes").size();
        rep.clustering_matchings = res.at("matchings_total").get<std::uint64_t>();
        rep.matchings_per_iteration = res.at("matchings_per_iteration").get<double>();
        for (const auto& c : manifest.at("centroids")) centroids.push_back(graph_from_json(c));
    } catch (const Json::exception& e) {
        throw ParseError(std::string("manifest is not a cluster manifest: ") + e.what());
    }
    if (membership.n() != dataset.graphs.size())
        throw ConfigError("manifest membership covers " + std::to_string(membership.n()) +
                          " patterns but the dataset holds " +
                          std::to_string(dataset.graphs.size()));
    if (centroids.size() != membership.k)
        throw ConfigError("manifest centroid count does not match the cluster count");

    DistanceOracle oracle(matcher.kind, matcher.ga, false, matcher.bnb);
    rep.error = cluster_error(dataset.graphs, centroids, membership, oracle, threads);

    if (fully_labeled(dataset.graphs))
        rep.accuracy = classification_accuracy(dataset.graphs, membership, mapping);

    if (with_silhouette && membership.k >= 2) {
        const auto pairwise = pairwise_distances(dataset.graphs, oracle, threads);
        const SilhouetteResult sil = silhouette_index(pairwise, membership);
        rep.silhouette = sil.index;
        rep.per_cluster_silhouette = sil.per_cluster;
    }
    rep.eval_matchings = oracle.calls();

    if (baseline != nullptr) {
        const Speedup s = speedup_between(*baseline, manifest);
        rep.speedup_total = s.total;
        rep.speedup_per_iteration = s.per_iteration;
    }
    return rep;
}

std::vector<BenchRow> run_bench(const std::vector<AttributedGraph>& sample,
                                const std::vector<std::size_t>& ks, const ExperimentSpec& base) {
    if (ks.empty()) throw ConfigError("bench needs at least one k");
    base.validate();

    std::vector<std::vector<double>> pairwise;
    if (base.with_silhouette) {
        DistanceOracle oracle(base.matcher, base.ga, base.memoize, base.bnb);
        pairwise = pairwise_distances(sample, oracle, base.config.threads);
    }
    const bool labeled = fully_labeled(sample);

    std::vector<BenchRow> rows;
    for (std::size_t k : ks) {
        BenchRow row;
        row.k = k;
        for (Algorithm algo : {Algorithm::std_kmeans, Algorithm::elkan}) {
            ExperimentSpec spec = base;
            spec.algorithm = algo;
            spec.config.k = k;
            spec.with_silhouette = false;  // averaged below from the shared matrix
            const Experiment ex = run_experiment(sample, spec);

            BenchAlgoStats st;
            double acc = 0.0, sil = 0.0;
            bool sil_ok = base.with_silhouette;
            for (const RunRecord& rec : ex.runs) {
                st.error += rec.error;
                st.iterations += static_cast<double>(rec.result.iterations);
                st.matchings_total += static_cast<double>(rec.result.total_matchings);
                st.matchings_per_iteration += loop_matchings_per_iteration(rec.result);
                if (labeled)
                    acc += classification_accuracy(sample, rec.result.membership, base.mapping);
                if (sil_ok && rec.result.membership.k >= 2)
                    sil += silhouette_index(pairwise, rec.result.membership).index;
                else
                    sil_ok = false;
            }
            const double n = static_cast<double>(ex.runs.size());
            st.error /= n;
            st.iterations /= n;
            st.matchings_total /= n;
            st.matchings_per_iteration /= n;
            if (labeled) st.accuracy = acc / n;
            if (sil_ok) st.silhouette = sil / n;
            (algo == Algorithm::std_kmeans ? row.std_stats : row.elkan_stats) = st;
        }
        row.speedup_total = row.std_stats.matchings_total / row.elkan_stats.matchings_total;
        row.speedup_per_iteration =
            row.std_stats.matchings_per_iteration / row.elkan_stats.matchings_per_iteration;
        rows.push_back(row);
    }
    return rows;
}

Json bench_manifest(const Dataset& dataset, const std::string& dataset_path,
                    const ExperimentSpec& base, const std::vector<std::size_t>& ks,
                    const std::vector<BenchRow>& rows) {
    Json m;
    m["format"] = "graphkm-manifest 1";
    m["command"] = "bench";
    m["dataset"] = dataset_json(dataset, dataset_path);
    Json cfg = config_json(base);
    cfg.erase("algorithm");
    cfg.erase("k");
    cfg["k_list"] = ks;
    m["config"] = std::move(cfg);

    Json out = Json::array();
    for (const BenchRow& row : rows) {
        Json r;
        r["k"] = row.k;
        for (const auto* side : {&row.std_stats, &row.elkan_stats}) {
            Json s;
            s["error"] = side->error;
            s["accuracy"] = optional_json(side->accuracy);
            s["silhouette"] = optional_json(side->silhouette);
            s["iterations"] = side->iterations;
            s["matchings_per_iteration"] = side->matchings_per_iteration;
            s["matchings_total"] = side->matchings_total;
            r[side == &row.std_stats ? "std" : "elkan"] = std::move(s);
        }
        r["speedup_total"] = row.speedup_total;
        r["speedup_per_iteration"] = row.speedup_per_iteration;
        out.push_back(std::move(r));
    }
    m["rows"] = std::move(out);
    return m;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%4s  %-5s  %12s  %9s  %11s  %7s  %11s  %12s  %13s  %13s\n",
                  "k", "algo", "error", "accuracy", "silhouette", "iters", "match/iter",
                  "match total", "speedup/iter", "speedup total");
    out << line;
    auto opt = [](const std::optional<double>& v, char* buf, std::size_t n, const char* fmt) {
        if (v)
            std::snprintf(buf, n, fmt, *v);
        else
            std::snprintf(buf, n, "%s", "-");
        return buf;
    };
    for (const BenchRow& row : rows) {
        char acc[32], sil[32];
        const BenchAlgoStats* sides[2] = {&row.std_stats, &row.elkan_stats};
        for (int i = 0; i < 2; ++i) {
            const BenchAlgoStats& s = *sides[i];
            char sp_it[32], sp_tot[32], kcol[16];
            if (i == 0) {
                std::snprintf(kcol, sizeof kcol, "%4zu", row.k);
                std::snprintf(sp_it, sizeof sp_it, "%s", "-");
                std::snprintf(sp_tot, sizeof sp_tot, "%s", "-");
            } else {
                std::snprintf(kcol, sizeof kcol, "%4s", "");
                std::snprintf(sp_it, sizeof sp_it, "%.2f", row.speedup_per_iteration);
                std::snprintf(sp_tot, sizeof sp_tot, "%.2f", row.speedup_total);
            }
            std::snprintf(line, sizeof line,
                          "%s  %-5s  %12.5g  %9s  %11s  %7.1f  %11.1f  %12.1f  %13s  %13s\n",
                          kcol, i == 0 ? "std" : "elkan", s.error,
                          opt(s.accuracy, acc, sizeof acc, "%.3f"),
                          opt(s.silhouette, sil, sizeof sil, "%.3f"), s.iterations,
                          s.matchings_per_iteration, s.matchings_total, sp_it, sp_tot);
            out << line;
        }
    }
    return out.str();
}

}  // namespace graphkm
