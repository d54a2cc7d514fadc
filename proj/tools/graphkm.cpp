#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <graphkm/clustering.hpp>
#include <graphkm/dataset_io.hpp>
#include <graphkm/errors.hpp>
#include <graphkm/evaluation.hpp>
#include <graphkm/manifest.hpp>
#include <graphkm/matcher.hpp>
#include <graphkm/mean.hpp>
#include <graphkm/runner.hpp>
#include <graphkm/seeding.hpp>

namespace {

using namespace graphkm;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitScale = 4;

int default_threads() {
    if (const char* env = std::getenv("GRAPHKM_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

struct CommonOpts {
    std::string dataset;
    std::string matcher = "auto";  // auto | exact | ga
    std::size_t exact_max_order = 10;
    bool force = false;
    bool lookahead = false;
    int threads = default_threads();
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("dataset", o.dataset, "dataset file")->required();
    cmd->add_option("--matcher", o.matcher, "distance matcher")
        ->check(CLI::IsMember({"auto", "exact", "ga"}))
        ->capture_default_str();
    cmd->add_option("--exact-max-order", o.exact_max_order,
                    "largest graph order the exact matcher accepts")
        ->capture_default_str();
    cmd->add_flag("--force", o.force, "lift the exact-matcher order guard");
    cmd->add_flag("--lookahead", o.lookahead, "extra admissible pruning bound (exact matcher)");
    cmd->add_option("--threads", o.threads, "worker threads (default from GRAPHKM_THREADS)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

// auto rule: exact while every graph stays small, graduated assignment above.
MatcherKind resolve_matcher(const CommonOpts& o, const Dataset& ds, BnbOptions& bnb) {
    MatcherKind kind;
    if (o.matcher == "exact")
        kind = MatcherKind::exact;
    else if (o.matcher == "ga")
        kind = MatcherKind::graduated_assignment;
    else
        kind = ds.stats.max_nodes <= o.exact_max_order ? MatcherKind::exact
                                                       : MatcherKind::graduated_assignment;
    bnb.max_order = o.force ? 0 : o.exact_max_order;
    bnb.diagonal_lookahead = o.lookahead;
    if (o.matcher == "auto" && kind == MatcherKind::graduated_assignment)
        std::cerr << "note: max order " << ds.stats.max_nodes << " exceeds "
                  << o.exact_max_order << ", using the graduated-assignment matcher\n";
    return kind;
}

void print_dataset_line(const std::string& path, const Dataset& ds) {
    std::cout << path << ": " << format_stats(ds.stats) << "\n";
}

const AttributedGraph& graph_by_id(const Dataset& ds, const std::string& id) {
    for (const auto& g : ds.graphs)
        if (g.id == id) return g;
    throw ConfigError("no graph with id '" + id + "' in the dataset");
}

int cmd_dist(const CommonOpts& o, const std::string& id_a, const std::string& id_b) {
    const Dataset ds = load_dataset(o.dataset);
    const AttributedGraph& a = graph_by_id(ds, id_a);
    const AttributedGraph& b = graph_by_id(ds, id_b);
    BnbOptions bnb;
    const MatcherKind kind = resolve_matcher(o, ds, bnb);
    DistanceOracle oracle(kind, GaParams{}, false, bnb);
    const Alignment al = oracle.distance(a, b);
    if (o.format == "json") {
        Json j;
        j["distance"] = al.distance;
        j["exact"] = al.exact;
        j["permutation"] = al.permutation;
        j["matchings"] = oracle.calls();
        std::cout << manifest_to_text(j);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", al.distance);
        std::cout << "distance " << buf << "\n";
        std::cout << "exact " << (al.exact ? "true" : "false") << "\n";
        std::cout << "alignment";
        for (std::size_t i = 0; i < al.permutation.size(); ++i)
            std::cout << " " << i << "->" << al.permutation[i];
        std::cout << "\nmatchings " << oracle.calls() << "\n";
    }
    return kExitOk;
}

int cmd_mean(const CommonOpts& o, const std::string& method, std::uint64_t seed, bool skip_ssd,
             const std::string& out) {
    const Dataset ds = load_dataset(o.dataset);
    BnbOptions bnb;
    const MatcherKind kind = resolve_matcher(o, ds, bnb);
    DistanceOracle oracle(kind, GaParams{}, false, bnb);

    AttributedGraph mean;
    double f = 0.0;
    Json j;
    j["method"] = method;
    if (method == "iam") {
        const SampleMeanResult r = iam_mean(ds.graphs, seed, oracle, !skip_ssd);
        mean = r.mean;
        f = r.ssd;
        j["seed"] = seed;
    } else if (method == "set") {
        mean = set_mean(ds.graphs, oracle);
        f = ssd(mean, ds.graphs, oracle);
        j["member"] = mean.id;
    } else {
        const BruteForceMeanResult r = brute_force_mean(ds.graphs);
        mean = r.mean;
        f = r.ssd;
        j["sps"] = r.sps;
    }
    j["order"] = mean.order;
    j["ssd"] = (skip_ssd && method == "iam") ? Json(nullptr) : Json(f);
    j["matchings"] = oracle.calls();

    if (!out.empty()) {
        mean.id = "mean";
        mean.label.reset();
        DatasetHeader header;
        header.node_dim = mean.node_dim;
        header.edge_dim = mean.edge_dim;
        header.onehot_applied = ds.header.onehot_applied;
        header.edge_flag_applied = true;
        save_dataset(out, header, {mean});
        j["out"] = out;
    }

    if (o.format == "json") {
        std::cout << manifest_to_text(j);
    } else {
        print_dataset_line(o.dataset, ds);
        std::cout << "method " << method << "\norder " << mean.order << "\n";
        if (j["ssd"].is_null()) {
            std::cout << "ssd skipped\n";
        } else {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", f);
            std::cout << "ssd " << buf << "\n";
        }
        std::cout << "matchings " << oracle.calls() << "\n";
        if (!out.empty()) std::cout << "mean graph written to " << out << "\n";
    }
    return kExitOk;
}

struct ClusterOpts {
    std::string algo = "std";
    std::size_t k = 2;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::size_t max_iters = 100;
    std::size_t no_improve = 3;
    std::string empty_policy = "repair-farthest";
    bool verify = false;
    bool silhouette = false;
    bool memoize = false;
    std::string mapping = "majority";
    std::string out;
};

void add_cluster_opts(CLI::App* cmd, ClusterOpts& c, bool with_k) {
    if (with_k) cmd->add_option("--k", c.k, "number of clusters")->required();
    cmd->add_option("--algo", c.algo, "k-means variant")
        ->check(CLI::IsMember({"std", "elkan"}))
        ->capture_default_str();
    cmd->add_option("--runs", c.runs, "seeded repetitions, best kept by error")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "base seed")->capture_default_str();
    cmd->add_option("--max-iters", c.max_iters, "iteration cap")->capture_default_str();
    cmd->add_option("--no-improve", c.no_improve,
                    "stop after this many non-improving iterations")
        ->capture_default_str();
    cmd->add_option("--empty", c.empty_policy, "empty-cluster policy")
        ->check(CLI::IsMember({"repair-farthest", "drop"}))
        ->capture_default_str();
    cmd->add_flag("--verify", c.verify, "audit every bound use (exact matcher only)");
    cmd->add_flag("--silhouette", c.silhouette, "also compute the silhouette index");
    cmd->add_flag("--memoize", c.memoize, "cache alignments between dataset graphs");
    cmd->add_option("--accuracy-mapping", c.mapping, "cluster-to-label mapping")
        ->check(CLI::IsMember({"majority", "optimal"}))
        ->capture_default_str();
}

ExperimentSpec build_spec(const CommonOpts& o, const ClusterOpts& c, const Dataset& ds) {
    ExperimentSpec spec;
    spec.config.k = c.k;
    spec.config.max_iters = c.max_iters;
    spec.config.no_improve_limit = c.no_improve;
    spec.config.seed = c.seed;
    spec.config.empty_policy = c.empty_policy == "drop" ? EmptyClusterPolicy::drop
                                                        : EmptyClusterPolicy::repair_farthest;
    spec.config.verification = c.verify;
    spec.config.threads = o.threads;
    spec.algorithm = c.algo == "elkan" ? Algorithm::elkan : Algorithm::std_kmeans;
    spec.runs = c.runs;
    spec.matcher = resolve_matcher(o, ds, spec.bnb);
    spec.memoize = c.memoize;
    spec.with_silhouette = c.silhouette;
    spec.mapping = c.mapping == "optimal" ? LabelMapping::optimal : LabelMapping::majority;
    return spec;
}

void print_report(const EvalReport& rep) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", rep.error);
    std::cout << "error " << buf << "\n";
    if (rep.accuracy) {
        std::snprintf(buf, sizeof buf, "%.4f", *rep.accuracy);
        std::cout << "accuracy " << buf << "\n";
    }
    if (rep.silhouette) {
        std::snprintf(buf, sizeof buf, "%.6f", *rep.silhouette);
        std::cout << "silhouette " << buf << "\n";
    }
    std::snprintf(buf, sizeof buf, "%.1f", rep.matchings_per_iteration);
    std::cout << "matchings total " << rep.clustering_matchings << " | per iteration " << buf
              << " | evaluation " << rep.eval_matchings << "\n";
    if (rep.speedup_total) {
        std::snprintf(buf, sizeof buf, "%.2f", *rep.speedup_total);
        std::cout << "speedup total " << buf;
        std::snprintf(buf, sizeof buf, "%.2f", *rep.speedup_per_iteration);
        std::cout << " | per iteration " << buf << "\n";
    }
}

int cmd_cluster(const CommonOpts& o, const ClusterOpts& c) {
    const Dataset ds = load_dataset(o.dataset);
    const ExperimentSpec spec = build_spec(o, c, ds);
    const Experiment ex = run_experiment(ds.graphs, spec);
    const Json manifest = cluster_manifest(ds, o.dataset, spec, ex);
    if (!c.out.empty()) save_manifest(c.out, manifest);

    if (o.format == "json") {
        std::cout << manifest_to_text(manifest);
        return kExitOk;
    }
    print_dataset_line(o.dataset, ds);
    std::cout << "run  iterations  matchings  error\n";
    for (std::size_t r = 0; r < ex.runs.size(); ++r) {
        const RunRecord& rec = ex.runs[r];
        char line[128];
        std::snprintf(line, sizeof line, "%3zu  %10zu  %9llu  %.17g\n", r, rec.result.iterations,
                      static_cast<unsigned long long>(rec.result.total_matchings), rec.error);
        std::cout << line;
    }
    std::cout << "best run " << ex.best_run << "\n";
    print_report(ex.report);
    const RunRecord& best = ex.runs[ex.best_run];
    if (spec.config.verification) {
        const VerificationReport& v = best.result.verification;
        std::cout << "verification: bound checks " << v.bound_checks << ", violations "
                  << v.bound_violations << "; prune checks " << v.prune_checks << ", violations "
                  << v.prune_violations << "\n";
    }
    if (best.result.repairs > 0)
        std::cout << "empty-cluster repairs " << best.result.repairs << "\n";
    if (!c.out.empty()) std::cout << "manifest written to " << c.out << "\n";
    return kExitOk;
}

int cmd_eval(const CommonOpts& o, const std::string& manifest_path, const std::string& baseline,
             bool silhouette, const std::string& mapping) {
    const Dataset ds = load_dataset(o.dataset);
    const Json manifest = load_manifest(manifest_path);
    const std::string recorded = manifest.at("dataset").at("checksum").get<std::string>();
    if (recorded != ds.checksum)
        throw ConfigError("dataset checksum " + ds.checksum + " does not match the manifest (" +
                          recorded + ")");
    Json base;
    if (!baseline.empty()) base = load_manifest(baseline);
    const EvalReport rep = evaluate_manifest(
        manifest, ds, silhouette,
        mapping == "optimal" ? LabelMapping::optimal : LabelMapping::majority, o.threads,
        baseline.empty() ? nullptr : &base);
    if (o.format == "json") {
        Json j;
        j["error"] = rep.error;
        j["recorded_error"] = manifest.at("result").at("error");
        j["accuracy"] = rep.accuracy ? Json(*rep.accuracy) : Json(nullptr);
        j["silhouette"] = rep.silhouette ? Json(*rep.silhouette) : Json(nullptr);
        j["per_cluster_silhouette"] = rep.per_cluster_silhouette;
        j["matchings_total"] = rep.clustering_matchings;
        j["matchings_per_iteration"] = rep.matchings_per_iteration;
        j["eval_matchings"] = rep.eval_matchings;
        j["speedup_total"] = rep.speedup_total ? Json(*rep.speedup_total) : Json(nullptr);
        j["speedup_per_iteration"] =
            rep.speedup_per_iteration ? Json(*rep.speedup_per_iteration) : Json(nullptr);
        std::cout << manifest_to_text(j);
    } else {
        print_dataset_line(o.dataset, ds);
        print_report(rep);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g",
                      manifest.at("result").at("error").get<double>());
        std::cout << "recorded error " << buf << "\n";
    }
    return kExitOk;
}

int cmd_bench(const CommonOpts& o, const ClusterOpts& c, const std::string& k_list) {
    const Dataset ds = load_dataset(o.dataset);
    std::vector<std::size_t> ks;
    std::istringstream in(k_list);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            ks.push_back(std::stoull(part));
        } catch (const std::exception&) {
            throw ConfigError("bad k value '" + part + "' in --k-list");
        }
    }
    const ExperimentSpec base = build_spec(o, c, ds);
    const std::vector<BenchRow> rows = run_bench(ds.graphs, ks, base);
    const Json manifest = bench_manifest(ds, o.dataset, base, ks, rows);
    if (!c.out.empty()) save_manifest(c.out, manifest);
    if (o.format == "json") {
        std::cout << manifest_to_text(manifest);
    } else {
        print_dataset_line(o.dataset, ds);
        std::cout << format_bench_table(rows);
        if (!c.out.empty()) std::cout << "manifest written to " << c.out << "\n";
    }
    return kExitOk;
}

int cmd_convert(const std::string& index, const std::string& out) {
    const std::size_t n = convert_gxl_collection(index, out);
    const Dataset ds = load_dataset(out);
    std::cout << "converted " << n << " graphs to " << out << "\n";
    print_dataset_line(out, ds);
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"k-means clustering in the metric space of attributed graphs"};
    app.require_subcommand(1);

    CommonOpts dist_o;
    std::string id_a, id_b;
    CLI::App* dist = app.add_subcommand("dist", "distance and alignment between two graphs");
    add_common(dist, dist_o);
    dist->add_option("idA", id_a, "first graph id")->required();
    dist->add_option("idB", id_b, "second graph id")->required();

    CommonOpts mean_o;
    std::string mean_method = "iam";
    std::uint64_t mean_seed = 0;
    bool mean_skip_ssd = false;
    std::string mean_out;
    CLI::App* mean = app.add_subcommand("mean", "sample mean of the whole dataset");
    add_common(mean, mean_o);
    mean->add_option("--method", mean_method, "mean construction")
        ->check(CLI::IsMember({"iam", "set", "brute"}))
        ->capture_default_str();
    mean->add_option("--seed", mean_seed, "presentation-order seed (iam)")
        ->capture_default_str();
    mean->add_flag("--no-ssd", mean_skip_ssd, "skip the final sum-of-squares pass (iam)");
    mean->add_option("--out", mean_out, "write the mean graph as a dataset");

    CommonOpts cluster_o;
    ClusterOpts cluster_c;
    CLI::App* cluster = app.add_subcommand("cluster", "k-means clustering runs");
    add_common(cluster, cluster_o);
    add_cluster_opts(cluster, cluster_c, true);
    cluster->add_option("--out", cluster_c.out, "manifest output path");

    CommonOpts eval_o;
    std::string eval_manifest, eval_baseline, eval_mapping = "majority";
    bool eval_silhouette = false;
    CLI::App* eval = app.add_subcommand("eval", "re-evaluate a saved cluster manifest");
    add_common(eval, eval_o);
    eval->add_option("--manifest", eval_manifest, "cluster manifest to evaluate")->required();
    eval->add_option("--baseline", eval_baseline, "baseline manifest for speedup ratios");
    eval->add_flag("--silhouette", eval_silhouette, "also compute the silhouette index");
    eval->add_option("--accuracy-mapping", eval_mapping, "cluster-to-label mapping")
        ->check(CLI::IsMember({"majority", "optimal"}))
        ->capture_default_str();

    CommonOpts bench_o;
    ClusterOpts bench_c;
    std::string k_list;
    CLI::App* bench = app.add_subcommand("bench", "std vs elkan comparison table");
    add_common(bench, bench_o);
    add_cluster_opts(bench, bench_c, false);
    bench->add_option("--k-list", k_list, "comma-separated cluster counts")->required();
    bench->add_option("--out", bench_c.out, "manifest output path");

    std::string convert_index, convert_out;
    CLI::App* convert = app.add_subcommand("convert", "convert a GXL collection index");
    convert->add_option("index", convert_index, "collection index (.cxl)")->required();
    convert->add_option("output", convert_out, "output dataset path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (dist->parsed()) return cmd_dist(dist_o, id_a, id_b);
    if (mean->parsed()) return cmd_mean(mean_o, mean_method, mean_seed, mean_skip_ssd, mean_out);
    if (cluster->parsed()) return cmd_cluster(cluster_o, cluster_c);
    if (eval->parsed())
        return cmd_eval(eval_o, eval_manifest, eval_baseline, eval_silhouette, eval_mapping);
    if (bench->parsed()) return cmd_bench(bench_o, bench_c, k_list);
    if (convert->parsed()) return cmd_convert(convert_index, convert_out);
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ScaleGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScale;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const LabelsRequiredError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
