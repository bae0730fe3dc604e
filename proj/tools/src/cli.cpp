#include "cli.hpp"

#include <exception>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "sng/error.hpp"
#include "usage_error.hpp"

namespace sng::cli {
namespace {

CLI::App* sub(CLI::App& app, const std::string& name, const std::string& what) {
  auto* s = app.add_subcommand(name, what);
  s->fallthrough();
  return s;
}

void add_split(CLI::App* s, SplitArgs& split) {
  s->add_option("--split", split.base_fraction,
                "Keep this fraction as the base set and write the rest as "
                "queries")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--queries-out", split.queries_out, "Query fvecs path for --split");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Sparse neighbourhood graph index: build, tune, search and "
               "instrument"};
  app.name("sng");
  app.require_subcommand(1);

  Context ctx{out, err};
  app.add_option("--seed", ctx.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", ctx.threads,
                 "Worker threads (1 gives bit-reproducible output)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.footer(std::string("Relative paths resolve against $") + kDataDirEnv +
             " when set.");

  GenUniformArgs gu;
  auto* s_gu = sub(app, "gen-uniform", "Sample points uniformly in a d-ball");
  s_gu->add_option("--n", gu.n, "Number of points")->required();
  s_gu->add_option("--d", gu.d, "Dimension")->required();
  s_gu->add_option("--rho", gu.rho, "Ball radius")->capture_default_str();
  s_gu->add_option("--out", gu.out, "Output fvecs")->required();
  add_split(s_gu, gu.split);

  GenGmmArgs gg;
  auto* s_gg = sub(app, "gen-gmm", "Sample an isotropic Gaussian mixture");
  s_gg->add_option("--n", gg.n, "Number of points")->required();
  s_gg->add_option("--d", gg.d, "Dimension")->required();
  s_gg->add_option("--clusters", gg.clusters, "Mixture components")
      ->capture_default_str();
  s_gg->add_option("--spread", gg.spread, "Per-coordinate standard deviation")
      ->capture_default_str();
  s_gg->add_option("--out", gg.out, "Output fvecs")->required();
  s_gg->add_option("--labels-out", gg.labels_out, "Cluster labels as ivecs");
  add_split(s_gg, gg.split);

  GtArgs gt;
  auto* s_gt = sub(app, "gt", "Exact k-NN ground truth by linear scan");
  s_gt->add_option("--base", gt.base, "Base fvecs")->required();
  s_gt->add_option("--queries", gt.queries, "Query fvecs")->required();
  s_gt->add_option("--k", gt.k, "Neighbours per query")->capture_default_str();
  s_gt->add_option("--out", gt.out, "Output ivecs of ids")->required();
  s_gt->add_option("--distances-out", gt.distances_out,
                   "Squared distances as fvecs");

  BuildArgs b;
  auto* s_b = sub(app, "build", "Build a graph index");
  s_b->add_option("--base", b.base, "Base fvecs")->required();
  s_b->add_option("--algo", b.algo, "vamana or full-sng")
      ->capture_default_str()
      ->check(CLI::IsMember({"vamana", "full-sng"}));
  s_b->add_option("--alpha", b.alpha, "Pruning parameter")->capture_default_str();
  s_b->add_option("--r", b.r, "Degree cap (vamana; default: tuned)");
  s_b->add_option("--r-from", b.r_from, "Take R from a tune JSON report");
  s_b->add_option("--l-build", b.l_build, "Build search list size");
  s_b->add_option("--out", b.out, "Output graph file")->required();

  TuneArgs t;
  auto* s_t = sub(app, "tune", "Choose the degree cap from a probe build");
  s_t->add_option("--base", t.base, "Base fvecs")->required();
  s_t->add_option("--alpha1", t.alpha1, "Probe pruning parameter")
      ->capture_default_str();
  s_t->add_option("--alpha2", t.alpha2, "Target pruning parameter")
      ->capture_default_str();
  s_t->add_option("--probe-subsample", t.probe_subsample,
                  "Probe on a seeded subsample of this many points");
  s_t->add_option("--out", t.out, "Also write the report JSON here");

  SearchArgs sa;
  auto* s_s = sub(app, "search", "Beam search every query from the medoid");
  s_s->add_option("--base", sa.base, "Base fvecs")->required();
  s_s->add_option("--graph", sa.graph, "Graph file")->required();
  s_s->add_option("--queries", sa.queries, "Query fvecs")->required();
  s_s->add_option("--l", sa.l, "Search list size")->capture_default_str();
  s_s->add_option("--k", sa.k, "Results per query")->capture_default_str();
  s_s->add_option("--out", sa.out, "Result ids as ivecs");

  BenchArgs be;
  auto* s_be = sub(app, "bench", "Recall@k and latency over a list-size sweep");
  s_be->add_option("--base", be.base, "Base fvecs")->required();
  s_be->add_option("--queries", be.queries, "Query fvecs")->required();
  s_be->add_option("--gt", be.gt, "Ground-truth ivecs (default: computed)");
  s_be->add_option("--graph", be.graph, "Prebuilt graph (default: tune and build)");
  s_be->add_option("--ls", be.ls, "List sizes")->delimiter(',')->capture_default_str();
  s_be->add_option("--k", be.k, "Recall depth")->capture_default_str();
  s_be->add_option("--tuner", be.tuner, "analytic or binary-search")
      ->capture_default_str()
      ->check(CLI::IsMember({"analytic", "binary-search"}));
  s_be->add_option("--alpha", be.alpha, "Pruning parameter")->capture_default_str();
  s_be->add_option("--probe-subsample", be.probe_subsample,
                   "Analytic tuner probe subsample");
  s_be->add_option("--r-lo", be.r_lo, "binary-search: lower R")->capture_default_str();
  s_be->add_option("--r-hi", be.r_hi, "binary-search: upper R (0 = ceil(n^(2/3)))")
      ->capture_default_str();
  s_be->add_option("--latency-budget-us", be.latency_budget_us,
                   "binary-search: per-query budget, 0 = none")
      ->capture_default_str();
  s_be->add_option("--csv", be.csv, "Table as CSV");
  s_be->add_option("--json", be.json, "Table and tuning summary as JSON");

  TraceArgs tr;
  auto* s_tr = sub(app, "trace", "Pruning trace for the given owners");
  s_tr->add_option("--base", tr.base, "Base fvecs")->required();
  s_tr->add_option("--owners", tr.owners, "Owner ids")->delimiter(',')->required();
  s_tr->add_option("--alpha", tr.alpha, "Pruning parameter")->capture_default_str();
  s_tr->add_option("--r-cap", tr.r_cap, "Stop after this many neighbours");
  s_tr->add_option("--csv", tr.csv, "Write CSV here instead of stdout");

  DegreesArgs dg;
  auto* s_dg = sub(app, "degrees", "Out-degree statistics of a graph");
  s_dg->add_option("--graph", dg.graph, "Graph file")->required();
  s_dg->add_option("--csv", dg.csv, "Histogram CSV");
  s_dg->add_option("--json", dg.json, "Summary JSON");

  PathsArgs pa;
  auto* s_pa = sub(app, "paths", "Search path lengths from the medoid");
  s_pa->add_option("--base", pa.base, "Base fvecs")->required();
  s_pa->add_option("--graph", pa.graph, "Graph file")->required();
  s_pa->add_option("--queries", pa.queries, "Query fvecs")->required();
  s_pa->add_option("--l", pa.l, "Search list size")->capture_default_str();
  s_pa->add_option("--csv", pa.csv, "Per-query CSV");
  s_pa->add_option("--json", pa.json, "Summary JSON");

  VerifyArgs v;
  auto* s_v = sub(app, "verify", "Run the acceptance experiments");
  s_v->add_option("--only", v.only, "Criterion ids")->delimiter(',');
  s_v->add_option("--out", v.out_dir, "Directory for CSV / JSON artefacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n"
        << "run 'sng --help' for the list of commands and flags\n";
    return kUsage;
  }

  try {
    if (s_gu->parsed()) return cmd_gen_uniform(gu, ctx);
    if (s_gg->parsed()) return cmd_gen_gmm(gg, ctx);
    if (s_gt->parsed()) return cmd_gt(gt, ctx);
    if (s_b->parsed()) return cmd_build(b, ctx);
    if (s_t->parsed()) return cmd_tune(t, ctx);
    if (s_s->parsed()) return cmd_search(sa, ctx);
    if (s_be->parsed()) return cmd_bench(be, ctx);
    if (s_tr->parsed()) return cmd_trace(tr, ctx);
    if (s_dg->parsed()) return cmd_degrees(dg, ctx);
    if (s_pa->parsed()) return cmd_paths(pa, ctx);
    if (s_v->parsed()) return cmd_verify(v, ctx);
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: file: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    err << "error: malformed file: " << e.what() << '\n';
    return kFormat;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed file: " << e.what() << '\n';
    return kFormat;
  } catch (const InvariantViolation& e) {
    err << "error: invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const Error& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kInternal;
  }
  err << "error: internal: no command ran\n";
  return kInternal;
}

}  // namespace sng::cli
