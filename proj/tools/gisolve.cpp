// SPDX-License-Identifier: Apache-2.0
//
// gisolve: graph isomorphism via Frank-Wolfe relaxations over the Birkhoff
// polytope inside branch and bound.
//
//   gisolve solve A.g6 B.g6 [--method boscia-clique-star] [--format json]
//   gisolve gen --mode iso --n 50 --degree 3 --seed 7 --out-a a.g6 --out-b b.g6
//   gisolve bench --dir instances/ --methods boscia-star,dc-fw
//   gisolve presolve A.g6 B.g6 --presolve degree,clique,star
//
// Exit codes: 0 isomorphic, 1 non-isomorphic, 2 inconclusive, 3 usage/IO.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gi/bnb.hpp"
#include "gi/heuristics.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitIsomorphic = 0;
constexpr int kExitNonIsomorphic = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitError = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
}

std::string first_line(const std::string& text) {
  const std::size_t nl = text.find('\n');
  return nl == std::string::npos ? text : text.substr(0, nl);
}

bool looks_like_edge_list(const std::string& text) {
  std::istringstream in(first_line(text));
  long long n = 0, m = 0;
  std::string rest;
  return static_cast<bool>(in >> n >> m) && !(in >> rest);
}

gi::Graph load_graph(const std::string& path, const std::string& fmt) {
  const std::string text = read_file(path);
  std::string kind = fmt;
  if (kind == "auto") {
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".g6" || ext == ".graph6") {
      kind = "g6";
    } else if (ext == ".edges" || ext == ".txt") {
      kind = "edges";
    } else {
      kind = looks_like_edge_list(text) ? "edges" : "g6";
    }
  }
  try {
    return kind == "edges" ? gi::parse_edge_list(text)
                           : gi::parse_graph6(first_line(text));
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Method presets and config plumbing

const std::vector<std::string> kMethods = {
    "boscia-dfs", "boscia-star", "boscia-clique-star", "boscia-obbt", "dc-fw"};

struct SolveOptions {
  std::string method = "boscia-clique-star";
  std::string presolve_override;  // comma list or "none"; empty = preset
  int clique_k = 4;
  int star_cap = 4;
  std::string node_strategy = "dfs-up";
  std::string fw = "dicg";
  int max_node_iters = 5000;
  double gap_tol = 1e-7;
  double prune_tol = 1e-6;
  double time_limit_ms = 3600000;
  long long node_limit = -1;
  int obbt_budget = 100;
  std::string obbt_target = "zero";
  std::uint64_t seed = 0;
};

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--method", o.method, "Solver preset")
      ->check(CLI::IsMember(kMethods))
      ->capture_default_str();
  cmd->add_option("--presolve", o.presolve_override,
                  "Override preset stages: comma list of degree,clique,star,obbt or 'none'");
  cmd->add_option("--clique-k", o.clique_k, "Count cliques up to this size")
      ->capture_default_str();
  cmd->add_option("--star-cap", o.star_cap, "Star profile truncation size")
      ->capture_default_str();
  cmd->add_option("--node-strategy", o.node_strategy, "Node selection")
      ->check(CLI::IsMember({"best-bound", "dfs-up", "dfs-down"}))
      ->capture_default_str();
  cmd->add_option("--fw", o.fw, "Per-node FW variant")
      ->check(CLI::IsMember({"fw", "bpcg", "dicg"}))
      ->capture_default_str();
  cmd->add_option("--max-node-iters", o.max_node_iters, "FW iteration cap per node")
      ->capture_default_str();
  cmd->add_option("--gap-tol", o.gap_tol, "FW gap tolerance per node")
      ->capture_default_str();
  cmd->add_option("--prune-tol", o.prune_tol, "Prune once the node bound exceeds this")
      ->capture_default_str();
  cmd->add_option("--time-limit-ms", o.time_limit_ms, "Wall-clock limit (< 0: none)")
      ->capture_default_str();
  cmd->add_option("--node-limit", o.node_limit, "Node limit (< 0: none)")
      ->capture_default_str();
  cmd->add_option("--obbt-budget", o.obbt_budget, "FW iterations per bound-tightening trial")
      ->capture_default_str();
  cmd->add_option("--obbt-target", o.obbt_target, "Bound-tightening trial target")
      ->check(CLI::IsMember({"zero", "one"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed echoed into the result record")
      ->capture_default_str();
}

std::vector<std::string> preset_stages(const std::string& method) {
  if (method == "boscia-star") return {"degree", "star"};
  if (method == "boscia-clique-star") return {"degree", "clique", "star"};
  if (method == "boscia-obbt") return {"degree", "obbt"};
  return {};  // boscia-dfs, dc-fw
}

std::vector<std::string> effective_stages(const SolveOptions& o) {
  if (o.presolve_override.empty()) return preset_stages(o.method);
  if (o.presolve_override == "none") return {};
  std::vector<std::string> stages;
  std::stringstream ss(o.presolve_override);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok != "degree" && tok != "clique" && tok != "star" && tok != "obbt") {
      throw CLI::ValidationError("--presolve", "unknown stage '" + tok + "'");
    }
    stages.push_back(tok);
  }
  return stages;
}

gi::BnbConfig make_bnb_config(const SolveOptions& o) {
  gi::BnbConfig cfg;
  cfg.strategy = o.node_strategy == "best-bound" ? gi::NodeStrategy::BestBound
                 : o.node_strategy == "dfs-down" ? gi::NodeStrategy::DfsBranchDown
                                                 : gi::NodeStrategy::DfsBranchUp;
  cfg.fw = o.fw == "fw" ? gi::FwVariant::Fw
           : o.fw == "bpcg" ? gi::FwVariant::Bpcg
                            : gi::FwVariant::Dicg;
  cfg.node_fw.max_iters = o.max_node_iters;
  cfg.node_fw.gap_tol = o.gap_tol;
  cfg.prune_tol = o.prune_tol;
  cfg.node_limit = o.node_limit;
  cfg.time_limit_ms = o.time_limit_ms;

  const std::vector<std::string> stages = effective_stages(o);
  const auto has = [&](const char* s) {
    return std::find(stages.begin(), stages.end(), s) != stages.end();
  };
  cfg.presolve.degree = has("degree");
  cfg.presolve.clique = has("clique");
  cfg.presolve.star = has("star");
  cfg.presolve.obbt = has("obbt");
  cfg.presolve.clique_k = o.clique_k;
  cfg.presolve.star_cap = o.star_cap;
  cfg.presolve.obbt_budget = o.obbt_budget;
  cfg.presolve.obbt_target =
      o.obbt_target == "one" ? gi::ObbtTarget::One : gi::ObbtTarget::Zero;
  return cfg;
}

json config_echo(const SolveOptions& o) {
  json stages = json::array();
  for (const std::string& s : effective_stages(o)) stages.push_back(s);
  return json{{"method", o.method},
              {"presolve", stages},
              {"clique_k", o.clique_k},
              {"star_cap", o.star_cap},
              {"node_strategy", o.node_strategy},
              {"fw", o.fw},
              {"max_node_iters", o.max_node_iters},
              {"gap_tol", o.gap_tol},
              {"prune_tol", o.prune_tol},
              {"time_limit_ms", o.time_limit_ms},
              {"node_limit", o.node_limit},
              {"obbt_budget", o.obbt_budget},
              {"obbt_target", o.obbt_target}};
}

// ---------------------------------------------------------------------------
// Result serialization

const char* status_name(gi::SolveStatus s) {
  switch (s) {
    case gi::SolveStatus::Isomorphic:
      return "isomorphic";
    case gi::SolveStatus::NonIsomorphic:
      return "non_isomorphic";
    default:
      return "inconclusive";
  }
}

const char* certificate_kind_name(gi::Certificate::Kind k) {
  switch (k) {
    case gi::Certificate::Kind::SizeMismatch:
      return "size_mismatch";
    case gi::Certificate::Kind::EdgeCountMismatch:
      return "edge_count_mismatch";
    case gi::Certificate::Kind::PresolveInfeasible:
      return "presolve_infeasible";
    default:
      return "positive_lower_bound";
  }
}

json stats_json(const gi::SolveStats& st, long long dc_outer) {
  json times = json::object();
  for (const auto& [name, ms] : st.presolve.stage_times_ms) times[name] = ms;
  return json{{"nodes", st.nodes},
              {"fw_iters", st.fw_iters},
              {"wall_ms", st.wall_ms},
              {"fixings_fraction", st.presolve.fixings_fraction},
              {"obbt_iters_avg", st.presolve.obbt_iters_avg},
              {"dc_outer_iters", dc_outer},
              {"stage_times_ms", times}};
}

json result_json(const gi::SolveResult& res, const SolveOptions& o, long long dc_outer) {
  json out;
  out["status"] = status_name(res.status);
  if (res.permutation) out["permutation"] = res.permutation->images();
  if (res.certificate) {
    json cert{{"kind", certificate_kind_name(res.certificate->kind)}};
    if (res.certificate->kind == gi::Certificate::Kind::PositiveLowerBound &&
        std::isfinite(res.certificate->lower_bound)) {
      cert["lb"] = res.certificate->lower_bound;
    }
    if (res.certificate->kind == gi::Certificate::Kind::PresolveInfeasible) {
      cert["stage"] = res.certificate->stage;
    }
    out["certificate"] = cert;
  }
  if (!res.reason.empty()) out["reason"] = res.reason;
  out["stats"] = stats_json(res.stats, dc_outer);
  out["config_echo"] = config_echo(o);
  out["seed"] = o.seed;
  return out;
}

int status_exit_code(gi::SolveStatus s) {
  switch (s) {
    case gi::SolveStatus::Isomorphic:
      return kExitIsomorphic;
    case gi::SolveStatus::NonIsomorphic:
      return kExitNonIsomorphic;
    default:
      return kExitInconclusive;
  }
}

// Runs one instance with one method; shared by solve and bench.
struct RunOutcome {
  gi::SolveResult result;
  long long dc_outer = 0;
};

RunOutcome run_method(const gi::Graph& a, const gi::Graph& b,
                      const SolveOptions& o, std::ostream* trace) {
  RunOutcome out;
  if (o.method == "dc-fw") {
    gi::DcConfig dc;
    dc.inner_fw.max_iters = o.max_node_iters;
    const auto t0 = std::chrono::steady_clock::now();
    gi::DcResult res = gi::solve_dc(a, b, dc);
    out.result.status = res.status;
    out.result.permutation = res.permutation;
    out.result.stats.fw_iters = res.fw_iters;
    out.result.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    if (res.status == gi::SolveStatus::Inconclusive) out.result.reason = "heuristic";
    out.dc_outer = res.outer_used;
    return out;
  }
  gi::BnbConfig cfg = make_bnb_config(o);
  cfg.trace = trace;
  out.result = gi::solve(a, b, cfg);
  return out;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& path_a, const std::string& path_b,
              const SolveOptions& o, const std::string& in_format,
              const std::string& format, const std::string& trace_path) {
  const gi::Graph a = load_graph(path_a, in_format);
  const gi::Graph b = load_graph(path_b, in_format);

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw IoError("cannot write " + trace_path);
    trace = &trace_file;
  }

  const RunOutcome run = run_method(a, b, o, trace);
  const gi::SolveResult& res = run.result;

  if (format == "csv") {
    std::cout << "status,nodes,fw_iters,wall_ms,fixings_fraction,seed\n"
              << status_name(res.status) << ',' << res.stats.nodes << ','
              << res.stats.fw_iters << ',' << res.stats.wall_ms << ','
              << res.stats.presolve.fixings_fraction << ',' << o.seed << '\n';
  } else {
    std::cout << result_json(res, o, run.dc_outer).dump(2) << '\n';
  }
  return status_exit_code(res.status);
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::string mode = "iso";  // iso | noniso
  std::string base_path;     // nonempty: relabel this graph instead
  int n = 50;
  int degree = 3;
  double gnp = -1.0;  // >= 0: use G(n, p) instead of d-regular
  int flips = 1;
  std::uint64_t seed = 0;
  std::string family;
  std::string out_a, out_b, meta;
};

int cmd_gen(const GenOptions& g) {
  const gi::Graph base =
      !g.base_path.empty() ? load_graph(g.base_path, "auto")
      : g.gnp >= 0.0       ? gi::random_gnp(g.n, g.gnp, g.seed)
                           : gi::random_regular_graph(g.n, g.degree, g.seed);
  const int n = base.size();
  const gi::Permutation perm =
      gi::random_permutation(n, g.seed ^ 0x9e3779b97f4a7c15ULL);
  gi::Graph other = gi::apply_permutation(base, perm);
  if (g.mode == "noniso") {
    other = gi::flip_edges(other, g.flips, g.seed ^ 0xbf58476d1ce4e5b9ULL);
  }
  write_file(g.out_a, gi::write_graph6(base) + "\n");
  write_file(g.out_b, gi::write_graph6(other) + "\n");

  if (!g.meta.empty()) {
    std::string family = g.family;
    if (family.empty()) {
      family = !g.base_path.empty() ? "file" : g.gnp >= 0.0 ? "gnp" : "regular";
    }
    // Same orientation as solve results: p with B(i, j) == A(p(i), p(j)).
    json meta{{"family", family},
              {"mode", g.mode},
              {"n", n},
              {"m", base.directed_edge_count() / 2},
              {"seed", g.seed},
              {"permutation", perm.inverse().images()}};
    if (g.base_path.empty()) {
      if (g.gnp >= 0.0) {
        meta["p"] = g.gnp;
      } else {
        meta["degree"] = g.degree;
      }
    }
    if (g.mode == "noniso") meta["flips"] = g.flips;
    write_file(g.meta, meta.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

double shifted_geomean_seconds(const std::vector<double>& seconds, double shift = 1.0) {
  if (seconds.empty()) return 0.0;
  double acc = 0.0;
  for (double s : seconds) acc += std::log(s + shift);
  return std::exp(acc / static_cast<double>(seconds.size())) - shift;
}

struct BenchRecord {
  std::string instance, family, method, status;
  int n = 0, m = 0;
  double wall_ms = 0;
  long long nodes = 0, fw_iters = 0;
  double fixings_fraction = 0, obbt_iters_avg = 0;
  std::uint64_t seed = 0;
};

int cmd_bench(const std::string& dir, const std::string& methods_csv,
              SolveOptions base_options, const std::string& format,
              const std::string& out_path) {
  std::vector<std::string> methods;
  {
    std::stringstream ss(methods_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      if (std::find(kMethods.begin(), kMethods.end(), tok) == kMethods.end()) {
        throw CLI::ValidationError("--methods", "unknown method '" + tok + "'");
      }
      methods.push_back(tok);
    }
  }
  if (methods.empty()) throw CLI::ValidationError("--methods", "no methods given");

  struct Instance {
    std::string id, family;
    gi::Graph a, b;
  };
  std::vector<Instance> instances;
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 5 && name.ends_with("_a.g6")) {
      stems.push_back(name.substr(0, name.size() - 5));
    }
  }
  std::sort(stems.begin(), stems.end());
  for (const std::string& stem : stems) {
    const fs::path pa = fs::path(dir) / (stem + "_a.g6");
    const fs::path pb = fs::path(dir) / (stem + "_b.g6");
    if (!fs::exists(pb)) continue;
    Instance inst;
    inst.id = stem;
    inst.a = load_graph(pa.string(), "g6");
    inst.b = load_graph(pb.string(), "g6");
    const fs::path meta = fs::path(dir) / (stem + ".meta.json");
    if (fs::exists(meta)) {
      try {
        const auto parsed = nlohmann::json::parse(read_file(meta.string()));
        inst.family = parsed.value("family", "");
      } catch (const nlohmann::json::exception&) {
        // Malformed metadata only loses the family tag.
      }
    }
    if (inst.family.empty()) inst.family = "unknown";
    instances.push_back(std::move(inst));
  }
  if (instances.empty()) throw IoError("no *_a.g6/*_b.g6 pairs under " + dir);

  std::vector<BenchRecord> records;
  for (const Instance& inst : instances) {
    for (const std::string& method : methods) {
      SolveOptions o = base_options;
      o.method = method;
      o.presolve_override.clear();  // presets define the stages per method
      const RunOutcome run = run_method(inst.a, inst.b, o, nullptr);
      BenchRecord r;
      r.instance = inst.id;
      r.family = inst.family;
      r.method = method;
      r.status = status_name(run.result.status);
      r.n = inst.a.size();
      r.m = inst.a.directed_edge_count() / 2;
      r.wall_ms = run.result.stats.wall_ms;
      r.nodes = run.result.stats.nodes;
      r.fw_iters = run.result.stats.fw_iters;
      r.fixings_fraction = run.result.stats.presolve.fixings_fraction;
      r.obbt_iters_avg = run.result.stats.presolve.obbt_iters_avg;
      r.seed = o.seed;
      records.push_back(std::move(r));
    }
  }

  // Per (family, method) summary; timeouts enter the mean at the limit.
  std::map<std::pair<std::string, std::string>, std::vector<const BenchRecord*>> groups;
  for (const BenchRecord& r : records) groups[{r.family, r.method}].push_back(&r);
  json summary = json::array();
  for (const auto& [key, rows] : groups) {
    std::vector<double> seconds;
    long long solved = 0;
    for (const BenchRecord* r : rows) {
      const bool is_solved = r->status != "inconclusive";
      solved += is_solved;
      double s = r->wall_ms / 1000.0;
      if (!is_solved && base_options.time_limit_ms > 0) {
        s = base_options.time_limit_ms / 1000.0;
      }
      seconds.push_back(s);
    }
    summary.push_back(json{{"family", key.first},
                           {"method", key.second},
                           {"instances", rows.size()},
                           {"solved", solved},
                           {"solved_fraction", static_cast<double>(solved) / rows.size()},
                           {"shifted_geomean_s", shifted_geomean_seconds(seconds)}});
  }

  std::ostringstream body;
  if (format == "csv") {
    body << "instance,family,method,status,n,m,wall_ms,nodes,fw_iters,"
            "fixings_fraction,obbt_iters_avg,seed\n";
    for (const BenchRecord& r : records) {
      body << r.instance << ',' << r.family << ',' << r.method << ',' << r.status
           << ',' << r.n << ',' << r.m << ',' << r.wall_ms << ',' << r.nodes << ','
           << r.fw_iters << ',' << r.fixings_fraction << ',' << r.obbt_iters_avg
           << ',' << r.seed << '\n';
    }
    body << "\nfamily,method,instances,solved,solved_fraction,shifted_geomean_s\n";
    for (const auto& row : summary) {
      body << row["family"].get<std::string>() << ','
           << row["method"].get<std::string>() << ',' << row["instances"] << ','
           << row["solved"] << ',' << row["solved_fraction"] << ','
           << row["shifted_geomean_s"] << '\n';
    }
  } else {
    json recs = json::array();
    for (const BenchRecord& r : records) {
      recs.push_back(json{{"instance", r.instance},
                          {"family", r.family},
                          {"method", r.method},
                          {"status", r.status},
                          {"n", r.n},
                          {"m", r.m},
                          {"wall_ms", r.wall_ms},
                          {"nodes", r.nodes},
                          {"fw_iters", r.fw_iters},
                          {"fixings_fraction", r.fixings_fraction},
                          {"obbt_iters_avg", r.obbt_iters_avg},
                          {"seed", r.seed}});
    }
    body << json{{"records", recs}, {"summary", summary}}.dump(2) << '\n';
  }

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    write_file(out_path, body.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// presolve

int cmd_presolve(const std::string& path_a, const std::string& path_b,
                 const SolveOptions& o, const std::string& in_format) {
  const gi::Graph a = load_graph(path_a, in_format);
  const gi::Graph b = load_graph(path_b, in_format);
  if (a.size() != b.size()) {
    std::cout << json{{"feasible", false}, {"stage", "size"}}.dump(2) << '\n';
    return kExitNonIsomorphic;
  }
  gi::PresolveConfig cfg = make_bnb_config(o).presolve;
  const auto t0 = std::chrono::steady_clock::now();
  const gi::PresolveOutcome out = gi::run_presolve(a, b, cfg);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();

  json times = json::object();
  for (const auto& [name, ms] : out.stats.stage_times_ms) times[name] = ms;
  json doc{{"feasible", !out.stats.infeasible},
           {"fixings_fraction", out.stats.fixings_fraction},
           {"fixed_entries", out.mask.fixed_count()},
           {"fixed_ones", out.mask.one_count()},
           {"obbt_trials", out.stats.obbt_trials},
           {"obbt_fixed", out.stats.obbt_fixed},
           {"obbt_iters_avg", out.stats.obbt_iters_avg},
           {"stage_times_ms", times},
           {"wall_ms", wall_ms},
           {"config_echo", config_echo(o)},
           {"seed", o.seed}};
  if (out.stats.infeasible) doc["stage"] = out.stats.infeasible_stage;
  std::cout << doc.dump(2) << '\n';
  return out.stats.infeasible ? kExitNonIsomorphic : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph isomorphism via Frank-Wolfe over the Birkhoff polytope"};
  app.require_subcommand(1);

  // solve
  std::string path_a, path_b, in_format = "auto", format = "json", trace_path;
  SolveOptions solve_options;
  CLI::App* solve = app.add_subcommand("solve", "Decide isomorphism of two graphs");
  solve->add_option("a", path_a, "First graph file")->required();
  solve->add_option("b", path_b, "Second graph file")->required();
  solve->add_option("--in-format", in_format, "Input format")
      ->check(CLI::IsMember({"auto", "g6", "edges"}));
  solve->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--trace", trace_path, "Write one line per search node to this file");
  add_solve_options(solve, solve_options);

  // gen
  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a seeded instance pair");
  gen_cmd->add_option("--mode", gen.mode, "iso | noniso")
      ->check(CLI::IsMember({"iso", "noniso"}))
      ->capture_default_str();
  gen_cmd->add_option("--base", gen.base_path, "Relabel this graph file instead of sampling");
  gen_cmd->add_option("--n", gen.n, "Vertex count")->capture_default_str();
  gen_cmd->add_option("--degree", gen.degree, "Regular degree")->capture_default_str();
  gen_cmd->add_option("--gnp", gen.gnp, "Use G(n, p) with this edge probability instead");
  gen_cmd->add_option("--flips", gen.flips, "Edge flips for noniso mode")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--family", gen.family, "Family tag for the metadata");
  gen_cmd->add_option("--out-a", gen.out_a, "Output file for graph A")->required();
  gen_cmd->add_option("--out-b", gen.out_b, "Output file for graph B")->required();
  gen_cmd->add_option("--meta", gen.meta, "Metadata JSON output file");

  // bench
  std::string bench_dir, bench_methods = "boscia-clique-star", bench_out;
  std::string bench_format = "json";
  SolveOptions bench_options;
  CLI::App* bench = app.add_subcommand("bench", "Run methods over an instance directory");
  bench->add_option("--dir", bench_dir, "Directory with <id>_a.g6/<id>_b.g6 pairs")
      ->required();
  bench->add_option("--methods", bench_methods, "Comma list of methods")
      ->capture_default_str();
  bench->add_option("--format", bench_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  bench->add_option("--out", bench_out, "Write the report here instead of stdout");
  add_solve_options(bench, bench_options);

  // presolve
  std::string pre_a, pre_b, pre_in_format = "auto";
  SolveOptions pre_options;
  CLI::App* pre = app.add_subcommand("presolve", "Run presolve only and report fixings");
  pre->add_option("a", pre_a, "First graph file")->required();
  pre->add_option("b", pre_b, "Second graph file")->required();
  pre->add_option("--in-format", pre_in_format, "Input format")
      ->check(CLI::IsMember({"auto", "g6", "edges"}));
  add_solve_options(pre, pre_options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(path_a, path_b, solve_options, in_format, format, trace_path);
    }
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (bench->parsed()) {
      return cmd_bench(bench_dir, bench_methods, bench_options, bench_format, bench_out);
    }
    if (pre->parsed()) return cmd_presolve(pre_a, pre_b, pre_options, pre_in_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
