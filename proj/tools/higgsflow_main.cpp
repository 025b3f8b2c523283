// higgsflow: configure, run, and report Hermitian-Yang-Mills flow experiments
// on the flat 2-torus. Subcommands:
//   flow        integrate the heat flow for a catalog entry (series.csv + summary.json)
//   functional  evaluate the Donaldson functional by path quadrature and closed form
//   chern-p1    the first-Chern integral of the tautological-type metric on P^1
//   catalog     registry utilities (list)
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "higgsflow/catalog.hpp"
#include "higgsflow/flow.hpp"

namespace {

using nlohmann::json;

// Shortest decimal form that round-trips to the same binary double.
std::string fmt(double v) {
  if (v == 0.0) return "0";  // fold away negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct RunConfig {
  std::string entry;
  int grid_size = 32;
  hf::FlowConfig flow;
  int functional_nodes = 32;
  std::string output_dir = ".";
  long long seed = 0;  // reserved for randomized suites; recorded, not consumed
};

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw hf::Error("config: unknown key '" + it.key() + "' in " + where);
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hf::Error("cannot open config file '" + path + "'");
  json j = json::parse(in);  // throws on malformed JSON
  if (!j.is_object()) throw hf::Error("config: top level must be an object");
  reject_unknown(j, {"entry", "grid_size", "flow", "functional", "output_dir", "seed"},
                 "the top level");

  RunConfig cfg;
  if (!j.contains("entry")) throw hf::Error("config: required key 'entry' missing");
  cfg.entry = j.at("entry").get<std::string>();
  if (j.contains("grid_size")) cfg.grid_size = j.at("grid_size").get<int>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<long long>();

  if (j.contains("flow")) {
    const json& f = j.at("flow");
    if (!f.is_object()) throw hf::Error("config: 'flow' must be an object");
    reject_unknown(
        f, {"dt_initial", "dt_safety", "t_max", "residual_target", "record_every", "c"},
        "'flow'");
    if (f.contains("dt_initial")) cfg.flow.dt_initial = f.at("dt_initial").get<double>();
    if (f.contains("dt_safety")) cfg.flow.dt_safety = f.at("dt_safety").get<double>();
    if (f.contains("t_max")) cfg.flow.t_max = f.at("t_max").get<double>();
    if (f.contains("residual_target"))
      cfg.flow.residual_target = f.at("residual_target").get<double>();
    if (f.contains("record_every")) cfg.flow.record_every = f.at("record_every").get<int>();
    if (f.contains("c")) cfg.flow.c = f.at("c").get<double>();
  }
  if (j.contains("functional")) {
    const json& f = j.at("functional");
    if (!f.is_object()) throw hf::Error("config: 'functional' must be an object");
    reject_unknown(f, {"nodes"}, "'functional'");
    if (f.contains("nodes")) cfg.functional_nodes = f.at("nodes").get<int>();
  }
  cfg.flow.validate();
  if (cfg.functional_nodes < 4) throw hf::Error("config: functional.nodes must be >= 4");
  return cfg;
}

int cmd_flow(const std::string& config_path) {
  RunConfig cfg = load_config(config_path);
  hf::TorusGeometry g(cfg.grid_size);
  hf::BuiltBundle built = hf::build(cfg.entry, g);

  auto t0 = std::chrono::steady_clock::now();
  // Start from the trace-normalized representative of the initial metric
  // (a no-op for entries that are already normalized).
  hf::HermitianMetricField h0 =
      hf::conformal_normalize(built.h0, built.bundle, g, cfg.flow.c);
  hf::FlowResult result = hf::run_flow(h0, built.bundle, g, cfg.flow);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(cfg.output_dir);
  std::filesystem::path dir(cfg.output_dir);

  {
    std::ofstream csv(dir / "series.csv", std::ios::binary);
    if (!csv) throw hf::Error("cannot write series.csv in '" + cfg.output_dir + "'");
    csv << "t,L,K_l1,K_l2,K_linf,trS_max,minEigH,superineq_lhs,superineq_rhs\n";
    for (const hf::DiagnosticsRow& r : result.state.diagnostics) {
      csv << fmt(r.t) << ',' << fmt(r.L) << ',' << fmt(r.K_l1) << ',' << fmt(r.K_l2) << ','
          << fmt(r.K_linf) << ',' << fmt(r.trS_max) << ',' << fmt(r.min_eig_H) << ','
          << fmt(r.superineq_lhs) << ',' << fmt(r.superineq_rhs) << '\n';
    }
  }

  const hf::DiagnosticsRow& last = result.state.diagnostics.back();
  json summary;
  summary["entry"] = cfg.entry;
  summary["grid_size"] = cfg.grid_size;
  summary["final_t"] = last.t;
  summary["final_residual"] = last.K_linf;
  summary["termination"] = result.converged ? "residual_target" : "t_max";
  summary["steps"] = result.steps;
  summary["wall_time_seconds"] = wall;
  {
    std::ofstream js(dir / "summary.json", std::ios::binary);
    if (!js) throw hf::Error("cannot write summary.json in '" + cfg.output_dir + "'");
    js << summary.dump(2) << '\n';
  }

  std::cout << "entry " << cfg.entry << ": " << (result.converged ? "converged" : "hit t_max")
            << " at t=" << fmt(last.t) << " residual=" << fmt(last.K_linf) << " ("
            << result.steps << " steps, " << fmt(wall) << " s)\n";
  return result.converged ? 0 : 2;
}

int cmd_chern_p1(double radius, int nodes) {
  if (nodes < 64)
    std::cerr << "warning: " << nodes
              << " quadrature nodes is coarse; the integral may not be converged\n";
  double v = hf::p1_gamma1_integral(radius, nodes);
  std::cout << fmt(v) << '\n';
  return std::abs(v + 1.0) < 1e-3 ? 0 : 1;
}

hf::HermitianMetricField metric_from_spec(const std::string& spec, const hf::BuiltBundle& built,
                                          const hf::TorusGeometry& g,
                                          const hf::FlowConfig& flow_cfg) {
  if (spec == "base") return built.h0;
  if (spec.rfind("scale:", 0) == 0) {
    double a = std::stod(spec.substr(6));
    if (!(a > 0.0)) throw hf::Error("metric spec: scale factor must be positive");
    return hf::HermitianMetricField(hf::cxd(a, 0.0) * built.h0.H);
  }
  if (spec.rfind("flow:", 0) == 0) {
    double t = std::stod(spec.substr(5));
    if (!(t >= 0.0)) throw hf::Error("metric spec: flow time must be nonnegative");
    hf::HermitianMetricField h0 =
        hf::conformal_normalize(built.h0, built.bundle, g, flow_cfg.c);
    if (t == 0.0) return h0;
    hf::FlowConfig fc = flow_cfg;
    fc.t_max = t;
    fc.residual_target = std::numeric_limits<double>::min();  // run to t exactly
    fc.record_every = std::numeric_limits<int>::max();
    return hf::run_flow(h0, built.bundle, g, fc).state.h;
  }
  throw hf::Error("metric spec '" + spec + "' not understood (base | scale:<a> | flow:<t>)");
}

int cmd_functional(const std::string& config_path, const std::string& h_spec,
                   const std::string& k_spec) {
  RunConfig cfg = load_config(config_path);
  hf::TorusGeometry g(cfg.grid_size);
  hf::BuiltBundle built = hf::build(cfg.entry, g);
  hf::HermitianMetricField h = metric_from_spec(h_spec, built, g, cfg.flow);
  hf::HermitianMetricField k = metric_from_spec(k_spec, built, g, cfg.flow);

  hf::FunctionalReport path =
      hf::donaldson_path(h, k, built.bundle, g, cfg.functional_nodes, cfg.flow.c);
  hf::FunctionalReport closed = hf::donaldson_closed_form(h, k, built.bundle, g, cfg.flow.c);
  double diff = path.value - closed.value;

  std::cout << "path=" << fmt(path.value) << " (nodes=" << cfg.functional_nodes << ")\n"
            << "closed_form=" << fmt(closed.value) << '\n'
            << "diff=" << fmt(diff) << '\n';
  return std::abs(diff) < 1e-5 * (1.0 + std::abs(path.value)) ? 0 : 1;
}

int cmd_catalog_list() {
  for (const hf::CatalogEntry& e : hf::catalog_entries()) {
    const char* status = "";
    switch (e.status) {
      case hf::Stability::stable: status = "stable"; break;
      case hf::Stability::semistable_not_stable: status = "semistable (not stable)"; break;
      case hf::Stability::polystable: status = "polystable"; break;
    }
    std::cout << e.name << "  rank=" << e.rank << "  degree=" << e.degree.numerator();
    if (e.degree.denominator() != 1) std::cout << '/' << e.degree.denominator();
    std::cout << "  slope=" << e.slope_.numerator();
    if (e.slope_.denominator() != 1) std::cout << '/' << e.slope_.denominator();
    std::cout << "  " << status << "\n    " << e.justification << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian-Yang-Mills heat-flow experiments on the flat 2-torus"};
  app.require_subcommand(1);

  std::string flow_config;
  CLI::App* flow = app.add_subcommand("flow", "Integrate the heat flow for a catalog entry");
  flow->add_option("--config", flow_config, "JSON run configuration")->required();

  double radius = 1000.0;
  int nodes = 512;
  CLI::App* p1 = app.add_subcommand(
      "chern-p1", "Integrate the first Chern form of the tautological-type metric on P^1");
  p1->add_option("--radius", radius, "radial cutoff R (integral -> -1 as R -> inf)")
      ->check(CLI::PositiveNumber);
  p1->add_option("--nodes", nodes, "quadrature nodes")->check(CLI::PositiveNumber);

  std::string fun_config, h_spec, k_spec;
  CLI::App* fun = app.add_subcommand(
      "functional", "Evaluate the Donaldson functional by path quadrature and closed form");
  fun->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  fun->add_option("--config", fun_config, "JSON run configuration")->required();
  fun->add_option("--h", h_spec, "first metric: base | scale:<a> | flow:<t>")->required();
  fun->add_option("--k", k_spec, "second metric: base | scale:<a> | flow:<t>")->required();

  CLI::App* cat = app.add_subcommand("catalog", "Registry utilities");
  cat->require_subcommand(1);
  CLI::App* list = cat->add_subcommand("list", "List registered bundles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (flow->parsed()) return cmd_flow(flow_config);
    if (p1->parsed()) return cmd_chern_p1(radius, nodes);
    if (fun->parsed()) return cmd_functional(fun_config, h_spec, k_spec);
    if (cat->parsed() && list->parsed()) return cmd_catalog_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
