#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "oprel/experiments.hpp"
#include "oprel/funceq.hpp"

using namespace oprel;
using nlohmann::json;

namespace {

HermitianMatrix matrix_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const auto& re = j.at("re");
  if (static_cast<int>(re.size()) != n * n) throw Error("matrix json: re has wrong length");
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) m(i, c) = re[i * n + c].get<double>();
  if (j.contains("im")) {
    const auto& im = j.at("im");
    if (static_cast<int>(im.size()) != n * n) throw Error("matrix json: im has wrong length");
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c)
        m(i, c) += cplx(0.0, im[i * n + c].get<double>());
  }
  return HermitianMatrix(m);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path);
  f << text;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw Error("empty integer list");
  return out;
}

int finish_report(const ExperimentReport& rep, double tol, const std::string& json_path) {
  std::cout << rep.subcommand << ": sdp=" << rep.objective_sdp
            << " oracle=" << rep.objective_oracle << " gap=" << rep.gap
            << " time=" << rep.wall_time_s << "s" << (rep.note.empty() ? "" : " [" + rep.note + "]")
            << "\n";
  if (!json_path.empty()) write_text(json_path, rep.to_json() + "\n");
  if (!rep.solver_ok) return 2;
  return rep.gap <= tol ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semidefinite approximations of the matrix logarithm and entropy cones"};
  app.require_subcommand(1);

  int m = 3, k = 3, n = 0, l = -1, terms = 5, jobs = 1, points = 400;
  uint64_t seed = 1;
  double tol = -1.0, sparsity = 0.3, grid_min = 1e-3, grid_max = 1e3;
  std::string json_path, out_path, input_path, system_name = "op_rel_entr";
  std::string fix_path, minimize_var, maximize_var, m_list = "3", k_list = "3";
  bool check_roundtrip = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m", m, "quadrature order");
    sub->add_option("--k", k, "root scalings");
    sub->add_option("--seed", seed, "instance seed");
    sub->add_option("--tol", tol, "gap tolerance for exit status");
    sub->add_option("--json", json_path, "write the JSON report here");
    sub->add_option("--jobs", jobs, "worker threads for independent instances")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* maxent = app.add_subcommand("maxent", "entropy maximization over Ax = b");
  maxent->add_option("--n", n, "variables")->default_val(50);
  maxent->add_option("--l", l, "equality rows (default n/2)");
  add_common(maxent);

  CLI::App* gp = app.add_subcommand("gp", "geometric programming via the scalar cone");
  gp->add_option("--n", n, "variables")->default_val(10);
  gp->add_option("--l", l, "posynomial constraints (default n)");
  gp->add_option("--terms", terms, "terms per posynomial");
  gp->add_option("--sparsity", sparsity, "fraction of active exponents per term");
  add_common(gp);

  CLI::App* tracevar = app.add_subcommand("tracevar", "variational trace identity");
  tracevar->add_option("--n", n, "matrix size")->default_val(3);
  add_common(tracevar);

  CLI::App* approx = app.add_subcommand("approx-error", "error/bound table for r_{m,k}");
  approx->add_option("--m", m_list, "comma list of quadrature orders");
  approx->add_option("--k", k_list, "comma list of root scalings");
  approx->add_option("--grid-min", grid_min, "left end of the log-spaced grid");
  approx->add_option("--grid-max", grid_max, "right end of the log-spaced grid");
  approx->add_option("--points", points, "grid size");
  approx->add_option("--out", out_path, "CSV destination (stdout when omitted)");
  approx->add_option("--json", json_path, "JSON destination");
  approx->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI::App* membership = app.add_subcommand("membership", "two-way cone membership check");
  membership->add_option("input", input_path, "JSON file with X, Y, T, m, k")->required();
  membership->add_option("--json", json_path, "write the JSON verdict here");

  CLI::App* exporter = app.add_subcommand("export-sdpa", "compile a system and write .dat-s");
  exporter
      ->add_option("--system", system_name,
                   "op_rel_entr | hypograph_rmk | quantum_rel_entr_reduced | "
                   "quantum_rel_entr_full | quantum_entr | funceq_log_mean | funceq_agm")
      ->default_val("op_rel_entr");
  exporter->add_option("--n", n, "matrix dimension")->default_val(2);
  exporter->add_option("--m", m, "quadrature order");
  exporter->add_option("--k", k, "root scalings");
  exporter->add_option("--fix", fix_path, "JSON file of variable fixings");
  exporter->add_option("--minimize-trace", minimize_var, "objective: minimize Tr of variable");
  exporter->add_option("--maximize-trace", maximize_var, "objective: maximize Tr of variable");
  exporter->add_option("--out", out_path, "output path")->required();
  exporter->add_flag("--check-roundtrip", check_roundtrip, "reimport and verify the file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*maxent) {
      if (l < 0) l = n / 2;
      return finish_report(run_maxent(n, l, seed, m, k), tol > 0 ? tol : 1e-5, json_path);
    }
    if (*gp) {
      if (l < 0) l = n;
      return finish_report(run_gp(n, l, terms, sparsity, seed, m, k), tol > 0 ? tol : 1e-5,
                           json_path);
    }
    if (*tracevar) {
      return finish_report(run_tracevar(n, seed, m, k), tol > 0 ? tol : 1e-4, json_path);
    }
    if (*approx) {
      std::vector<ApproxErrorRow> rows = approx_error_table(
          parse_int_list(m_list), parse_int_list(k_list), log_spaced_grid(grid_min, grid_max, points),
          jobs);
      const std::string csv = approx_error_csv(rows);
      if (out_path.empty())
        std::cout << csv;
      else
        write_text(out_path, csv);
      if (!json_path.empty()) write_text(json_path, approx_error_json(rows) + "\n");
      return 0;
    }
    if (*membership) {
      std::ifstream f(input_path);
      if (!f) throw Error("cannot open " + input_path);
      json j = json::parse(f);
      HermitianMatrix x = matrix_from_json(j.at("X"));
      HermitianMatrix y = matrix_from_json(j.at("Y"));
      HermitianMatrix t = matrix_from_json(j.at("T"));
      const int mm = j.value("m", 3), kk = j.value("k", 3);
      const bool oracle = check_membership(x, y, t, mm, kk, MembershipMethod::oracle);
      const bool cert = check_membership(x, y, t, mm, kk, MembershipMethod::certificate);
      json verdict = {{"member_oracle", oracle}, {"member_certificate", cert},
                      {"methods_agree", oracle == cert}, {"m", mm}, {"k", kk}};
      std::cout << verdict.dump(2) << "\n";
      if (!json_path.empty()) write_text(json_path, verdict.dump(2) + "\n");
      return oracle == cert ? 0 : 2;
    }
    if (*exporter) {
      LinearMatrixSystem sys;
      if (system_name == "op_rel_entr")
        sys = op_rel_entr_epi_cone(n, m, k, true);
      else if (system_name == "hypograph_rmk")
        sys = matrix_hypograph_rmk(n, m, k);
      else if (system_name == "quantum_rel_entr_reduced")
        sys = quantum_rel_entr_epigraph(n, m, k, QreMode::reduced);
      else if (system_name == "quantum_rel_entr_full")
        sys = quantum_rel_entr_epigraph(n, m, k, QreMode::full);
      else if (system_name == "quantum_entr")
        sys = quantum_entr_hypograph(n, m, k);
      else if (system_name == "funceq_log_mean")
        sys = funceq_cone(log_mean_iteration(), m, k);
      else if (system_name == "funceq_agm")
        sys = funceq_cone(agm_iteration(), m, k);
      else
        throw Error("unknown system: " + system_name);

      Assignment fix;
      if (!fix_path.empty()) {
        std::ifstream f(fix_path);
        if (!f) throw Error("cannot open " + fix_path);
        json j = json::parse(f);
        for (auto it = j.begin(); it != j.end(); ++it)
          fix.insert({it.key(), matrix_from_json(it.value())});
      }
      Objective obj;
      if (!minimize_var.empty() || !maximize_var.empty()) {
        const std::string& name = minimize_var.empty() ? maximize_var : minimize_var;
        const int vi = sys.variable_index(name);
        if (vi < 0) throw Error("objective variable not declared: " + name);
        obj = Objective::trace_of(name, sys.variables[vi].dim, minimize_var.empty());
      }
      CompiledProblem cp = compile(sys, obj, fix);
      export_sdpa_file(cp.sdp, out_path);
      std::cout << "wrote " << out_path << " (" << cp.sdp.num_vars << " variables, "
                << cp.sdp.blocks.size() << " blocks)\n";
      if (check_roundtrip) {
        BlockSdp back = import_sdpa_file(out_path);
        if (export_sdpa(back) != export_sdpa(cp.sdp)) {
          std::cerr << "round-trip mismatch\n";
          return 2;
        }
        std::cout << "round-trip verified\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
