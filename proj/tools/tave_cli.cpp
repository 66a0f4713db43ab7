// Command-line front end: solve instances, generate seeded instances, run the
// three experiments, verify the built-in reference tables, and run structure
// certificates.
//
// Exit codes: 0 success/converged, 1 usage or input error, 2 solver
// non-convergence, 3 verification failure.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "tave/experiments.hpp"
#include "tave/verify.hpp"

namespace fs = std::filesystem;
using namespace tave;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "json";
  std::string jacobian = "true";
  bool inexact = false;
};

SolverConfig make_config(const GlobalOpts& g) {
  SolverConfig cfg;
  if (!g.config_path.empty())
    apply_config_json(cfg, Json::parse(read_file(g.config_path)));
  cfg.convention = g.jacobian == "paper" ? JacobianConvention::PaperLiteral
                                         : JacobianConvention::TrueDerivative;
  if (g.inexact) cfg.inexact = true;
  if (cfg.epsilon < 1e-12) cfg.epsilon = 1e-12;  // floating-point floor
  return cfg;
}

void write_artifact(const GlobalOpts& g, const std::string& name, const std::string& content) {
  fs::create_directories(g.out_dir);
  write_file((fs::path(g.out_dir) / name).string(), content);
}

int run_solve(const GlobalOpts& g, const std::string& tensor_file, const std::string& b_spec,
              const std::string& x0_spec, const std::string& paper_example,
              const std::string& report_name, bool csv_trace) {
  SolverConfig cfg = make_config(g);
  cfg.record_iterates = false;

  std::optional<TaveProblem> prob;
  std::optional<Vec> known;
  if (!paper_example.empty()) {
    if (paper_example == "sec3")
      prob = paper::section3_problem();
    else if (paper_example == "eg21")
      prob = paper::example21_problem();
    else
      throw CLI::ValidationError("--paper-example must be sec3 or eg21");
  } else if (!tensor_file.empty()) {
    Json j = Json::parse(read_file(tensor_file));
    if (j.contains("tensor")) {
      InstanceFile inst = InstanceFile::from_json(j);
      known = inst.known_solution;
      prob = inst.problem();
    } else {
      Tensor t = tensor_from_json(j);
      if (b_spec.empty()) throw CLI::ValidationError("plain tensor file needs --b");
      Vec b;
      if (fs::exists(b_spec))
        b = vec_from_json(Json::parse(read_file(b_spec)));
      else
        b = vec_from_json(Json::parse(b_spec));
      prob = TaveProblem(std::move(t), std::move(b));
    }
  } else {
    throw CLI::ValidationError("need a tensor/instance file or --paper-example");
  }

  Vec x0;
  if (x0_spec == "known") {
    if (!known) throw CLI::ValidationError("--x0 known: instance has no known_solution");
    x0 = *known;
  } else if (x0_spec == "random" || x0_spec.empty()) {
    Rng rng(g.seed, stream::starts);
    x0 = random_normal_vec(prob->dim(), rng);
  } else if (fs::exists(x0_spec)) {
    x0 = vec_from_json(Json::parse(read_file(x0_spec)));
  } else {
    x0 = vec_from_json(Json::parse(x0_spec));
  }

  SolverReport rep = solve(*prob, x0, cfg);
  Json j = report_to_json(rep, cfg, g.seed_set ? std::optional(g.seed) : std::nullopt);
  if (g.format == "csv" || csv_trace) write_artifact(g, report_name + "_trace.csv", trace_to_csv(rep));
  write_artifact(g, report_name + ".json", j.dump(2) + "\n");
  std::cout << j["status"].get<std::string>() << " iterations=" << rep.iterations
            << " final_norm_H=" << rep.trace.back().norm_H << "\n";
  return rep.status == SolveStatus::Converged ? 0 : 2;
}

int run_gen(const GlobalOpts& g, const std::string& kind_s, int m, int n, double margin,
            const std::string& out_name) {
  if (!g.seed_set) throw CLI::ValidationError("gen requires --seed for reproducibility");
  GenKind kind;
  if (kind_s == "sym-nonneg")
    kind = GenKind::SymNonneg;
  else if (kind_s == "shifted-m")
    kind = GenKind::ShiftedM;
  else if (kind_s == "cd-construct")
    kind = GenKind::CdConstruct;
  else
    throw CLI::ValidationError("kind must be sym-nonneg, shifted-m or cd-construct");
  InstanceFile inst = generate_instance(kind, m, n, g.seed, margin);
  // construction guarantees a known solution; verify on emit
  double rn = residual(inst.problem(), *inst.known_solution).lpNorm<Eigen::Infinity>();
  if (rn > inst.solution_tolerance)
    throw std::runtime_error("generated instance failed its own solution check");
  write_artifact(g, out_name, inst.to_json().dump(2) + "\n");
  std::cout << "wrote " << out_name << " (known-solution residual " << rn << ")\n";
  return 0;
}

int run_exp(const GlobalOpts& g, int which) {
  if (!g.seed_set) throw CLI::ValidationError("exp requires --seed");
  ExperimentSummary s;
  switch (which) {
    case 1: s = experiment1(g.seed); break;
    case 2: s = experiment2(g.seed); break;
    case 3: s = experiment3(g.seed); break;
    default: throw CLI::ValidationError("experiment must be 1, 2 or 3");
  }
  for (const auto& [name, content] : s.artifacts) write_artifact(g, name, content);
  std::cout << s.name << ": " << (s.passed ? "pass" : "FAIL") << " (" << s.detail << ")\n";
  return s.passed ? 0 : 3;
}

int run_verify() {
  bool all = true;
  for (const CheckResult& c : verify_paper_tables()) {
    std::cout << (c.passed ? "pass" : "FAIL") << "  " << c.name << "  [" << c.detail << "]\n";
    all = all && c.passed;
  }
  return all ? 0 : 3;
}

int run_check_structure(const std::string& tensor_file) {
  Json j = Json::parse(read_file(tensor_file));
  Tensor t = j.contains("tensor") ? tensor_from_json(j.at("tensor")) : tensor_from_json(j);
  StructureCertificate cert = certify_strong_m_shift(t);
  std::cout << "z_tensor=" << (cert.is_z_tensor ? "yes" : "no")
            << " verdict=" << to_string(cert.verdict);
  if (cert.shift_c) std::cout << " c=" << *cert.shift_c;
  if (cert.rho_upper) std::cout << " rho_upper=" << *cert.rho_upper;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor absolute value equation solver"};
  app.require_subcommand(1);
  // let global flags appear after the subcommand too
  app.fallthrough();
  GlobalOpts g;
  auto* seed_opt = app.add_option("--seed", g.seed, "master RNG seed");
  app.add_option("--config", g.config_path, "solver config JSON file");
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", g.format, "json or csv")->capture_default_str();
  app.add_option("--jacobian", g.jacobian, "true or paper")->capture_default_str();
  app.add_flag("--inexact", g.inexact, "inexact LM linear solves");

  std::string tensor_file, b_spec, x0_spec, paper_example, report_name = "report";
  bool csv_trace = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve a TAVE instance");
  solve_cmd->add_option("instance", tensor_file, "instance or tensor JSON file");
  solve_cmd->add_option("--b", b_spec, "rhs: inline JSON array or file");
  solve_cmd->add_option("--x0", x0_spec, "start: inline array, file, 'known' or 'random'");
  solve_cmd->add_option("--paper-example", paper_example, "built-in instance: sec3 or eg21");
  solve_cmd->add_option("--report-name", report_name, "basename for report files");
  solve_cmd->add_flag("--trace-csv", csv_trace, "also write the iteration trace as CSV");

  std::string gen_kind;
  int gen_m = 4, gen_n = 4;
  double gen_margin = 0.01;
  std::string gen_out = "instance.json";
  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded instance");
  gen_cmd->add_option("kind", gen_kind, "sym-nonneg, shifted-m or cd-construct")->required();
  gen_cmd->add_option("-m,--order", gen_m, "tensor order")->capture_default_str();
  gen_cmd->add_option("-n,--dim", gen_n, "dimension")->capture_default_str();
  gen_cmd->add_option("--margin", gen_margin, "shift margin")->capture_default_str();
  gen_cmd->add_option("--name", gen_out, "output filename")->capture_default_str();

  int exp_which = 1;
  auto* exp_cmd = app.add_subcommand("exp", "run a built-in experiment");
  exp_cmd->add_option("which", exp_which, "experiment number 1-3")->required();

  auto* verify_cmd = app.add_subcommand("verify-paper", "check the built-in reference tables");

  std::string check_file;
  auto* check_cmd = app.add_subcommand("check-structure", "run M-tensor shift certificates");
  check_cmd->add_option("tensor", check_file, "tensor or instance JSON file")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*solve_cmd)
      return run_solve(g, tensor_file, b_spec, x0_spec, paper_example, report_name, csv_trace);
    if (*gen_cmd) return run_gen(g, gen_kind, gen_m, gen_n, gen_margin, gen_out);
    if (*exp_cmd) return run_exp(g, exp_which);
    if (*verify_cmd) return run_verify();
    if (*check_cmd) return run_check_structure(check_file);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
