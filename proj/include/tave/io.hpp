#pragma once

// JSON instance files and machine-readable run reports.
//
// Tensor format: {"order": m, "dim": n, "symmetric": bool,
//                 "entries": [{"idx": [1-based ints], "value": real}, ...]}
// Symmetric entries carry sorted idx and apply to all permutations; unlisted
// entries are zero; a duplicate idx is an error.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tave/solver.hpp"

namespace tave {

using Json = nlohmann::ordered_json;

inline Json tensor_to_json(const Tensor& t) {
  Json j;
  j["order"] = t.order();
  j["dim"] = t.dim();
  j["symmetric"] = t.layout() == Layout::Symmetric;
  Json entries = Json::array();
  t.for_each_entry([&](const Index& idx, double v) {
    if (v == 0.0) return;
    Json e;
    Json ji = Json::array();
    for (int i : idx) ji.push_back(i + 1);
    e["idx"] = ji;
    e["value"] = v;
    entries.push_back(e);
  });
  j["entries"] = entries;
  return j;
}

inline Tensor tensor_from_json(const Json& j) {
  int order = j.at("order").get<int>();
  int dim = j.at("dim").get<int>();
  bool symmetric = j.at("symmetric").get<bool>();
  Tensor t = symmetric ? Tensor::symmetric(order, dim) : Tensor::dense(order, dim);
  std::set<Index> seen;
  for (const auto& e : j.at("entries")) {
    Index idx;
    for (const auto& i : e.at("idx")) {
      int v = i.get<int>();
      if (v < 1 || v > dim) throw std::invalid_argument("tensor json: idx out of range");
      idx.push_back(v - 1);
    }
    if (static_cast<int>(idx.size()) != order)
      throw std::invalid_argument("tensor json: idx arity mismatch");
    if (symmetric && !std::is_sorted(idx.begin(), idx.end()))
      throw std::invalid_argument("tensor json: symmetric idx must be sorted ascending");
    if (!seen.insert(idx).second)
      throw std::invalid_argument("tensor json: duplicate idx");
    t.set(idx, e.at("value").get<double>());
  }
  return t;
}

inline Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vec vec_from_json(const Json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& e : j) v[i++] = e.get<double>();
  return v;
}

struct InstanceFile {
  Tensor tensor;
  Vec b;
  std::optional<Vec> known_solution;
  double solution_tolerance = 1e-9;
  std::optional<std::uint64_t> seed;

  Json to_json() const {
    Json j;
    j["tensor"] = tensor_to_json(tensor);
    j["b"] = vec_to_json(b);
    if (known_solution) {
      j["known_solution"] = vec_to_json(*known_solution);
      j["solution_tolerance"] = solution_tolerance;
    }
    if (seed) j["seed"] = *seed;
    return j;
  }

  static InstanceFile from_json(const Json& j) {
    InstanceFile f{tensor_from_json(j.at("tensor")), vec_from_json(j.at("b"))};
    if (f.tensor.dim() != f.b.size())
      throw std::invalid_argument("instance json: tensor dim != length(b)");
    if (j.contains("known_solution")) {
      f.known_solution = vec_from_json(j.at("known_solution"));
      if (j.contains("solution_tolerance"))
        f.solution_tolerance = j.at("solution_tolerance").get<double>();
    }
    if (j.contains("seed")) f.seed = j.at("seed").get<std::uint64_t>();
    return f;
  }

  TaveProblem problem() const { return TaveProblem(tensor, b); }
};

inline const char* to_string(DirectionSource s) {
  return s == DirectionSource::Lm ? "lm" : "gradient-fallback";
}

inline Json report_to_json(const SolverReport& rep, const SolverConfig& cfg,
                           std::optional<std::uint64_t> seed = std::nullopt) {
  Json j;
  j["status"] = to_string(rep.status);
  j["iterations"] = rep.iterations;
  j["x_final"] = vec_to_json(rep.x_final);
  j["final_norm_H"] = rep.trace.back().norm_H;
  j["wall_time_sec"] = rep.wall_time_sec;
  Json c;
  c["epsilon"] = cfg.epsilon;
  c["rho_descent"] = cfg.rho_descent;
  c["p"] = cfg.p;
  c["beta"] = cfg.beta;
  c["max_iter"] = cfg.max_iter;
  c["max_backtracks"] = cfg.max_backtracks;
  c["inexact"] = cfg.inexact;
  c["jacobian"] =
      cfg.convention == JacobianConvention::TrueDerivative ? "true" : "paper";
  j["config"] = c;
  if (seed) j["seed"] = *seed;
  Json trace = Json::array();
  for (const auto& r : rep.trace) {
    Json t;
    t["k"] = r.k;
    t["norm_H"] = r.norm_H;
    t["norm_gradPsi"] = r.norm_gradPsi;
    t["step"] = r.step;
    t["source"] = to_string(r.source);
    t["r_norm"] = r.r_norm;
    if (r.x) t["x"] = vec_to_json(*r.x);
    trace.push_back(t);
  }
  j["trace"] = trace;
  return j;
}

inline void apply_config_json(SolverConfig& cfg, const Json& j) {
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("rho_descent")) cfg.rho_descent = j.at("rho_descent").get<double>();
  if (j.contains("p")) cfg.p = j.at("p").get<double>();
  if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
  if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
  if (j.contains("max_backtracks")) cfg.max_backtracks = j.at("max_backtracks").get<int>();
  if (j.contains("inexact")) cfg.inexact = j.at("inexact").get<bool>();
  if (j.contains("mu")) {
    double mu = j.at("mu").get<double>();
    cfg.mu = [mu](int) { return mu; };
  }
  if (j.contains("jacobian"))
    cfg.convention = j.at("jacobian").get<std::string>() == "paper"
                         ? JacobianConvention::PaperLiteral
                         : JacobianConvention::TrueDerivative;
}

// Fixed trace columns: k, norm_H, norm_gradPsi, step, source, r_norm.
inline std::string trace_to_csv(const SolverReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "k,norm_H,norm_gradPsi,step,source,r_norm\n";
  for (const auto& r : rep.trace)
    os << r.k << ',' << r.norm_H << ',' << r.norm_gradPsi << ',' << r.step << ','
       << to_string(r.source) << ',' << r.r_norm << '\n';
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace tave
