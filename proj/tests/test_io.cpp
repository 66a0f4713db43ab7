#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "tave/experiments.hpp"
#include "tave/io.hpp"
#include "tave/paper_data.hpp"

using namespace tave;

TEST_CASE("tensor json round-trip") {
  SUBCASE("symmetric") {
    Tensor t = paper::table5_B();
    Json j = tensor_to_json(t);
    CHECK(j["order"] == 4);
    CHECK(j["dim"] == 4);
    CHECK(j["symmetric"] == true);
    CHECK(j["entries"].size() == 35);
    Tensor back = tensor_from_json(j);
    CHECK(back == t);
  }
  SUBCASE("dense") {
    Tensor t = paper::example21_problem().A;
    Json j = tensor_to_json(t);
    CHECK(j["symmetric"] == false);
    // indices are 1-based on the wire
    CHECK(j["entries"][0]["idx"] == Json::array({1, 1, 1, 1}));
    Tensor back = tensor_from_json(j);
    CHECK(back == t);
  }
}

TEST_CASE("tensor json validation") {
  Json j = tensor_to_json(paper::table5_B());
  SUBCASE("unsorted symmetric idx") {
    j["entries"][0]["idx"] = Json::array({2, 1, 1, 1});
    CHECK_THROWS(tensor_from_json(j));
  }
  SUBCASE("duplicate idx") {
    j["entries"][1]["idx"] = j["entries"][0]["idx"];
    CHECK_THROWS(tensor_from_json(j));
  }
  SUBCASE("idx out of range") {
    j["entries"][0]["idx"] = Json::array({1, 1, 1, 5});
    CHECK_THROWS(tensor_from_json(j));
  }
  SUBCASE("idx arity mismatch") {
    j["entries"][0]["idx"] = Json::array({1, 1, 1});
    CHECK_THROWS(tensor_from_json(j));
  }
}

TEST_CASE("vector json round-trip") {
  Vec v(3);
  v << 1.5, -2.25, 0.0;
  Vec back = vec_from_json(vec_to_json(v));
  CHECK((back - v).norm() == 0.0);
}

TEST_CASE("instance file round-trip") {
  InstanceFile inst = generate_instance(GenKind::ShiftedM, 4, 3, 12345);
  Json j = inst.to_json();
  InstanceFile back = InstanceFile::from_json(j);
  CHECK(back.tensor == inst.tensor);
  CHECK((back.b - inst.b).norm() == 0.0);
  REQUIRE(back.known_solution.has_value());
  CHECK((*back.known_solution - *inst.known_solution).norm() == 0.0);
  CHECK(back.solution_tolerance == inst.solution_tolerance);
  CHECK(back.seed == inst.seed);
  // byte-identical re-serialization
  CHECK(back.to_json().dump() == j.dump());
}

TEST_CASE("same seed gives byte-identical instances") {
  for (GenKind kind : {GenKind::SymNonneg, GenKind::ShiftedM, GenKind::CdConstruct}) {
    Json a = generate_instance(kind, 4, 3, 777).to_json();
    Json b = generate_instance(kind, 4, 3, 777).to_json();
    CHECK(a.dump() == b.dump());
    Json c = generate_instance(kind, 4, 3, 778).to_json();
    CHECK(a.dump() != c.dump());
  }
}

TEST_CASE("rng streams are independent and deterministic") {
  Rng a(999, stream::tensor);
  Rng b(999, stream::tensor);
  Rng c(999, stream::starts);
  bool same = true, diff = false;
  for (int i = 0; i < 100; ++i) {
    double ua = a.uniform();
    same = same && ua == b.uniform();
    diff = diff || ua != c.uniform();
  }
  CHECK(same);
  CHECK(diff);
  Rng d(999);
  for (int i = 0; i < 1000; ++i) {
    double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("report json and csv trace") {
  Vec x0(2);
  x0 << 1.8, -1.8;
  SolverConfig cfg;
  SolverReport rep = solve(paper::section3_problem(), x0, cfg);
  Json j = report_to_json(rep, cfg, 42);
  CHECK(j["status"] == "converged");
  CHECK(j["iterations"] == rep.iterations);
  CHECK(j["seed"] == 42);
  CHECK(j["trace"].size() == rep.trace.size());
  CHECK(j["config"]["jacobian"] == "true");

  std::string csv = trace_to_csv(rep);
  CHECK(csv.rfind("k,norm_H,norm_gradPsi,step,source,r_norm\n", 0) == 0);
  std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == rep.trace.size() + 1);
}

TEST_CASE("apply_config_json") {
  SolverConfig cfg;
  Json j = {{"epsilon", 1e-8}, {"max_iter", 50},     {"inexact", true},
            {"beta", 0.01},    {"jacobian", "paper"}, {"mu", 0.7}};
  apply_config_json(cfg, j);
  CHECK(cfg.epsilon == 1e-8);
  CHECK(cfg.max_iter == 50);
  CHECK(cfg.inexact);
  CHECK(cfg.beta == 0.01);
  CHECK(cfg.convention == JacobianConvention::PaperLiteral);
  CHECK(cfg.mu(0) == 0.7);
  CHECK(cfg.mu(100) == 0.7);
}

TEST_CASE("file round-trip") {
  auto path = std::filesystem::temp_directory_path() / "tave_io_test.json";
  std::string content = generate_instance(GenKind::SymNonneg, 4, 2, 5).to_json().dump(2);
  write_file(path.string(), content);
  CHECK(read_file(path.string()) == content);
  std::filesystem::remove(path);
  CHECK_THROWS(read_file(path.string()));
}
