#pragma once

// Built-in checks of the published tables against the implementation.

#include "tave/ncp.hpp"
#include "tave/paper_data.hpp"

namespace tave {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline std::vector<CheckResult> verify_paper_tables() {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };
  std::ostringstream d;
  d.precision(6);

  // Table 5 -> Table 6: shift construction and the printed c.
  {
    auto [a, c] = build_shifted(paper::table5_B(), 0.01);
    Tensor ref = paper::table6_A();
    double max_delta = 0.0;
    ref.for_each_entry([&](const Index& idx, double v) {
      max_delta = std::max(max_delta, std::abs(a.at(idx) - v));
    });
    d.str("");
    d << "c=" << c << " max_entry_delta=" << max_delta;
    add("table5->6 c within 1e-3", std::abs(c - paper::table6_c) <= 1e-3, d.str());
    add("table5->6 entries within 1e-4", max_delta <= 1e-4, d.str());
  }

  // Table 7: each printed (x, b) pair solves the table6 instance to 0.05.
  {
    Tensor a = paper::table6_A();
    double worst = 0.0;
    for (const auto& row : paper::table7_rows()) {
      TaveProblem prob(a, row.b);
      worst = std::max(worst, residual(prob, row.x).lpNorm<Eigen::Infinity>());
    }
    d.str("");
    d << "worst_residual_inf=" << worst;
    add("table7 residuals within 0.05", worst <= 0.05, d.str());
  }

  // Table 8: ||H(x)|| at the three printed solutions.
  {
    TaveProblem prob(paper::table6_A(), paper::table8_b());
    double worst = 0.0;
    for (const Vec& x : paper::table8_solutions())
      worst = std::max(worst, eval_H(prob, x).norm());
    d.str("");
    d << "worst_norm_H=" << worst;
    add("table8 norm_H within 0.02", worst <= 0.02, d.str());
  }

  // Section 3 worked example: x* = (2,-2) solves A x^3 - |x|^3 = (8,8).
  {
    TaveProblem prob = paper::section3_problem();
    double rn = residual(prob, paper::section3_solution()).lpNorm<Eigen::Infinity>();
    d.str("");
    d << "residual_inf=" << rn;
    add("section3 exact solution", rn <= 1e-12, d.str());
  }

  // Table 6 structure: Z-tensor and certified strong-M shift.
  {
    Tensor a = paper::table6_A();
    StructureCertificate cert = certify_strong_m_shift(a);
    d.str("");
    d << "verdict=" << to_string(cert.verdict) << " c=" << cert.shift_c.value_or(-1)
      << " rho_upper=" << cert.rho_upper.value_or(-1);
    add("table6 strong-M shift certified",
        is_z_tensor(a) && cert.verdict == ShiftVerdict::StrongMShiftCertified, d.str());
  }

  return out;
}

}  // namespace tave
