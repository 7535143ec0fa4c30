// Acceptance suite: drives every bundled scenario and checks the headline
// reproduction targets, model saturations, oracle agreements, invariant
// batteries, and one-sided bounds at their pinned tolerances. One line per
// criterion; exit status 0 only when every criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "finsler/families.hpp"
#include "finsler/jacobi.hpp"
#include "finsler/scenario.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s  (%s)\n", pass ? "PASS" : "FAIL", number, label.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

const ComparisonReport* find_check(const ScenarioResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.check == name) return &c;
  return nullptr;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  RunOptions opts;
  opts.out_dir = "acceptance-out";

  std::map<std::string, ScenarioResult> results;
  std::map<std::string, double> runtimes;
  for (const auto& [id, desc] : bundled_scenario_index()) {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = parse_scenario(bundled_scenario_text(id));
    results[id] = run_scenario(sc, opts);
    runtimes[id] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("scenario %-18s %s  (%.1fs)\n", id.c_str(),
                results[id].pass ? "pass" : "FAIL", runtimes[id]);
  }

  // 1: product-family reproduction across the one-form sweep
  {
    const ScenarioResult& sweep = results.at("example-sweep");
    bool ok = true;
    std::string detail;
    for (const std::string eps : {"0.0", "0.3", "0.6", "0.9"}) {
      const auto* mu = find_check(sweep, "sweep_mu_ht_eps_" + eps);
      const auto* fl = find_check(sweep, "sweep_flag_eps_" + eps);
      const auto* ln = find_check(sweep, "sweep_length_eps_" + eps);
      ok = ok && mu && mu->pass && std::abs(mu->measured - 8 * M_PI * M_PI) <=
                                       1e-2 * 8 * M_PI * M_PI;
      ok = ok && fl && fl->measured >= -1e-6;
      ok = ok && ln && ln->pass;
      if (mu && eps == "0.9") detail = "mu_HT(eps=0.9) = " + fmt(mu->measured);
    }
    const double per_eps = runtimes.at("example-sweep") / 4.0;
    ok = ok && per_eps < 120.0;
    criterion(1, "product family reproduction over the sweep", ok,
              detail + ", " + fmt(per_eps) + "s per eps");
  }

  // 2: model saturation on the round sphere (point and great circle)
  {
    const ScenarioResult& pt = results.at("sphere-point");
    const ScenarioResult& eq = results.at("sphere-equator");
    const auto* path = find_check(pt, "jacobi_model_path");
    const auto* focal = find_check(pt, "jacobi_model_focal");
    const auto* v_bh = find_check(pt, "thm_1_1_BH");
    const auto* v2 = find_check(eq, "thm_1_1_BH");
    const auto* len = find_check(eq, "cor_1_2_BH");
    bool ok = path && path->pass && path->measured <= 1e-6;
    ok = ok && focal && std::abs(focal->measured - M_PI) <= 1e-6;
    ok = ok && v_bh && v_bh->pass && std::abs(v_bh->margin) <= 1e-3 * v_bh->bound;
    ok = ok && v2 && v2->pass && std::abs(v2->margin) <= 1e-3 * v2->bound;
    ok = ok && len && len->pass && std::abs(len->bound - 2 * M_PI) <= 1e-3 * 2 * M_PI;
    criterion(2, "sphere saturation: det path, focal value, volume and length equalities", ok,
              std::string("focal = ") + (focal ? fmt(focal->measured) : "?") +
                  ", length bound = " + (len ? fmt(len->bound) : "?"));
  }

  // 3: matrix columns against central-difference geodesic variations
  {
    const double tmax = 1.2, h = 1e-4;
    const int nodes = 25;
    double worst = 0;
    auto compare = [&](const MetricSpec& spec, const SubmanifoldSpec& sub, const VectorXd& u,
                       const VectorXd& theta, int comp, bool vary_theta) {
      ConormalFrame fr = conormal_sphere_point(spec, sub, u, theta);
      JacobiSolution sol = solve_jacobi(spec, fr, tmax, nodes);
      MatrixXd fd =
          testing::variation_fd(spec, sub, u, theta, comp, vary_theta, tmax, nodes, h);
      const int col = vary_theta ? sub.dim() + comp : comp;
      for (int j = 0; j < nodes; ++j) {
        VectorXd c = sol.E[static_cast<size_t>(j)] * sol.A[static_cast<size_t>(j)].col(col);
        worst = std::max(worst, (c - fd.col(j)).cwiseAbs().maxCoeff());
      }
    };
    VectorXd u0(0);
    VectorXd th1(1);
    th1 << 1.1;
    auto flat = make_flat_randers(Eigen::Vector2d(0.35, -0.15));
    compare(flat.spec, SubmanifoldSpec::point_at(Eigen::Vector2d(0.2, 0.1)), u0, th1, 0, true);
    auto sphere = make_round_sphere();
    SubmanifoldSpec circle =
        build_submanifold_family("distance-circle", {{"r0", 0.8}, {"theta0", 0.0}}, 2);
    VectorXd uc(1);
    uc << 0.4;
    VectorXd th0(1);
    th0 << 0.0;
    compare(sphere.spec, circle, uc, th0, 0, false);
    auto rnd = make_sphere_randers(0.2);
    VectorXd th2(1);
    th2 << 2.0;
    compare(rnd.spec, SubmanifoldSpec::point_at(Eigen::Vector2d(1.2, 0.5)), u0, th2, 0, true);
    criterion(3, "transverse matrix columns match finite-difference variations", worst < 1e-4,
              "sup deviation " + fmt(worst) + " over flat/sphere/perturbed scenarios");
  }

  // 4: invariant batteries across every bundled scenario
  {
    bool ok = true;
    int count = 0;
    std::string worst_name = "none";
    double worst_ratio = 0;
    for (const auto& [id, res] : results)
      for (const auto& inv : res.invariants) {
        ++count;
        ok = ok && inv.pass;
        const double ratio = inv.max_violation / inv.tolerance;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst_name = id + "." + inv.name;
        }
      }
    ok = ok && count > 0;
    criterion(4, "property batteries at pinned tolerances", ok,
              std::to_string(count) + " battery results, tightest headroom at " + worst_name);
  }

  // 5: appendix sample batteries with zero violations beyond tolerance
  {
    bool ok = true;
    int seen = 0;
    for (const auto& [id, res] : results)
      for (const auto& c : res.checks)
        if (c.check.rfind("prop_8_", 0) == 0) {
          ++seen;
          ok = ok && c.pass;
        }
    ok = ok && seen >= 8;
    criterion(5, "appendix inequalities on sampled batteries", ok,
              std::to_string(seen) + " appendix checks across scenarios");
  }

  // 6: comparison bound on the non-Riemannian perturbed sphere
  {
    const ScenarioResult& rs = results.at("randers-sphere");
    const auto* det = find_check(rs, "thm_4_8_det");
    const auto* foc = find_check(rs, "thm_4_8_focal");
    bool ok = det && det->pass && foc && foc->pass;
    criterion(6, "determinant comparison with verified curvature hypothesis", ok,
              det ? ("max excess " + fmt(det->measured) + ", focal margin " +
                     fmt(foc ? foc->margin : -1.0))
                  : "check missing");
  }

  // 7: every evaluated bound holds with nonnegative margin, margins archived
  {
    bool ok = true;
    int bounds_seen = 0;
    double min_margin = kInf;
    std::string tightest;
    for (const auto& [id, res] : results) {
      ok = ok && res.pass;
      for (const auto& c : res.checks) {
        ++bounds_seen;
        ok = ok && c.pass;
        if (c.margin < min_margin) {
          min_margin = c.margin;
          tightest = id + "." + c.check;
        }
      }
    }
    criterion(7, "all scenario inequalities hold; margins archived in reports", ok,
              std::to_string(bounds_seen) + " checks, tightest margin " + fmt(min_margin) +
                  " at " + tightest);
  }

  std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
