// Acceptance gate. One line per criterion; exit status is nonzero if any
// criterion fails. Tolerances are fixed here and never read from outside.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dagp/certificates.hpp"
#include "dagp/experiment.hpp"
#include "dagp/run.hpp"
#include "oracles.hpp"

#ifndef DAGP_CONFIG_DIR
#error "DAGP_CONFIG_DIR must point at the shipped configs"
#endif

namespace {

using namespace dagp;

// ---- pinned tolerances ------------------------------------------------------

constexpr double kIncrementStop = 1e-9;       // 1: run until the state moves less than this
constexpr double kStoppingTol = 1e-5;         // 1: check_stopping_point tolerance
constexpr double kObjectiveTol = 1e-4;        // 1: |sum f_v(x_bar) - f*|
constexpr double kCrit1Seconds = 30.0;
constexpr double kBoundedFactor = 2.0;        // 2: final <= 2 x grid minimum
constexpr double kCrit2Seconds = 120.0;
constexpr double kConservationTol = 1e-10;    // 3: ||sum_v h_v|| <= tol (1 + ||H||)
constexpr double kZeroSumTol = 1e-12;         // 4
constexpr double kProjectionTol = 1e-10;      // 5: set property slack
constexpr double kFdRelTol = 1e-6;            // 5: finite-difference gradient error
constexpr double kDykstraTol = 1e-6;          // 5: Dykstra vs QP oracle
constexpr double kMinRSquared = 0.99;         // 6
constexpr double kFeasibilityTarget = 1e-6;   // 7: DAGP final feasibility gap
constexpr double kSeparation = 10.0;          // 7: DDPS / DAGP
constexpr double kMessagePassingTol = 1e-12;  // 8
constexpr double kHandAssembledTol = 1e-14;   // 9: literal decimals vs assembled products

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Worst ||sum_v h_v|| / (1 + ||H||) over every DAGP run in this binary.
struct ConservationMonitor {
  double worst = 0.0;
  std::size_t rounds = 0;
  std::size_t max_n = 0;

  void observe(const NodeMatrix& H, std::size_t n) {
    worst = std::max(worst, H.colwise().sum().norm() / (1.0 + H.norm()));
    ++rounds;
    max_n = std::max(max_n, n);
  }
  std::function<void(const Stepper&)> hook() {
    return [this](const Stepper& s) {
      if (const NodeMatrix* H = s.conserved()) observe(*H, s.round());
    };
  }
};

ConservationMonitor g_conservation;

HyperParams setup2_dagp() { return {{"mu", 0.04033}, {"rho", 0.2634}, {"alpha", 0.4146}}; }
HyperParams setup1_dagp() { return {{"mu", 0.02}, {"rho", 0.3}, {"alpha", 0.3}}; }

// ---- 1 ------------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const DagpParams prm{};
  double worst_res = 0.0, worst_obj = 0.0;
  std::size_t most_rounds = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = generate_synthetic_instance(4, 5, seed);
    const auto gp = build_gossip_pair(random_strongly_connected(5, 0.5, seed));
    const auto ref = centralized_solve(inst);
    auto st = dagp_init(inst, gp, prm, seed);
    g_conservation.observe(st.H, 0);
    double inc = std::numeric_limits<double>::infinity();
    while (inc >= kIncrementStop && st.n < 2'000'000) {
      auto next = dagp_step(st, inst, gp, prm);
      inc = std::max({(next.X - st.X).cwiseAbs().maxCoeff(), (next.G - st.G).cwiseAbs().maxCoeff(),
                      (next.H - st.H).cwiseAbs().maxCoeff()});
      st = std::move(next);
      if (st.n <= 10000) g_conservation.observe(st.H, st.n);
    }
    const auto rep = check_stopping_point(st, inst, gp, prm, kStoppingTol);
    const double obj = std::abs(inst.objective(mean_iterate(st.X)) - ref.f_star);
    out.pass = out.pass && inc < kIncrementStop && rep.passed && obj <= kObjectiveTol;
    worst_res = std::max(worst_res, rep.max_residual());
    worst_obj = std::max(worst_obj, obj);
    most_rounds = std::max(most_rounds, st.n);
  }
  const double secs = seconds_since(t0);
  out.pass = out.pass && secs < kCrit1Seconds;
  out.detail = "5 seeds, max residual " + fmt("%.2e", worst_res) + ", max |f-f*| " + fmt("%.2e", worst_obj) +
               ", up to " + std::to_string(most_rounds) + " rounds, " + fmt("%.1f", secs) + " s";
  return out;
}

// ---- 2 ------------------------------------------------------------------------

Outcome criterion2() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::size_t> grid{100, 1000, 10000};
  std::ostringstream detail;
  detail << "final/min over N grid:";
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto inst = generate_synthetic_instance(10, 20, seed);
    const auto gp = build_gossip_pair(random_strongly_connected(20, 0.8, seed));
    const auto ref = centralized_solve(inst);
    auto st = make_stepper("dagp", setup2_dagp(), inst, gp);
    RunOptions opt;
    opt.iterations = grid.back();
    opt.trace_every = 1000;
    opt.f_star = ref.f_star;
    opt.average_checkpoints = grid;
    opt.on_round = g_conservation.hook();
    const auto tr = run(*st, random_initial_iterates(20, 10, seed), inst, opt);

    std::vector<std::vector<double>> stats(3);
    for (const auto& snap : tr.snapshots) {
      const double N = static_cast<double>(snap.N);
      const Vector xbar = mean_iterate(snap.averages);
      double spread = 0.0;
      for (Eigen::Index v = 0; v < snap.averages.rows(); ++v) {
        spread = std::max(spread, (snap.averages.row(v).transpose() - xbar).squaredNorm());
      }
      const double fg = feasibility_gap(xbar, inst.sets, 5000, 1e-12).gap;
      stats[0].push_back(N * spread);
      stats[1].push_back(N * fg * fg);
      stats[2].push_back(std::sqrt(N) * std::abs(inst.local_objective_sum(snap.averages) - ref.f_star));
    }
    detail << " seed " << seed << " [";
    for (std::size_t k = 0; k < 3; ++k) {
      const double lo = *std::min_element(stats[k].begin(), stats[k].end());
      const double ratio = stats[k].back() / lo;
      out.pass = out.pass && stats[k].size() == grid.size() && std::isfinite(ratio) &&
                 stats[k].back() <= kBoundedFactor * lo;
      detail << (k ? " " : "") << fmt("%.3g", ratio);
    }
    detail << "]";
  }
  const double secs = seconds_since(t0);
  out.pass = out.pass && secs < kCrit2Seconds;
  detail << ", " << fmt("%.1f", secs) << " s";
  out.detail = detail.str();
  return out;
}

// ---- 3 ------------------------------------------------------------------------

Outcome criterion3() {
  Outcome out;
  std::ostringstream detail;
  detail << "grad_sum n=100 -> 5000:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = generate_synthetic_instance(20, 10, seed);
    const auto gp = build_gossip_pair(random_strongly_connected(10, 0.3, seed));
    auto st = make_stepper("dagp", setup1_dagp(), inst, gp);
    RunOptions opt;
    opt.iterations = 10000;
    opt.trace_every = 100;
    opt.on_round = g_conservation.hook();
    const auto tr = run(*st, random_initial_iterates(10, 20, seed), inst, opt);
    const double early = tr.records[1].grad_sum_norm;   // n = 100
    const double late = tr.records[50].grad_sum_norm;   // n = 5000
    out.pass = out.pass && tr.records[1].n == 100 && tr.records[50].n == 5000 && late < early;
    detail << " " << fmt("%.2e", early) << "->" << fmt("%.2e", late);
  }
  out.pass = out.pass && g_conservation.worst <= kConservationTol && g_conservation.max_n >= 10000;
  detail << "; conservation worst " << fmt("%.2e", g_conservation.worst) << " over "
         << g_conservation.rounds << " rounds";
  out.detail = detail.str();
  return out;
}

// ---- 4 ------------------------------------------------------------------------

Outcome criterion4() {
  Outcome out;
  int kernel_pass = 0;
  double worst_row = 0.0, worst_col = 0.0;
  const double probs[] = {0.1, 0.3, 0.5};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int M = 3 + static_cast<int>(seed % 28);
    const auto gp = build_gossip_pair(random_strongly_connected(M, probs[seed % 3], 1000 + seed));
    const double row = (gp.W * Vector::Ones(M)).cwiseAbs().maxCoeff();
    const double col = (Vector::Ones(M).transpose() * gp.Q).cwiseAbs().maxCoeff();
    const auto report = verify_kernel_conditions(gp);
    worst_row = std::max(worst_row, row);
    worst_col = std::max(worst_col, col);
    out.pass = out.pass && row <= kZeroSumTol && col <= kZeroSumTol && report.kernel_dim_W == 1;
    if (report.passed()) ++kernel_pass;
  }
  out.detail = "max |W1| " + fmt("%.1e", worst_row) + ", max |1'Q| " + fmt("%.1e", worst_col) +
               ", kernel-condition pass rate " + std::to_string(kernel_pass) + "/100 (recorded only)";
  return out;
}

// ---- 5 ------------------------------------------------------------------------

Outcome criterion5() {
  Outcome out;
  std::mt19937_64 rng(500);
  double worst_set = 0.0;
  for (int k = 0; k < 3; ++k) {
    worst_set = std::max(worst_set, oracle::set_property_violation(
                                        Halfspace(oracle::gaussian(rng, 6), oracle::gaussian(rng, 1)(0)), 510 + k));
  }
  Vector lo(4), hi(4);
  lo << -1, -2, 0, 3;
  hi << 1, -1, 0, 5;
  worst_set = std::max(worst_set, oracle::set_property_violation(Box(lo, hi), 520));
  worst_set = std::max(worst_set, oracle::set_property_violation(Ball(oracle::gaussian(rng, 5), 1.5), 530));
  worst_set = std::max(worst_set, oracle::set_property_violation(WholeSpace(4), 540));

  double worst_fd = 0.0;
  auto fd_check = [&](const SmoothConvexFunction& f, int points) {
    for (int k = 0; k < points; ++k) {
      const Vector x = oracle::gaussian(rng, f.dimension(), 2.0);
      worst_fd = std::max(worst_fd, oracle::relative_error(f.gradient(x), oracle::central_difference(f, x)));
    }
  };
  for (int k = 0; k < 10; ++k) fd_check(LogCoshFunction(oracle::gaussian(rng, 5), oracle::gaussian(rng, 1)(0)), 100);
  const auto desk = generate_logistic_instance(5, 10, 40, 1);
  for (const auto& f : desk.functions) fd_check(*f, 100);

  double worst_dyk = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = oracle::random_system(rng, 3 + trial % 4, 4);
    const Vector x = oracle::gaussian(rng, 4, 4.0);
    const Vector expected = oracle::qp_projection(sys, x);
    const auto r = dykstra_project(oracle::as_sets(sys), x, 20000, 1e-12);
    worst_dyk = std::max(worst_dyk, expected.size() == 4 ? (r.point - expected).norm()
                                                         : std::numeric_limits<double>::infinity());
  }
  out.pass = worst_set <= kProjectionTol && worst_fd <= kFdRelTol && worst_dyk <= kDykstraTol;
  out.detail = "set slack " + fmt("%.1e", worst_set) + ", FD rel err " + fmt("%.1e", worst_fd) +
               ", Dykstra vs QP " + fmt("%.1e", worst_dyk);
  return out;
}

// ---- 6 ------------------------------------------------------------------------

Outcome criterion6() {
  Outcome out;
  const auto inst = generate_logistic_instance(5, 10, 40, 1);
  const auto gp = build_gossip_pair(random_strongly_connected(5, 0.5, 1));
  const auto ref = centralized_solve(inst);
  const NodeMatrix x0 = random_initial_iterates(5, 10, 1);
  const double step = 0.01;
  std::ostringstream detail;
  for (const char* name : {"dagp", "pushpull", "addopt"}) {
    const HyperParams hp = std::string(name) == "dagp"
                               ? HyperParams{{"mu", step}, {"rho", 0.1}, {"alpha", 0.1}}
                               : HyperParams{{"step", step}};
    auto st = make_stepper(name, hp, inst, gp);
    RunOptions opt;
    opt.iterations = 500;
    opt.trace_every = 10;
    opt.f_star = ref.f_star;
    opt.on_round = g_conservation.hook();
    const auto fit = rate_fit(run(*st, x0, inst, opt), "optimality_gap", DecayModel::LinearLog);
    out.pass = out.pass && fit.slope < 0.0 && fit.r_squared > kMinRSquared;
    detail << name << " slope " << fmt("%.3g", fit.slope) << " R2 " << fmt("%.5f", fit.r_squared) << "; ";
  }
  out.detail = detail.str();
  out.detail.resize(out.detail.size() - 2);
  return out;
}

// ---- 7 ------------------------------------------------------------------------

Outcome criterion7() {
  Outcome out;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto inst = generate_synthetic_instance(10, 20, seed);
    const auto gp = build_gossip_pair(random_strongly_connected(20, 0.8, seed));
    const NodeMatrix x0 = random_initial_iterates(20, 10, seed);
    RunOptions opt;
    opt.iterations = 2000;
    opt.trace_every = 2000;
    opt.dykstra_iters = 5000;
    opt.dykstra_tol = 1e-12;
    opt.on_round = g_conservation.hook();
    auto dagp = make_stepper("dagp", setup2_dagp(), inst, gp);
    auto ddps = make_stepper("ddps", {{"c", 0.05}, {"eps", 0.01}}, inst, gp);
    const double a = run(*dagp, x0, inst, opt).records.back().feasibility_gap;
    const double b = run(*ddps, x0, inst, opt).records.back().feasibility_gap;
    out.pass = out.pass && a <= kFeasibilityTarget && b >= kSeparation * a;
    detail << (seed > 1 ? "; " : "") << "seed " << seed << " DAGP " << fmt("%.2e", a) << " DDPS "
           << fmt("%.2e", b);
  }
  out.detail = detail.str();
  return out;
}

// ---- 8 ------------------------------------------------------------------------

Outcome criterion8() {
  Outcome out;
  const auto inst = generate_synthetic_instance(4, 5, 8);
  const auto gp = build_gossip_pair(random_strongly_connected(5, 0.5, 8));
  const DagpParams prm{0.05, 0.3, 0.3};
  auto a = dagp_init(inst, gp, prm, std::uint64_t{8});
  auto b = a;
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    a = dagp_step(a, inst, gp, prm);
    b = dagp_step_message_passing(b, inst, gp, prm);
    worst = std::max({worst, (a.X - b.X).cwiseAbs().maxCoeff(), (a.G - b.G).cwiseAbs().maxCoeff(),
                      (a.H - b.H).cwiseAbs().maxCoeff()});
  }
  out.pass = worst <= kMessagePassingTol;

  const auto big = generate_synthetic_instance(10, 20, 1);
  const auto big_gp = build_gossip_pair(random_strongly_connected(20, 0.8, 1));
  const NodeMatrix x0 = random_initial_iterates(20, 10, 1);
  RunOptions opt;
  opt.iterations = 300;
  opt.trace_every = 10;
  opt.f_star = 0.0;
  int identical = 0;
  for (const char* name : {"dagp", "ddps", "addopt", "pushpull", "proj_dgd"}) {
    std::string csv[2];
    for (int k = 0; k < 2; ++k) {
      auto st = make_stepper(name, {}, big, big_gp, k == 0 ? 1 : 4);
      std::ostringstream os;
      write_trace_csv(os, run(*st, x0, big, opt));
      csv[k] = os.str();
    }
    if (csv[0] == csv[1]) ++identical;
  }
  out.pass = out.pass && identical == 5;
  out.detail = "message passing max diff " + fmt("%.1e", worst) + ", bitwise traces 1 vs 4 workers " +
               std::to_string(identical) + "/5 algorithms";
  return out;
}

// ---- 9 ------------------------------------------------------------------------

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

Outcome criterion9() {
  Outcome out;
  double worst = 0.0;
  {
    // 3-cycle with node i hearing node i-1; mu 0.1, rho 0.2, alpha 0.3, L 1, eta 0.5.
    const auto gp = build_gossip_pair(DirectedGraph(3, {{1, 0}, {2, 1}, {0, 2}}));
    const auto c = build_certificates(gp, 0.1, 0.2, 0.3, 1.0, 0.5);
    Matrix R(12, 12), S(12, 12), P = Matrix::Zero(12, 3);
    R << 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         -2, 0, 0, 1, 0, 1, 1, 0, 0, 0.3, 0, 0,
         0, -2, 0, 1, 1, 0, 0, 1, 0, 0, 0.3, 0,
         0, 0, -2, 0, 1, 1, 0, 0, 1, 0, 0, 0.3,
         2, 0, 0, -1, 0, -1, 0, 0, 0, 0.2, 0, 0.5,
         0, 2, 0, -1, -1, 0, 0, 0, 0, 0.5, 0.2, 0,
         0, 0, 2, 0, -1, -1, 0, 0, 0, 0, 0.5, 0.2;
    S << -0.05, 0.5, 0.5, -0.2, 0, -0.25, -0.05, 0, 0, 0, 0, 0,
         0.5, -0.05, 0.5, -0.25, -0.2, 0, 0, -0.05, 0, 0, 0, 0,
         0.5, 0.5, -0.05, 0, -0.25, -0.2, 0, 0, -0.05, 0, 0, 0,
         -0.2, -0.25, 0, -0.05, 0, 0, 0, 0, 0, 0, 0, 0,
         0, -0.2, -0.25, 0, -0.05, 0, 0, 0, 0, 0, 0, 0,
         -0.25, 0, -0.2, 0, 0, -0.05, 0, 0, 0, 0, 0, 0,
         -0.05, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, -0.05, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, -0.05, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0;
    P.topRows(3) = Matrix::Identity(3, 3);
    worst = std::max({worst, max_abs_diff(c.R, R), max_abs_diff(c.S, S), max_abs_diff(c.P, P)});
  }
  {
    // Single node: W = Q = 0; mu 0.5, rho 0.25, alpha 0.125, L 2, eta 0.75.
    const GossipPair gp{Matrix::Zero(1, 1), Matrix::Zero(1, 1), DirectedGraph(1)};
    const auto c = build_certificates(gp, 0.5, 0.25, 0.125, 2.0, 0.75);
    Matrix R(4, 4), S(4, 4), P(4, 1);
    R << 0, 0, 0, 0,
         1, 0, 0, 0,
         -0.5, 0.5, 1, 0.125,
         0.5, -0.5, 0, 0.875;
    S << 0.5, 0, -0.25, 0,
         0, -0.5, 0, 0,
         -0.25, 0, 0, 0,
         0, 0, 0, 0;
    P << 1, 0, 0, 0;
    worst = std::max({worst, max_abs_diff(c.R, R), max_abs_diff(c.S, S), max_abs_diff(c.P, P)});
  }
  out.pass = worst <= kHandAssembledTol;

  std::ostringstream detail;
  detail << "hand-assembled max diff " << fmt("%.1e", worst) << "; scans:";
  for (const char* name : {"setup1.cfg", "setup2.cfg", "logistic_desk.cfg"}) {
    bool ok = false;
    try {
      const auto cfg = load_config(std::string(DAGP_CONFIG_DIR) + "/" + name);
      const auto res = certify_experiment(cfg);
      const std::size_t per_scan =
          cfg.certify.beta_values.size() * cfg.certify.z_radii.size() * static_cast<std::size_t>(cfg.certify.z_phases);
      ok = res.scans.size() == cfg.certify.c_values.size();
      int singular = 0;
      for (const auto& scan : res.scans) {
        std::ostringstream csv;
        write_assumption5_csv(csv, scan);
        const auto text = csv.str();
        const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
        ok = ok && scan.points.size() == per_scan && lines == per_scan + 1 &&
             text.rfind("re_z,im_z,beta,C,min_eig_dist,singular_flag\n", 0) == 0 &&
             std::isfinite(scan.min_distance) && scan.passed == (scan.min_distance >= scan.epsilon);
        for (const auto& p : scan.points) ok = ok && (p.singular || (std::isfinite(p.min_eig_dist) && p.min_eig_dist >= 0));
        singular += scan.singular_count;
      }
      detail << " " << name << (ok ? " ok" : " MALFORMED") << " (" << singular << " singular pts)";
    } catch (const std::exception& e) {
      detail << " " << name << " error: " << e.what();
    }
    out.pass = out.pass && ok;
  }
  out.detail = detail.str();
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, Outcome (*)()>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
