#include <cmath>
#include <limits>
#include <memory>

#include <gtest/gtest.h>

#include "dagp/baselines.hpp"
#include "dagp/metrics.hpp"
#include "dagp/reference.hpp"
#include "dagp/run.hpp"

namespace dagp {
namespace {

ProblemInstance unconstrained_quadratics(int M, int m, std::uint64_t seed) {
  ProblemInstance inst;
  inst.dimension = m;
  const NodeMatrix centers = random_initial_iterates(M, m, seed);
  for (int v = 0; v < M; ++v) {
    inst.functions.push_back(std::make_shared<QuadraticFunction>(centers.row(v).transpose(), 1.0 + v));
    inst.sets.push_back(std::make_shared<WholeSpace>(m));
  }
  return inst;
}

TEST(DiminishingStep, Values) {
  EXPECT_EQ(diminishing_step(0.5, 0), 0.5);
  EXPECT_EQ(diminishing_step(0.5, 3), 0.25);
}

TEST(ProjDgd, SingleNodeMatchesScalarSimulation) {
  ProblemInstance inst;
  inst.dimension = 1;
  inst.functions.push_back(std::make_shared<QuadraticFunction>(Vector::Zero(1), 1.0));
  inst.sets.push_back(std::make_shared<WholeSpace>(1));
  const auto gp = build_gossip_pair(DirectedGraph(1));
  NodeMatrix x0(1, 1);
  x0 << 3.0;
  auto st = proj_dgd_init(inst, x0);
  double x = 3.0;
  const ProjDgdParams prm{0.5};
  for (int n = 0; n < 500; ++n) {
    st = proj_dgd_step(st, inst, gp, prm);
    x -= prm.c / std::sqrt(n + 1.0) * x;
    ASSERT_NEAR(st.X(0, 0), x, 1e-14);
  }
  EXPECT_LE(std::abs(st.X(0, 0)), 1e-8);
}

TEST(Ddps, SurplusConservesTotalMassWithoutGradients) {
  ProblemInstance inst;
  inst.dimension = 2;
  for (int v = 0; v < 6; ++v) {
    inst.functions.push_back(std::make_shared<QuadraticFunction>(Vector::Zero(2), 0.0));
    inst.sets.push_back(std::make_shared<WholeSpace>(2));
  }
  const auto gp = build_gossip_pair(random_strongly_connected(6, 0.3, 4));
  auto st = ddps_init(inst, random_initial_iterates(6, 2, 4));
  const Vector mass = (st.X + st.S).colwise().sum().transpose();
  for (int n = 0; n < 3000; ++n) {
    st = ddps_step(st, inst, gp, DdpsParams{});
    ASSERT_LE(((st.X + st.S).colwise().sum().transpose() - mass).norm(), 1e-10);
  }
  // The surplus lets the iterates agree on the average even though A is only row stochastic.
  EXPECT_LE(consensus_error(st.X), 1e-12);
  EXPECT_LE((mean_iterate(st.X) - mass / 6.0).norm(), 1e-8);
}

TEST(Ddps, IteratesStayInLocalSets) {
  const auto inst = generate_synthetic_instance(10, 20, 1);
  const auto gp = build_gossip_pair(random_strongly_connected(20, 0.3, 1));
  auto st = ddps_init(inst, random_initial_iterates(20, 10, 1));
  for (int n = 0; n < 50; ++n) {
    st = ddps_step(st, inst, gp, DdpsParams{});
    for (int v = 0; v < 20; ++v) ASSERT_LE(inst.sets[v]->distance(st.X.row(v).transpose()), 1e-9);
  }
}

TEST(Ddps, FeasibilityGapStaysAboveDagpOnSetupTwo) {
  const auto inst = generate_synthetic_instance(10, 20, 1);
  const auto gp = build_gossip_pair(random_strongly_connected(20, 0.8, 1));
  const NodeMatrix x0 = random_initial_iterates(20, 10, 1);
  RunOptions opt;
  opt.iterations = 2000;
  opt.trace_every = 100;
  auto ddps = make_stepper("ddps", {{"c", 0.05}, {"eps", 0.01}}, inst, gp);
  auto dagp = make_stepper("dagp", {{"mu", 0.04033}, {"rho", 0.2634}, {"alpha", 0.4146}}, inst, gp);
  const auto a = run(*ddps, x0, inst, opt);
  const auto b = run(*dagp, x0, inst, opt);
  EXPECT_GT(a.records.back().feasibility_gap, 10 * b.records.back().feasibility_gap);
  // Stagnation: the last quarter barely moves.
  const double late = a.records[15].feasibility_gap;
  EXPECT_GT(a.records.back().feasibility_gap, 0.5 * late);
}

TEST(AddOpt, PushSumWeightsAndTrackerInvariant) {
  const auto inst = unconstrained_quadratics(7, 3, 2);
  const auto gp = build_gossip_pair(random_strongly_connected(7, 0.3, 2));
  auto st = addopt_init(inst, random_initial_iterates(7, 3, 2));
  for (int n = 0; n < 200; ++n) {
    st = addopt_step(st, inst, gp, AddOptParams{0.02});
    ASSERT_NEAR(st.y.sum(), 7.0, 1e-10);
    ASSERT_GT(st.y.minCoeff(), 0.0);
    const Vector tracked = st.W.colwise().sum().transpose();
    const Vector actual = local_gradients(inst, st.Z).colwise().sum().transpose();
    ASSERT_LE((tracked - actual).norm(), 1e-10 * (1 + actual.norm()));
  }
}

TEST(PushPull, TrackerInvariant) {
  const auto inst = unconstrained_quadratics(7, 3, 3);
  const auto gp = build_gossip_pair(random_strongly_connected(7, 0.3, 3));
  auto st = pushpull_init(inst, random_initial_iterates(7, 3, 3));
  for (int n = 0; n < 200; ++n) {
    st = pushpull_step(st, inst, gp, PushPullParams{0.02});
    const Vector tracked = st.Y.colwise().sum().transpose();
    const Vector actual = st.grad.colwise().sum().transpose();
    ASSERT_LE((tracked - actual).norm(), 1e-10 * (1 + actual.norm()));
  }
}

TEST(UnconstrainedBaselines, ReachQuadraticOptimum) {
  // Optimum of sum_v (s_v / 2) ||x - c_v||^2 is the s-weighted mean of the centers.
  const int M = 7, m = 3;
  const auto inst = unconstrained_quadratics(M, m, 5);
  const auto gp = build_gossip_pair(random_strongly_connected(M, 0.3, 5));
  Vector num = Vector::Zero(m);
  double den = 0.0;
  for (int v = 0; v < M; ++v) {
    const auto& q = dynamic_cast<const QuadraticFunction&>(*inst.functions[v]);
    num += q.scale() * q.center();
    den += q.scale();
  }
  const Vector optimum = num / den;
  for (const char* name : {"addopt", "pushpull"}) {
    auto st = make_stepper(name, {{"step", 0.02}}, inst, gp);
    st->reset(random_initial_iterates(M, m, 5));
    for (int n = 0; n < 5000; ++n) st->step();
    for (int v = 0; v < M; ++v) {
      EXPECT_LE((st->iterates().row(v).transpose() - optimum).norm(), 1e-8) << name;
    }
  }
}

TEST(PushPull, LinearDecayOnLogisticDesk) {
  const auto inst = generate_logistic_instance(5, 10, 40, 1);
  const auto gp = build_gossip_pair(random_strongly_connected(5, 0.5, 1));
  const auto ref = centralized_solve(inst);
  auto st = make_stepper("pushpull", {{"step", 0.01}}, inst, gp);
  RunOptions opt;
  opt.iterations = 500;
  opt.trace_every = 10;
  opt.f_star = ref.f_star;
  const auto fit = rate_fit(run(*st, random_initial_iterates(5, 10, 1), inst, opt), "optimality_gap",
                            DecayModel::LinearLog);
  EXPECT_LT(fit.slope, 0.0);
  EXPECT_GT(fit.r_squared, 0.99);
}

TEST(Baselines, NonFiniteAborts) {
  const auto inst = generate_synthetic_instance(3, 4, 1);
  const auto gp = build_gossip_pair(random_strongly_connected(4, 0.5, 1));
  NodeMatrix bad = random_initial_iterates(4, 3, 1);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  for (const char* name : {"ddps", "addopt", "pushpull", "proj_dgd"}) {
    auto st = make_stepper(name, {}, inst, gp);
    st->reset(bad);
    EXPECT_THROW(st->step(), NonFiniteError) << name;
  }
}

TEST(Baselines, WorkerCountDoesNotChangeBits) {
  const auto inst = generate_synthetic_instance(6, 8, 2);
  const auto gp = build_gossip_pair(random_strongly_connected(8, 0.3, 2));
  const NodeMatrix x0 = random_initial_iterates(8, 6, 2);
  for (const char* name : {"ddps", "addopt", "pushpull", "proj_dgd"}) {
    auto a = make_stepper(name, {}, inst, gp, 1);
    auto b = make_stepper(name, {}, inst, gp, 4);
    a->reset(x0);
    b->reset(x0);
    for (int n = 0; n < 50; ++n) {
      a->step();
      b->step();
    }
    EXPECT_EQ(a->iterates(), b->iterates()) << name;
  }
}

}  // namespace
}  // namespace dagp
