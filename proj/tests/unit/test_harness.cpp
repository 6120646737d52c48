#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nsac/harness.hpp"

using namespace nsac;

TEST(Probe, TimeWeight) {
  const ConsistencyProbe p = default_probe(2.0);
  EXPECT_DOUBLE_EQ(p.theta(0.0), 1.0);
  EXPECT_DOUBLE_EQ(p.theta(2.0), 0.0);
  EXPECT_DOUBLE_EQ(p.theta(1.0), 0.25);
  // int_0^T (1 - t/T)^2 = T/3.
  EXPECT_NEAR(p.theta_integral(0.0, 2.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.theta_integral(0.0, 1.0) + p.theta_integral(1.0, 2.0), 2.0 / 3.0, 1e-15);
}

TEST(Consistency, StationaryTrajectoryBalances) {
  Params par;
  const Scheme s(Discretization(Mesh::uniform_torus(4, 2)), par);
  const Trajectory t = s.run(s.initial_state(preset("constant", 1.0)), 0.5);
  const ConsistencyResiduals e = consistency_residuals(s, t, default_probe(0.5));
  EXPECT_LE(e.e1, 1e-10);
  EXPECT_LE(e.e2, 1e-10);
  EXPECT_LE(e.e3, 1e-10);
}

TEST(Consistency, EmptyProbeGivesZero) {
  Params par;
  const Scheme s(Discretization(Mesh::uniform_torus(4, 2)), par);
  const Trajectory t = s.run_steps(s.initial_state(preset("smooth")), 2);
  ConsistencyProbe p = default_probe(0.5);
  p.psi = nullptr;
  const ConsistencyResiduals e = consistency_residuals(s, t, p);
  EXPECT_EQ(e.e3, 0.0);
  EXPECT_GT(e.e1, 0.0);
}

TEST(Study, SingleMemberHasNoOrders) {
  Params par;
  par.final_time = 0.1;
  const ConvergenceTable t = reference_convergence_study("smooth", {4}, par);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_TRUE(t.complete);
  EXPECT_NEAR(t.rows[0].rel_energy, 0.0, 1e-14);
  EXPECT_TRUE(std::isnan(t.rows[0].order_e1));
  EXPECT_TRUE(std::isnan(t.rows[0].order_rel_energy));
}

TEST(Study, RejectsBadLists) {
  Params par;
  EXPECT_THROW(reference_convergence_study("smooth", {4, 4}, par), std::invalid_argument);
  EXPECT_THROW(reference_convergence_study("smooth", {8, 4}, par), std::invalid_argument);
  EXPECT_THROW(reference_convergence_study("smooth", {3, 8}, par), std::invalid_argument);
  EXPECT_THROW(reference_convergence_study("smooth", {}, par), std::invalid_argument);
  EXPECT_THROW(reference_convergence_study("unknown", {4}, par), std::invalid_argument);
}

TEST(Study, CsvHasOneLinePerRow) {
  ConvergenceTable t;
  t.rows.resize(2);
  std::ostringstream os;
  write_study_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,h,dt,rel_energy,e1,e2,e3,order_rel_energy,order_e1,order_e2,order_e3,runtime_s");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Orders, LeastSquaresOnAPowerLaw) {
  const std::vector<double> h{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 1.5));
  EXPECT_NEAR(least_squares_order(h, e), 1.5, 1e-12);
  EXPECT_THROW(least_squares_order({0.1}, {1.0}), std::invalid_argument);
}

TEST(Admissibility, Examples) {
  Params p;
  p.gamma = 2.0;
  p.epsilon = 1.0;
  EXPECT_TRUE(theorem_condition_check(p).admissible());

  p.gamma = 1.5;
  p.epsilon = 2.0;
  const AdmissibilityReport r = theorem_condition_check(p);
  EXPECT_FALSE(r.admissible());
  EXPECT_NE(r.summary().find("epsilon"), std::string::npos);
  p.epsilon = 1.0;  // inside (0, 4/3)
  EXPECT_TRUE(theorem_condition_check(p).admissible());

  p.gamma = 1.1;
  p.epsilon = 0.1;
  const AdmissibilityReport g = theorem_condition_check(p);
  EXPECT_FALSE(g.admissible());
  EXPECT_NE(g.summary().find("gamma"), std::string::npos);
}

TEST(Admissibility, CoercivityNeedsSmallEnoughH) {
  Params p;
  p.beta = 1.0;
  EXPECT_FALSE(theorem_condition_check(p, std::sqrt(2.0) / 2.0).admissible());
  EXPECT_TRUE(theorem_condition_check(p, 0.1).admissible());
  p.beta = 4.0;
  EXPECT_TRUE(theorem_condition_check(p, std::sqrt(2.0) / 2.0).admissible());
}

TEST(Admissibility, ViscosityAndPenalty) {
  Params p;
  p.lambda = 0.0;
  EXPECT_FALSE(theorem_condition_check(p).admissible());
  Params q;
  q.beta = -1.0;
  EXPECT_FALSE(theorem_condition_check(q).admissible());
}
