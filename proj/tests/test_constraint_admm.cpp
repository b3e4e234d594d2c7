#include <doctest.h>

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "anchorfair/admm.hpp"
#include "anchorfair/core.hpp"
#include "anchorfair/metrics.hpp"
#include "oracles.hpp"

using namespace anchorfair;

namespace {

Dataset dataset_with_groups(const Eigen::MatrixXd& features,
                            const std::vector<long long>& groups) {
  return validate_dataset(features, groups);
}

AnchorLabeling make_labeling(const std::vector<int>& labels, int k,
                             const std::vector<int>& anchor_groups,
                             int num_groups) {
  AnchorLabeling labeling;
  labeling.labels = labels;
  labeling.k = k;
  labeling.num_groups = num_groups;
  const int m = static_cast<int>(labels.size());
  labeling.L = Eigen::MatrixXd::Zero(m, k);
  labeling.cluster_sizes.assign(k, 0);
  labeling.joint_counts = Eigen::MatrixXi::Zero(k, num_groups);
  for (int i = 0; i < m; ++i) {
    labeling.L(i, labels[i]) = 1.0;
    labeling.cluster_sizes[labels[i]]++;
    labeling.joint_counts(labels[i], anchor_groups[i])++;
  }
  return labeling;
}

AnchorSet anchors_from(const Dataset& ds, const std::vector<int>& indices) {
  AnchorSet anchors;
  anchors.indices = indices;
  anchors.H.resize(ds.d(), static_cast<Eigen::Index>(indices.size()));
  for (size_t j = 0; j < indices.size(); ++j) {
    anchors.H.col(static_cast<Eigen::Index>(j)) = ds.features.col(indices[j]);
    anchors.anchor_groups.push_back(ds.groups[indices[j]]);
  }
  anchors.num_groups = ds.num_groups;
  return anchors;
}

// two 1-d blobs with alternating groups; sample i sits near -1 or +1
Dataset blob_dataset(int n, std::mt19937_64& gen) {
  Eigen::MatrixXd features(2, n);
  std::vector<long long> groups(n);
  for (int i = 0; i < n; ++i) {
    const double center = i < n / 2 ? -2.0 : 2.0;
    features(0, i) = center + 0.4 * oracle::gauss(gen);
    features(1, i) = 0.4 * oracle::gauss(gen);
    groups[i] = i % 2;
  }
  return validate_dataset(features, groups);
}

Eigen::MatrixXd block_sums(const Eigen::MatrixXd& E, const ConstraintTable& table) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(table.k, table.num_groups);
  for (int l = 0; l < table.k; ++l) {
    for (int r = 0; r < table.num_groups; ++r) {
      for (int j : table.anchor_blocks[l]) {
        for (int i : table.sample_blocks[r]) sums(l, r) += E(j, i);
      }
    }
  }
  return sums;
}

}  // namespace

TEST_CASE("index_blocks groups positions by value") {
  const auto blocks = index_blocks({1, 0, 1, 2, 0}, 3);
  CHECK(blocks[0] == std::vector<int>{1, 4});
  CHECK(blocks[1] == std::vector<int>{0, 2});
  CHECK(blocks[2] == std::vector<int>{3});
  CHECK_THROWS_AS(index_blocks({0, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(index_blocks({0, -1}, 3), std::invalid_argument);
}

TEST_CASE("targets scale anchor shares to sample counts") {
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(1, 8);

  SUBCASE("even split: every block carries two samples") {
    const Dataset ds =
        dataset_with_groups(features, {0, 0, 0, 0, 1, 1, 1, 1});
    const AnchorLabeling labeling = make_labeling({0, 1, 0, 1}, 2, {0, 0, 1, 1}, 2);
    const ConstraintTable table = build_constraint_table(labeling, ds);
    Eigen::MatrixXd expected(2, 2);
    expected << 2, 2,
                2, 2;
    CHECK(table.targets == expected);
    CHECK(table.sample_blocks[0] == std::vector<int>{0, 1, 2, 3});
    CHECK(table.anchor_blocks[1] == std::vector<int>{1, 3});
  }

  SUBCASE("group-aligned clusters inherit whole group populations") {
    const Dataset ds =
        dataset_with_groups(features, {0, 0, 0, 0, 0, 1, 1, 1});
    const AnchorLabeling labeling = make_labeling({0, 0, 1, 1}, 2, {0, 0, 1, 1}, 2);
    const ConstraintTable table = build_constraint_table(labeling, ds);
    Eigen::MatrixXd expected(2, 2);
    expected << 5, 0,
                0, 3;
    CHECK(table.targets == expected);
  }

  SUBCASE("anchor count equal to sample count reproduces the joint counts") {
    Eigen::MatrixXd seven = Eigen::MatrixXd::Zero(1, 7);
    const Dataset ds = dataset_with_groups(seven, {0, 0, 0, 0, 0, 1, 1});
    const AnchorLabeling labeling =
        make_labeling({0, 0, 0, 1, 1, 0, 1}, 2, {0, 0, 0, 0, 0, 1, 1}, 2);
    const ConstraintTable table = build_constraint_table(labeling, ds);
    Eigen::MatrixXd expected(2, 2);
    expected << 3, 1,
                2, 1;
    CHECK(table.targets == expected);
  }
}

TEST_CASE("per-group target sums always equal the group populations") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int t = 2 + static_cast<int>(gen() % 2);
    const int k = 2 + static_cast<int>(gen() % 3);
    const int n = 30 + static_cast<int>(gen() % 50);
    const int m = k * t + static_cast<int>(gen() % 6);

    Eigen::MatrixXd features = Eigen::MatrixXd::Zero(1, n);
    std::vector<long long> groups(n);
    for (int i = 0; i < n; ++i) groups[i] = i < t ? i : static_cast<long long>(gen() % t);
    const Dataset ds = dataset_with_groups(features, groups);

    std::vector<int> labels(m), anchor_groups(m);
    for (int j = 0; j < m; ++j) {
      labels[j] = j < k ? j : static_cast<int>(gen() % k);
      anchor_groups[j] = j < t ? j : static_cast<int>(gen() % t);
    }
    const AnchorLabeling labeling = make_labeling(labels, k, anchor_groups, t);
    const ConstraintTable table = build_constraint_table(labeling, ds);

    const GroupStats stats = group_stats(ds);
    for (int r = 0; r < t; ++r) {
      CHECK(table.targets.col(r).sum() ==
            doctest::Approx(stats.sizes[r]).epsilon(1e-12));
    }
  }
}

TEST_CASE("a populated group with no anchors is infeasible") {
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(1, 6);
  const Dataset ds = dataset_with_groups(features, {0, 0, 0, 0, 1, 1});
  const AnchorLabeling labeling = make_labeling({0, 1, 0}, 2, {0, 0, 0}, 2);
  CHECK_THROWS_AS(build_constraint_table(labeling, ds), std::runtime_error);
}

TEST_CASE("group count mismatch between labeling and data is rejected") {
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(1, 4);
  const Dataset ds = dataset_with_groups(features, {0, 1, 0, 1});
  const AnchorLabeling labeling = make_labeling({0, 1}, 2, {0, 0}, 1);
  CHECK_THROWS_AS(build_constraint_table(labeling, ds), std::invalid_argument);
}

TEST_CASE("projection shifts a single block uniformly") {
  ConstraintTable table;
  table.k = 1;
  table.num_groups = 1;
  table.anchor_blocks = {{0, 1}};
  table.sample_blocks = {{0, 1}};
  table.targets = Eigen::MatrixXd::Constant(1, 1, 2.0);

  const Eigen::MatrixXd E = project_block_sums(Eigen::MatrixXd::Ones(2, 2), table);
  CHECK(E == Eigen::MatrixXd::Constant(2, 2, 0.5));
}

TEST_CASE("projection is idempotent and matches the normal-equations oracle") {
  std::mt19937_64 gen(29);
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(1, 8);
  const Dataset ds = dataset_with_groups(features, {0, 0, 0, 0, 0, 1, 1, 1});
  const AnchorLabeling labeling = make_labeling({0, 0, 1, 1}, 2, {0, 0, 1, 1}, 2);
  const ConstraintTable table = build_constraint_table(labeling, ds);

  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd R(4, 8);
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 8; ++i) R(j, i) = oracle::gauss(gen);
    }
    const Eigen::MatrixXd E = project_block_sums(R, table);
    const Eigen::MatrixXd reference = oracle::project_block_sums_dense(R, table);
    CHECK((E - reference).lpNorm<Eigen::Infinity>() < 1e-9);

    const Eigen::MatrixXd sums = block_sums(E, table);
    for (int l = 0; l < 2; ++l) {
      for (int r = 0; r < 2; ++r) {
        CHECK(sums(l, r) == doctest::Approx(table.targets(l, r)).epsilon(1e-9));
      }
    }

    const Eigen::MatrixXd twice = project_block_sums(E, table);
    CHECK((twice - E).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("projection never moves a point closer than the oracle") {
  // both are exact projections, so distances must agree as well
  std::mt19937_64 gen(41);
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(1, 6);
  const Dataset ds = dataset_with_groups(features, {0, 1, 0, 1, 0, 1});
  const AnchorLabeling labeling = make_labeling({0, 1, 2}, 3, {0, 1, 1}, 2);
  const ConstraintTable table = build_constraint_table(labeling, ds);

  Eigen::MatrixXd R(3, 6);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 6; ++i) R(j, i) = oracle::gauss(gen);
  }
  const Eigen::MatrixXd E = project_block_sums(R, table);
  const Eigen::MatrixXd reference = oracle::project_block_sums_dense(R, table);
  CHECK((R - E).norm() == doctest::Approx((R - reference).norm()).epsilon(1e-12));
}

TEST_CASE("an empty block with a positive target cannot be projected") {
  ConstraintTable table;
  table.k = 2;
  table.num_groups = 1;
  table.anchor_blocks = {{0}, {}};
  table.sample_blocks = {{0, 1}};
  table.targets.resize(2, 1);
  table.targets << 1.0, 1.0;
  CHECK_THROWS_AS(project_block_sums(Eigen::MatrixXd::Ones(1, 2), table),
                  std::runtime_error);
}

TEST_CASE("projection insists on complete row and column partitions") {
  ConstraintTable table;
  table.k = 1;
  table.num_groups = 1;
  table.anchor_blocks = {{0}};       // row 1 unassigned
  table.sample_blocks = {{0, 1}};
  table.targets = Eigen::MatrixXd::Constant(1, 1, 2.0);
  CHECK_THROWS_AS(project_block_sums(Eigen::MatrixXd::Ones(2, 2), table),
                  std::invalid_argument);
}

TEST_CASE("penalty rebalancing rescales the dual") {
  AdmmState state;
  state.rho = 2.0;
  state.Lambda = Eigen::MatrixXd::Constant(2, 2, 6.0);

  SUBCASE("primal dominates: penalty grows, dual estimate untouched") {
    state.primal_residual = 50.0;
    state.dual_residual = 1.0;
    update_rho(state, 2.0, 10.0);
    CHECK(state.rho == 4.0);
    CHECK(state.Lambda(0, 0) == 6.0);
  }
  SUBCASE("dual dominates: penalty shrinks, dual estimate untouched") {
    state.primal_residual = 1.0;
    state.dual_residual = 50.0;
    update_rho(state, 2.0, 10.0);
    CHECK(state.rho == 1.0);
    CHECK(state.Lambda(0, 0) == 6.0);
  }
  SUBCASE("balanced residuals leave everything alone") {
    state.primal_residual = 5.0;
    state.dual_residual = 1.0;  // ratio 5 < tau = 10
    update_rho(state, 2.0, 10.0);
    CHECK(state.rho == 2.0);
    CHECK(state.Lambda(0, 0) == 6.0);
  }
  SUBCASE("zero residuals are balanced") {
    state.primal_residual = 0.0;
    state.dual_residual = 0.0;
    update_rho(state, 2.0, 10.0);
    CHECK(state.rho == 2.0);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(update_rho(state, 1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(update_rho(state, 2.0, 0.5), std::invalid_argument);
  }
}

TEST_CASE("objective value on a worked example") {
  Eigen::MatrixXd X(2, 1), H(2, 2), Z(2, 1);
  X << 1, 0;
  H << 1, 0,
       0, 1;
  Z << 0.5, 0.5;
  CHECK(graph_objective(X, H, Z, 0.1) == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("column updates reach the per-column optimum") {
  std::mt19937_64 gen(47);
  const int m = 3, n = 4, d = 2;
  Eigen::MatrixXd H(d, m), X(d, n);
  for (int j = 0; j < m; ++j) {
    H(0, j) = oracle::gauss(gen);
    H(1, j) = oracle::gauss(gen);
  }
  for (int i = 0; i < n; ++i) {
    X(0, i) = oracle::gauss(gen);
    X(1, i) = oracle::gauss(gen);
  }

  SolverConfig config;
  config.alpha = 0.1;
  config.max_inner = 1000000;
  config.fw_tol = 1e-10;
  config.threads = 1;

  AdmmState state;
  state.rho = 1.7;
  state.Z = Eigen::MatrixXd::Constant(m, n, 1.0 / m);
  state.E.resize(m, n);
  state.Lambda.resize(m, n);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      state.E(j, i) = oracle::unif(gen);
      state.Lambda(j, i) = oracle::gauss(gen);
    }
  }

  const Eigen::MatrixXd gram = H.transpose() * H;
  const Eigen::MatrixXd neg2_HtX = -2.0 * (H.transpose() * X);
  update_z(state, gram, neg2_HtX, config);

  Eigen::MatrixXd Q = 2.0 * gram;
  Q.diagonal().array() += 2.0 * (config.alpha + state.rho / 2.0);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd c =
        neg2_HtX.col(i) - state.rho * state.E.col(i) + state.Lambda.col(i);
    const Eigen::VectorXd z = state.Z.col(i);
    const double got = 0.5 * z.dot(Q * z) + c.dot(z);
    const double best = oracle::simplex_qp_active_set(Q, c);
    CHECK(got >= best - 1e-9);
    // Frank-Wolfe closes the objective gap at roughly C/iters, so the budget
    // above buys about six digits here rather than machine precision.
    CHECK(got <= best + 1e-5);
    CHECK(z.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z.minCoeff() >= 0.0);
  }
}

TEST_CASE("an anchor-per-sample instance converges onto feasible targets") {
  std::mt19937_64 gen(53);
  const Dataset ds = blob_dataset(12, gen);
  const std::vector<int> all = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  const AnchorSet anchors = anchors_from(ds, all);
  std::vector<int> labels(12);
  for (int j = 0; j < 12; ++j) labels[j] = j < 6 ? 0 : 1;
  const AnchorLabeling labeling = make_labeling(labels, 2, anchors.anchor_groups, 2);

  SolverConfig config;
  config.alpha = 0.05;
  config.eps = 1e-6;
  // the residual tail on this instance decays at roughly 0.998 per sweep,
  // so a tight tolerance costs a few thousand (cheap, 12x12) iterations
  config.max_outer = 8000;
  config.threads = 1;

  const AdmmSolveResult result = solve_fair_graph(ds, anchors, labeling, config);
  CHECK(result.converged);
  CHECK(result.state.iteration <= 8000);

  // converged: the simplex iterate sits on the block constraints too
  const ConstraintTable table = build_constraint_table(labeling, ds);
  const Eigen::MatrixXd sums = block_sums(result.graph.Z, table);
  for (int l = 0; l < 2; ++l) {
    for (int r = 0; r < 2; ++r) {
      CHECK(sums(l, r) == doctest::Approx(table.targets(l, r)).epsilon(1e-4));
    }
  }

  const double soft = soft_balance(result.graph.Z, labeling, ds.groups);
  const double target = balance_from_masses(table.targets);
  CHECK(soft == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("trace bookkeeping: seed row, one row per iteration, seeded penalty") {
  std::mt19937_64 gen(59);
  const Dataset ds = blob_dataset(20, gen);
  const AnchorSet anchors = anchors_from(ds, {0, 3, 5, 10, 13, 15});
  const AnchorLabeling labeling =
      make_labeling({0, 0, 0, 1, 1, 1}, 2, anchors.anchor_groups, 2);

  SolverConfig config;
  config.alpha = 0.1;
  config.rho0 = 2.5;
  config.eps = 1e-6;
  config.max_outer = 300;
  config.threads = 1;

  const AdmmSolveResult result = solve_fair_graph(ds, anchors, labeling, config);
  const auto& trace = result.state.trace;
  REQUIRE(trace.size() == static_cast<size_t>(result.state.iteration) + 1);

  CHECK(trace[0].iteration == 0);
  CHECK(trace[0].primal_residual == 0.0);
  CHECK(trace[0].dual_residual == 0.0);
  CHECK(trace[0].rho == 2.5);
  const Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(6, 20, 1.0 / 6);
  CHECK(trace[0].objective ==
        doctest::Approx(graph_objective(ds.features, anchors.H, uniform, 0.1))
            .epsilon(1e-12));

  for (size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].iteration == static_cast<int>(i));
    CHECK(trace[i].rho > 0.0);
  }
  if (result.converged) {
    CHECK(std::max(trace.back().primal_residual, trace.back().dual_residual) <
          config.eps);
  }

  // a second identical run retraces the first exactly
  const AdmmSolveResult again = solve_fair_graph(ds, anchors, labeling, config);
  CHECK(again.graph.Z == result.graph.Z);
  CHECK(again.state.trace.size() == trace.size());
}

TEST_CASE("objective descends (within numerical slack) on a blob instance") {
  std::mt19937_64 gen(67);
  const Dataset ds = blob_dataset(40, gen);
  const AnchorSet anchors = anchors_from(ds, {0, 5, 9, 14, 22, 27, 31, 36});
  const AnchorLabeling labeling =
      make_labeling({0, 0, 0, 0, 1, 1, 1, 1}, 2, anchors.anchor_groups, 2);

  SolverConfig config;
  config.alpha = 0.1;
  // A soft penalty lets the iterate undershoot the constrained optimum and
  // then drift back up; starting stiff keeps the trace one-directional.
  config.rho0 = 40.0;
  config.eps = 1e-5;
  config.max_outer = 4000;
  config.threads = 1;

  const AdmmSolveResult result = solve_fair_graph(ds, anchors, labeling, config);
  const auto& trace = result.state.trace;
  const double slack = 1e-6 * trace[0].objective;
  for (size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].objective <= trace[i - 1].objective + slack);
  }
  CHECK(result.converged);
}

TEST_CASE("a single cluster and group reduce the fair solve to the plain one") {
  // with one cluster and one group there is a single block whose mass quota
  // equals n, which column stochasticity already guarantees, so the
  // constrained fixed point minimizes the reconstruction alone
  std::mt19937_64 gen(71);
  Eigen::MatrixXd features(2, 2);
  features << 0.2, -0.7,
              1.1, 0.4;
  const Dataset ds = dataset_with_groups(features, {0, 0});
  const AnchorSet anchors = [&] {
    AnchorSet a;
    a.H.resize(2, 3);
    a.H << 1.0, 0.0, -1.0,
           0.0, 1.0, 0.5;
    a.indices = {0, 1, 1};
    a.anchor_groups = {0, 0, 0};
    a.num_groups = 1;
    return a;
  }();
  const AnchorLabeling labeling = make_labeling({0, 0, 0}, 1, anchors.anchor_groups, 1);

  SolverConfig config;
  config.alpha = 0.2;
  config.eps = 1e-9;
  config.max_outer = 2000;
  config.fw_tol = 1e-11;
  config.max_inner = 1000000;
  config.threads = 1;

  const AdmmSolveResult fair = solve_fair_graph(ds, anchors, labeling, config);
  REQUIRE(fair.converged);

  Eigen::MatrixXd Q = 2.0 * (anchors.H.transpose() * anchors.H);
  Q.diagonal().array() += 2.0 * config.alpha;
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd c = -2.0 * anchors.H.transpose() * ds.features.col(i);
    const double got =
        0.5 * fair.graph.Z.col(i).dot(Q * fair.graph.Z.col(i)) + c.dot(fair.graph.Z.col(i));
    const double best = oracle::simplex_qp_grid(Q, c);
    CHECK(got == doctest::Approx(best).epsilon(1e-4));
  }

  const AnchorGraph plain = solve_unconstrained_graph(ds, anchors, config);
  CHECK(graph_objective(ds.features, anchors.H, fair.graph.Z, config.alpha) ==
        doctest::Approx(graph_objective(ds.features, anchors.H, plain.Z, config.alpha))
            .epsilon(1e-5));
}

TEST_CASE("solver configuration and shape validation") {
  std::mt19937_64 gen(73);
  const Dataset ds = blob_dataset(10, gen);
  const AnchorSet anchors = anchors_from(ds, {0, 4, 6, 9});
  const AnchorLabeling labeling =
      make_labeling({0, 0, 1, 1}, 2, anchors.anchor_groups, 2);

  SolverConfig config;
  SUBCASE("alpha") { config.alpha = -0.1; }
  SUBCASE("rho0") { config.rho0 = 0.0; }
  SUBCASE("eps") { config.eps = 0.0; }
  SUBCASE("outer budget") { config.max_outer = 0; }
  SUBCASE("inner budget") { config.max_inner = -1; }
  SUBCASE("beta") { config.beta = 1.0; }
  SUBCASE("tau") { config.tau = 1.0; }
  CHECK_THROWS_AS(solve_fair_graph(ds, anchors, labeling, config),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_unconstrained_graph(ds, anchors, config),
                  std::invalid_argument);
}

TEST_CASE("labeling size must match the anchor count") {
  std::mt19937_64 gen(79);
  const Dataset ds = blob_dataset(10, gen);
  const AnchorSet anchors = anchors_from(ds, {0, 4, 6, 9});
  const AnchorLabeling labeling = make_labeling({0, 1}, 2, {0, 1}, 2);
  CHECK_THROWS_AS(solve_fair_graph(ds, anchors, labeling, SolverConfig{}),
                  std::invalid_argument);
}

TEST_CASE("unconstrained columns solve their simplex regressions") {
  std::mt19937_64 gen(83);
  const Dataset ds = blob_dataset(6, gen);
  const AnchorSet anchors = anchors_from(ds, {0, 2, 4});

  SolverConfig config;
  config.alpha = 0.1;
  config.fw_tol = 1e-10;
  config.max_inner = 1000000;
  config.threads = 1;

  const AnchorGraph graph = solve_unconstrained_graph(ds, anchors, config);
  Eigen::MatrixXd Q = 2.0 * (anchors.H.transpose() * anchors.H);
  Q.diagonal().array() += 2.0 * config.alpha;
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXd c = -2.0 * anchors.H.transpose() * ds.features.col(i);
    const double got =
        0.5 * graph.Z.col(i).dot(Q * graph.Z.col(i)) + c.dot(graph.Z.col(i));
    CHECK(got <= oracle::simplex_qp_active_set(Q, c) + 1e-5);
  }
}
