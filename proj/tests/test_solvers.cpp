#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vrgames/gap.hpp"
#include "vrgames/solvers.hpp"

using namespace vrgames;
using namespace vrgames::testing;

TEST_CASE("default_params: hand-checked against the header formulas") {
  SUBCASE("dense 100x100 sign matrix, l1l1, eps = 0.1") {
    GeneratorParams gp;
    gp.rows = 100;
    gp.cols = 100;
    gp.density = 1.0;
    gp.dist = ValueDist::PlusMinus;
    gp.param_a = 1.0;
    gp.seed = 5;
    const SparseMatrix a = generate_random(gp);
    REQUIRE(a.norm_max() == 1.0);
    REQUIRE(a.nnz() == 10000);
    const SetupDescriptor s{SetupKind::L1L1, 100, 100};
    const SolverConfig cfg = default_params(s, a, 0.1);
    CHECK(cfg.alpha == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
    CHECK(cfg.eta == doctest::Approx(cfg.alpha / 10.0).epsilon(1e-12));
    CHECK(cfg.inner_iterations == 2000);
    CHECK(cfg.outer_iterations == 14);  // ceil(log(1e4) * alpha / 0.1)
  }
  SUBCASE("epsilon so large that alpha = eps/Theta and K = 1") {
    const SparseMatrix a = random_instance(8, 8, 3);
    const SetupDescriptor s{SetupKind::L1L1, 8, 8};
    const double eps = 10.0 * a.norm_max() * theta(s);
    const SolverConfig cfg = default_params(s, a, eps);
    CHECK(cfg.alpha == doctest::Approx(eps / theta(s)));
    CHECK(cfg.outer_iterations == 1);
  }
  SUBCASE("l2l1 uses the 24 L^2 step size and tau = 1/eta") {
    const SparseMatrix a = random_instance(8, 8, 4);
    const SetupDescriptor s{SetupKind::L2L1, 8, 8};
    const SolverConfig cfg = default_params(s, a, 0.05);
    const double l = a.norm_2_to_inf();
    CHECK(cfg.eta == doctest::Approx(cfg.alpha / (24.0 * l * l)).epsilon(1e-12));
    CHECK(cfg.tau == doctest::Approx(1.0 / cfg.eta).epsilon(1e-12));
    CHECK(cfg.inner_iterations ==
          static_cast<long>(std::ceil(4.0 / (cfg.eta * cfg.alpha))));
  }
  SUBCASE("zero matrix signals a trivial instance") {
    const SparseMatrix zero = SparseMatrix::from_triplets(3, 3, {});
    const SetupDescriptor s{SetupKind::L1L1, 3, 3};
    CHECK_THROWS_AS(default_params(s, zero, 0.1), TrivialInstanceError);
  }
}

TEST_CASE("inner_loop basics") {
  SUBCASE("zero matrix, T = 1: the center is a fixed point") {
    const SparseMatrix zero = SparseMatrix::from_triplets(2, 2, {});
    const SetupDescriptor s{SetupKind::L1L1, 2, 2};
    const Point w0 = uniform_center(s);
    EstimatorState state(zero, s, w0, EstimatorVariant::L1L1, 0.0, 1);
    WorkCounters work;
    const Point out = inner_loop(state, w0, 1.0, 0.1, 1, nullptr, work);
    CHECK(out.x.isApprox(w0.x, 1e-12));
    CHECK(out.y.isApprox(w0.y, 1e-12));
  }
  SUBCASE("identity game from uniform stays uniform under the exact gradient") {
    const SparseMatrix id = from_dense(Eigen::MatrixXd::Identity(2, 2));
    const SetupDescriptor s{SetupKind::L1L1, 2, 2};
    const Point w0 = uniform_center(s);
    EstimatorState state(id, s, w0, EstimatorVariant::Exact, 0.0, 1);
    WorkCounters work;
    const Point out = inner_loop(state, w0, 1.0, 0.05, 50, nullptr, work);
    CHECK(out.x.isApproxToConstant(0.5, 1e-10));
    CHECK(out.y.isApproxToConstant(0.5, 1e-10));
  }
}

TEST_CASE("inner_loop implements a relaxed proximal oracle (measured)") {
  std::vector<double> gaps;
  const SparseMatrix a = random_instance(8, 8, 42);
  const SetupDescriptor s{SetupKind::L1L1, 8, 8};
  const SolverConfig cfg = default_params(s, a, 0.05 * a.norm_max());
  const Point w0 = uniform_center(s);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    EstimatorState state(a, s, w0, EstimatorVariant::L1L1, 0.0, seed);
    WorkCounters work;
    const Point out =
        inner_loop(state, w0, cfg.alpha, cfg.eta, cfg.inner_iterations, nullptr, work);
    gaps.push_back(relaxed_oracle_gap(a, s, w0, out, cfg.alpha));
  }
  CHECK(median(gaps) <= 0.05 * cfg.alpha * theta(s));
}

TEST_CASE("deterministic regularized iteration reaches the proximal point") {
  const SparseMatrix a = random_instance(6, 6, 9);
  const SetupDescriptor s{SetupKind::L1L1, 6, 6};
  const Point w0 = uniform_center(s);
  const double alpha = a.norm_max();
  const Point za = reference_prox_point(a, s, w0, alpha, 20000);

  // fixed point of the proximal response
  const GradientEstimate g = exact_gradient(a, za);
  const WeightedPoint anchors[1] = {{&w0, alpha}};
  const Point response = mirror_step(s, g.gx, g.gy, anchors);
  CHECK((response.x - za.x).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((response.y - za.y).lpNorm<Eigen::Infinity>() <= 1e-6);

  // variational inequality of the alpha-proximal mapping
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Point u = random_point(s, rng);
    const double lhs = g.gx.dot(za.x - u.x) + g.gy.dot(za.y - u.y);
    const double rhs =
        alpha * (bregman(s, w0, u) - bregman(s, za, u) - bregman(s, w0, za));
    CHECK(lhs <= rhs + 1e-6);
  }
}

TEST_CASE("restarted_inner_loop basics") {
  SUBCASE("zero matrix returns w0 for any phase count") {
    const SparseMatrix zero = SparseMatrix::from_triplets(2, 2, {});
    const SetupDescriptor s{SetupKind::L1L1, 2, 2};
    const Point w0 = uniform_center(s);
    RecenterFn recenter = [&](const Point& c) {
      return EstimatorState(zero, s, c, EstimatorVariant::L1L1, 0.0, 7);
    };
    WorkCounters work;
    Rng phase_rng(3);
    const Point out = restarted_inner_loop(recenter, w0, 1.0, 0.1, 8, 5, nullptr, work,
                                           phase_rng);
    CHECK(out.x.isApprox(w0.x, 1e-10));
    CHECK(out.y.isApprox(w0.y, 1e-10));
  }
  SUBCASE("phases contract toward the proximal point") {
    const SparseMatrix a = random_instance(8, 8, 11);
    const SetupDescriptor s{SetupKind::L1L1, 8, 8};
    const Point w0 = uniform_center(s);
    const double l = a.norm_max();
    const double alpha = 0.5 * l;
    const double eta = alpha / (8.0 * l * l);
    const long t_count = static_cast<long>(std::ceil(32.0 * l * l / (alpha * alpha)));
    const Point za = reference_prox_point(a, s, w0, alpha, 100 * t_count);

    // chain single phases so the divergence to z_alpha is observable between
    // them; the multi-phase entry point is exercised at the end
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng phase_rng(seed);
      std::uint64_t recenter_seed = 5000 * seed;
      RecenterFn recenter = [&](const Point& c) {
        return EstimatorState(a, s, c, EstimatorVariant::L1L1, 0.0, recenter_seed++);
      };
      double prev_div = bregman(s, w0, za);
      Point hat = w0;
      for (int phase = 1; phase <= 6; ++phase) {
        EstimatorState state = recenter(hat);
        const long t_hat = static_cast<long>(phase_rng.next_index_one_based(t_count));
        Point prev = hat;
        for (long t = 1; t <= t_hat; ++t) {
          const GradientEstimate ge = estimate(state, prev);
          const WeightedPoint anchors[2] = {{&w0, alpha}, {&prev, 1.0 / eta}};
          prev = mirror_step(s, ge.gx, ge.gy, anchors);
        }
        hat = std::move(prev);
        const double div = bregman(s, hat, za);
        ratios.push_back(div / prev_div);
        prev_div = div;
      }
    }
    CHECK(median(ratios) <= 0.75);

    // the packaged loop lands near z_alpha as well
    WorkCounters work;
    Rng phase_rng(1);
    std::uint64_t recenter_seed = 42;
    RecenterFn recenter = [&](const Point& c) {
      return EstimatorState(a, s, c, EstimatorVariant::L1L1, 0.0, recenter_seed++);
    };
    const Point out =
        restarted_inner_loop(recenter, w0, alpha, eta, t_count, 10, nullptr, work,
                             phase_rng);
    CHECK(bregman(s, out, za) < bregman(s, w0, za));
  }
}

TEST_CASE("outer_loop basics") {
  SUBCASE("zero matrix with an exact-prox oracle: center point, gap 0") {
    const SparseMatrix zero = SparseMatrix::from_triplets(2, 2, {});
    const SetupDescriptor s{SetupKind::L1L1, 2, 2};
    OracleFn oracle = [&](const Point& z, WorkCounters&) { return z; };
    const SolveReport report = outer_loop(oracle, zero, s, 1.0, 1);
    CHECK(report.final_point.x.isApproxToConstant(0.5, 1e-12));
    CHECK(report.measured_gap == doctest::Approx(0.0));
  }
  SUBCASE("rotation game: gap decreases with K and approaches zero") {
    Eigen::MatrixXd d(2, 2);
    d << 0, 1, -1, 0;
    const SparseMatrix a = from_dense(d);
    const SetupDescriptor s{SetupKind::L1L1, 2, 2};
    SolveOptions so;
    so.seed = 1;
    so.theorem_mode = true;
    auto gap_at = [&](long k) {
      SolveOptions opt = so;
      opt.theorem_mode = false;
      opt.early_stop = false;
      opt.gap_check_every = 0;
      opt.outer_iterations = k;
      return solve(a, s, 0.01, opt).measured_gap;
    };
    const double g10 = gap_at(10);
    const double g80 = gap_at(80);
    CHECK(g80 <= g10);
    CHECK(g80 <= 0.35);  // keeps shrinking toward the saddle
  }
}

TEST_CASE("gap envelope: K = 40 at most K = 10, median over 9 seeds") {
  const SparseMatrix a = random_instance(64, 64, 2026);
  const SetupDescriptor s{SetupKind::L1L1, 64, 64};
  std::vector<double> g10, g40;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    for (long k : {10L, 40L}) {
      SolveOptions so;
      so.seed = seed;
      so.early_stop = false;
      so.gap_check_every = 0;
      so.outer_iterations = k;
      const SolveReport r = solve(a, s, 0.05 * a.norm_max(), so);
      (k == 10 ? g10 : g40).push_back(r.measured_gap);
    }
  }
  CHECK(median(g40) <= median(g10));
}

TEST_CASE("work counters: conservation identity in theorem mode") {
  const SparseMatrix a = random_instance(16, 12, 6, 0.5);
  const SetupDescriptor s{SetupKind::L1L1, 12, 16};
  SolveOptions so;
  so.seed = 3;
  so.theorem_mode = true;
  const SolveReport r = solve(a, s, 0.25 * a.norm_max(), so);

  const long k = r.outer_iterations_run;
  const long t = r.config.inner_iterations;
  const Index coords = s.n + s.m;
  CHECK(r.work.total() ==
        r.work.gradient + r.work.estimator + r.work.step + r.work.gap);
  CHECK(r.work.gradient == 2 * k * a.nnz());  // recentering + extragradient
  CHECK(r.inner_steps_run == k * t);
  // inner estimator + mirror-step work lies within fixed constants of
  // K * T * (n + m); the outer loop adds 2 (n+m)-passes per iteration.
  const std::int64_t lower = static_cast<std::int64_t>(k) * t * coords;
  const std::int64_t upper = 6 * static_cast<std::int64_t>(k) * (t + 1) * coords;
  CHECK(r.work.estimator + r.work.step >= lower);
  CHECK(r.work.estimator + r.work.step <= upper);
  CHECK(r.work.gap == a.nnz());  // single final measurement
}

TEST_CASE("iterates stay feasible along the trace") {
  const SparseMatrix a = random_instance(10, 10, 13);
  for (SetupKind kind : {SetupKind::L1L1, SetupKind::L2L1, SetupKind::L2L2}) {
    const SetupDescriptor s{kind, 10, 10};
    OracleFn wrapped = [&](const Point& z, WorkCounters& work) {
      CHECK(check_feasible(s, z).empty());
      EstimatorState state(a, s, z, default_estimator(kind),
                           estimator_is_clipped(default_estimator(kind)) ? 10.0 : 0.0,
                           11);
      work.gradient += state.setup_work();
      const Point out = inner_loop(state, z, 1.0, 0.01, 20, nullptr, work);
      CHECK(check_feasible(s, out).empty());
      return out;
    };
    const SolveReport r = outer_loop(wrapped, a, s, 1.0, 5);
    CHECK(check_feasible(s, r.final_point).empty());
  }
}

TEST_CASE("strongly monotone outer loop") {
  SUBCASE("rejects mu = 0") {
    const SparseMatrix a = random_instance(4, 4, 21);
    const SetupDescriptor s{SetupKind::L2L2, 4, 4};
    OracleFn oracle = [](const Point& z, WorkCounters&) { return z; };
    StrongConfig strong;  // mu = 0
    CHECK_THROWS_AS(outer_loop_strongly_monotone(oracle, a, s, CompositeTerm{}, strong,
                                                 1.0, 3),
                    std::invalid_argument);
  }
  SUBCASE("huge mu collapses the extragradient step onto the half iterate") {
    const SetupDescriptor s{SetupKind::L2L2, 3, 3};
    Rng rng(31);
    const Point z_prev = random_point(s, rng);
    const Point z_half = random_point(s, rng);
    const Vector g = (Vector(3) << 0.3, -0.2, 0.5).finished();
    const WeightedPoint anchors[2] = {{&z_prev, 1.0}, {&z_half, 1e9}};
    const Point z = mirror_step(s, g, g, anchors);
    CHECK((z.x - z_half.x).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK((z.y - z_half.y).lpNorm<Eigen::Infinity>() < 1e-6);
  }
  SUBCASE("l2l2 composite: iterates contract to the origin saddle") {
    const SparseMatrix a = random_instance(8, 8, 41, 1.0, 0.3);
    const SetupDescriptor s{SetupKind::L2L2, 8, 8};
    const double mu = 0.1;
    SolveOptions so;
    so.seed = 5;
    so.strong = StrongConfig{mu, mu};
    so.composite = CompositeTerm{mu, mu};
    so.early_stop = false;
    so.gap_check_every = 1;
    so.outer_iterations = 60;
    Point origin = uniform_center(s);
    so.reference = &origin;
    // the center coincides with the saddle here, so start on the sphere
    Point start = origin;
    Rng rng(6);
    start.x = random_ball(s.n, rng);
    start.y = random_ball(s.m, rng);
    so.start = &start;
    const SolveReport r = solve(a, s, 1e-9, so);
    CHECK(r.final_point.x.squaredNorm() + r.final_point.y.squaredNorm() <= 1e-4);
    // divergence-to-reference trace is (1/2)|z_k|^2 and decays geometrically
    REQUIRE(r.trace.size() >= 10);
    CHECK(r.trace.front().divergence_to_reference > 0.0);
    CHECK(r.trace.back().divergence_to_reference <
          1e-6 * r.trace.front().divergence_to_reference);
  }
}

TEST_CASE("solve: end-to-end examples") {
  SUBCASE("identity game reaches the target gap") {
    const SparseMatrix id = from_dense(Eigen::MatrixXd::Identity(2, 2));
    const SetupDescriptor s{SetupKind::L1L1, 2, 2};
    SolveOptions so;
    so.seed = 9;
    const SolveReport r = solve(id, s, 0.01, so);
    CHECK(r.measured_gap <= 0.01);
    CHECK(r.converged);
  }
  SUBCASE("a strictly dominant column concentrates the x block") {
    Eigen::MatrixXd d(4, 4);
    Rng rng(51);
    for (Index i = 0; i < 4; ++i) {
      d(i, 0) = -2.0;
      for (Index j = 1; j < 4; ++j) d(i, j) = rng.next_double();
    }
    const SparseMatrix a = from_dense(d);
    const SetupDescriptor s{SetupKind::L1L1, 4, 4};
    SolveOptions so;
    so.seed = 4;
    const SolveReport r = solve(a, s, 0.05, so);
    CHECK(r.measured_gap <= 0.05);
    CHECK(r.final_point.x[0] >= 0.9);
  }
  SUBCASE("identical seeds give identical traces") {
    const SparseMatrix a = random_instance(12, 12, 61);
    const SetupDescriptor s{SetupKind::L1L1, 12, 12};
    SolveOptions so;
    so.seed = 777;
    so.early_stop = false;
    so.outer_iterations = 6;
    const SolveReport r1 = solve(a, s, 0.05, so);
    const SolveReport r2 = solve(a, s, 0.05, so);
    REQUIRE(r1.trace.size() == r2.trace.size());
    for (size_t i = 0; i < r1.trace.size(); ++i) {
      CHECK(r1.trace[i].k == r2.trace[i].k);
      CHECK(r1.trace[i].work == r2.trace[i].work);
      CHECK(r1.trace[i].gap == r2.trace[i].gap);
    }
    CHECK((r1.final_point.x - r2.final_point.x).norm() == 0.0);
    CHECK((r1.final_point.y - r2.final_point.y).norm() == 0.0);
  }
  SUBCASE("theorem mode rejects parameter overrides") {
    const SparseMatrix a = random_instance(4, 4, 71);
    const SetupDescriptor s{SetupKind::L1L1, 4, 4};
    SolveOptions so;
    so.theorem_mode = true;
    so.alpha = 0.5;
    CHECK_THROWS_AS(solve(a, s, 0.1, so), std::invalid_argument);
  }
  SUBCASE("the combined inner-step cap refuses oversized runs") {
    const SparseMatrix a = random_instance(64, 64, 81);
    const SetupDescriptor s{SetupKind::L1L1, 64, 64};
    SolveOptions so;
    so.theorem_mode = true;
    CHECK_THROWS_AS(solve(a, s, 1e-9 * a.norm_max(), so), BudgetError);
  }
  SUBCASE("restarted oracle path solves the game as well") {
    const SparseMatrix a = random_instance(8, 8, 91);
    const SetupDescriptor s{SetupKind::L1L1, 8, 8};
    SolveOptions so;
    so.seed = 11;
    so.use_restarted_oracle = true;
    so.restart_phases = 4;
    so.early_stop = false;
    so.outer_iterations = 12;
    so.max_total_inner_steps = 100'000'000;
    const SolveReport r = solve(a, s, 0.1 * a.norm_max(), so);
    CHECK(r.measured_gap <= 0.1 * a.norm_max());
  }
}
