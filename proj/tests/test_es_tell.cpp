#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

#include "doctest.h"
#include "qdmae/es/cma_es.hpp"
#include "qdmae/es/lm_ma_es.hpp"
#include "qdmae/es/openai_es.hpp"
#include "qdmae/es/sep_cma_es.hpp"
#include "test_util.hpp"

using qdmae::FullCma;
using qdmae::LmMa;
using qdmae::OpenAi;
using qdmae::Rng;
using qdmae::SepCma;
using qdmae::test::batch_from;
using qdmae::test::objective_generation;

namespace {

double sphere_peak(const Eigen::VectorXd& x) { return -x.squaredNorm(); }

std::vector<double> evaluate_columns(
    const Eigen::MatrixXd& candidates,
    const std::function<double(const Eigen::VectorXd&)>& objective) {
  std::vector<double> values(static_cast<std::size_t>(candidates.cols()));
  for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
    values[static_cast<std::size_t>(j)] = objective(candidates.col(j));
  }
  return values;
}

}  // namespace

TEST_CASE("identical tell sequences produce bit-identical state") {
  const Eigen::VectorXd mean0 = Eigen::VectorXd::Constant(6, 0.8);
  FullCma a(mean0, 0.5, 10), b(mean0, 0.5, 10);
  LmMa la(mean0, 0.5, 10, 5), lb(mean0, 0.5, 10, 5);
  SepCma sa(mean0, 0.5, 10), sb(mean0, 0.5, 10);
  OpenAi oa(mean0, 0.5, 10, 0.02, 0.001), ob(mean0, 0.5, 10, 0.02, 0.001);

  for (int g = 0; g < 8; ++g) {
    Rng ra(500 + g), rb(500 + g);
    objective_generation(a, ra, sphere_peak);
    objective_generation(b, rb, sphere_peak);
    Rng rla(600 + g), rlb(600 + g);
    objective_generation(la, rla, sphere_peak);
    objective_generation(lb, rlb, sphere_peak);
    Rng rsa(700 + g), rsb(700 + g);
    objective_generation(sa, rsa, sphere_peak);
    objective_generation(sb, rsb, sphere_peak);
    Rng roa(800 + g), rob(800 + g);
    objective_generation(oa, roa, sphere_peak);
    objective_generation(ob, rob, sphere_peak);
  }

  CHECK(a.mean() == b.mean());
  CHECK(a.step_size() == b.step_size());
  CHECK(a.covariance() == b.covariance());
  CHECK(a.evo_path_sigma() == b.evo_path_sigma());
  CHECK(a.evo_path_cov() == b.evo_path_cov());

  CHECK(la.mean() == lb.mean());
  CHECK(la.step_size() == lb.step_size());
  CHECK(la.direction_vectors() == lb.direction_vectors());
  CHECK(la.evo_path_sigma() == lb.evo_path_sigma());

  CHECK(sa.mean() == sb.mean());
  CHECK(sa.diag_variance() == sb.diag_variance());
  CHECK(sa.evo_path_sigma() == sb.evo_path_sigma());
  CHECK(sa.evo_path_cov() == sb.evo_path_cov());

  CHECK(oa.mean() == ob.mean());
  CHECK(oa.adam_first_moment() == ob.adam_first_moment());
  CHECK(oa.adam_second_moment() == ob.adam_second_moment());
  CHECK(oa.adam_step() == ob.adam_step());
}

TEST_CASE("tell depends on improvements only through the ranking") {
  // Applying a strictly monotone transform (2 * delta + 3) to every
  // improvement value leaves the post-tell state bit-identical.
  const Eigen::VectorXd mean0 = Eigen::VectorXd::Constant(5, 0.4);
  FullCma a(mean0, 0.3, 8), b(mean0, 0.3, 8);
  LmMa la(mean0, 0.3, 8, 4), lb(mean0, 0.3, 8, 4);
  SepCma sa(mean0, 0.3, 8), sb(mean0, 0.3, 8);
  OpenAi oa(mean0, 0.3, 8, 0.02, 0.001), ob(mean0, 0.3, 8, 0.02, 0.001);

  auto run_pair = [](qdmae::EvolutionStrategy& x, qdmae::EvolutionStrategy& y,
                     int seed) {
    for (int g = 0; g < 6; ++g) {
      Rng rx(seed + g), ry(seed + g);
      const Eigen::MatrixXd cx = x.ask(rx);
      const Eigen::MatrixXd cy = y.ask(ry);
      REQUIRE(cx == cy);
      std::vector<double> deltas = evaluate_columns(cx, sphere_peak);
      std::vector<double> transformed(deltas.size());
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        transformed[i] = 2.0 * deltas[i] + 3.0;
      }
      const std::vector<char> accepted(deltas.size(), 1);
      x.tell(batch_from(cx, deltas, accepted));
      y.tell(batch_from(cy, transformed, accepted));
    }
  };
  run_pair(a, b, 900);
  run_pair(la, lb, 910);
  run_pair(sa, sb, 920);
  run_pair(oa, ob, 930);

  CHECK(a.mean() == b.mean());
  CHECK(a.step_size() == b.step_size());
  CHECK(a.covariance() == b.covariance());
  CHECK(la.mean() == lb.mean());
  CHECK(la.direction_vectors() == lb.direction_vectors());
  CHECK(sa.mean() == sb.mean());
  CHECK(sa.diag_variance() == sb.diag_variance());
  CHECK(oa.mean() == ob.mean());
  CHECK(oa.adam_first_moment() == ob.adam_first_moment());
}

TEST_CASE("FullCma reaches 1e-10 accuracy on the 10-D quadratic") {
  // f(x) = -||x||^2 from mean 1, sigma0 = 0.5, lambda = 20: the best batch
  // objective must exceed -1e-10 within 2000 generations.
  FullCma es(Eigen::VectorXd::Ones(10), 0.5, 20);
  Rng rng(1001);
  double best = -std::numeric_limits<double>::infinity();
  long long gens = 0;
  for (; gens < 2000; ++gens) {
    best = std::max(best, objective_generation(es, rng, sphere_peak));
    if (best > -1e-10) break;
  }
  INFO("generations used: ", gens, " best: ", best);
  CHECK(best > -1e-10);
}

TEST_CASE("SepCma and LmMa optimize the shifted quadratic quickly") {
  Eigen::VectorXd c(10);
  c << 0.4, -0.3, 0.2, 0.5, -0.1, 0.3, -0.4, 0.1, 0.2, -0.2;
  auto objective = [&](const Eigen::VectorXd& x) {
    return -(x - c).squaredNorm();
  };

  SepCma sep(Eigen::VectorXd::Zero(10), 0.5, 20);
  Rng rng_sep(1002);
  double best_sep = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < 2000 && best_sep <= -1e-8; ++g) {
    best_sep = std::max(best_sep, objective_generation(sep, rng_sep, objective));
  }
  CHECK(best_sep > -1e-8);

  LmMa lm(Eigen::VectorXd::Zero(10), 0.5, 20, 20);
  Rng rng_lm(1003);
  double best_lm = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < 2000 && best_lm <= -1e-8; ++g) {
    best_lm = std::max(best_lm, objective_generation(lm, rng_lm, objective));
  }
  CHECK(best_lm > -1e-8);
}

TEST_CASE("OpenAi walks the mean toward the optimum") {
  // The mean norm must fall below 0.1 and shrink across every successive
  // 50-generation window until it does.
  OpenAi es(Eigen::VectorXd::Ones(10), 0.05, 40, 0.01, 0.0);
  Rng rng(1004);
  std::vector<double> norms;
  norms.push_back(es.mean().norm());
  bool reached = false;
  for (int g = 0; g < 3000; ++g) {
    objective_generation(es, rng, sphere_peak);
    norms.push_back(es.mean().norm());
    if (norms.back() < 0.1) {
      reached = true;
      break;
    }
  }
  CHECK(reached);
  for (std::size_t g = 0; g + 50 < norms.size(); g += 50) {
    CHECK(norms[g + 50] < norms[g]);
  }
}

TEST_CASE("FullCma covariance stays symmetric and positive definite") {
  FullCma es(Eigen::VectorXd::Ones(6), 0.5, 12);
  Rng rng(1005);
  auto anisotropic = [](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      s += std::pow(100.0, static_cast<double>(i) / 5.0) * x[i] * x[i];
    }
    return -s;
  };
  for (int g = 0; g < 60; ++g) objective_generation(es, rng, anisotropic);

  const Eigen::MatrixXd& cov = es.covariance();
  CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  CHECK(llt.info() == Eigen::Success);
  CHECK(es.step_size() > 0.0);
  CHECK(es.condition_number() >= 1.0);
}

TEST_CASE("step size stays positive through adaptation") {
  const Eigen::VectorXd mean0 = Eigen::VectorXd::Constant(4, 0.6);
  FullCma full(mean0, 0.3, 8);
  LmMa lm(mean0, 0.3, 8, 4);
  SepCma sep(mean0, 0.3, 8);
  Rng rng(1006);
  for (int g = 0; g < 30; ++g) {
    objective_generation(full, rng, sphere_peak);
    objective_generation(lm, rng, sphere_peak);
    objective_generation(sep, rng, sphere_peak);
    CHECK(full.step_size() > 0.0);
    CHECK(lm.step_size() > 0.0);
    CHECK(sep.step_size() > 0.0);
    CHECK(sep.diag_variance().minCoeff() > 0.0);
  }
}

TEST_CASE("tell validates batch shape and ranking") {
  SepCma es(Eigen::VectorXd::Zero(3), 0.4, 6);
  Rng rng(1007);
  const Eigen::MatrixXd candidates = es.ask(rng);
  const std::vector<double> deltas(6, 1.0);
  const std::vector<char> accepted(6, 1);

  // Too few solutions.
  auto small = batch_from(candidates.leftCols(4), std::vector<double>(4, 1.0),
                          std::vector<char>(4, 1));
  CHECK_THROWS_AS(es.tell(small), std::invalid_argument);

  // Corrupted ranking: duplicate index.
  auto batch = batch_from(candidates, deltas, accepted);
  batch.ranking[1] = batch.ranking[0];
  CHECK_THROWS_WITH_AS(es.tell(batch), doctest::Contains("permutation"),
                       std::invalid_argument);

  // Out-of-range ranking entry.
  auto batch2 = batch_from(candidates, deltas, accepted);
  batch2.ranking[0] = 6;
  CHECK_THROWS_AS(es.tell(batch2), std::invalid_argument);

  // Solution dimension mismatch.
  auto batch3 = batch_from(candidates, deltas, accepted);
  batch3.solutions[2].params = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(es.tell(batch3), std::invalid_argument);
}

TEST_CASE("LmMa refuses tell without a matching ask") {
  LmMa es(Eigen::VectorXd::Zero(3), 0.4, 6, 3);
  Eigen::MatrixXd fake = Eigen::MatrixXd::Zero(3, 6);
  auto batch = batch_from(fake, std::vector<double>(6, 0.0),
                          std::vector<char>(6, 1));
  CHECK_THROWS_AS(es.tell(batch), std::logic_error);
}
