#include <cmath>
#include <limits>
#include <stdexcept>

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

namespace {

Eigen::VectorXd sample_mean(const Eigen::MatrixXd& x) {
  return x.rowwise().mean();
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean();
  return centered * centered.transpose() /
         static_cast<double>(x.cols() - 1);
}

struct PoisonableSepCma : SepCma {
  using SepCma::SepCma;
  void poison_mean() {
    mean_[0] = std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace

TEST_CASE("OpenAi samples an isotropic Gaussian at the pinned config") {
  // n = 3, lambda = 10000, sigma = 0.02: each coordinate's sample mean must
  // land within 3 sigma / sqrt(lambda) of the distribution mean and the
  // sample variance within 5% of sigma^2 = 4e-4.
  Eigen::VectorXd mean0(3);
  mean0 << 0.1, -0.2, 0.3;
  OpenAi es(mean0, 0.02, 10000, 0.01, 0.0);
  Rng rng(401);
  const Eigen::MatrixXd x = es.ask(rng);
  REQUIRE(x.rows() == 3);
  REQUIRE(x.cols() == 10000);

  const Eigen::VectorXd m = sample_mean(x);
  const Eigen::MatrixXd c = sample_covariance(x);
  const double mean_tol = 3.0 * 0.02 / std::sqrt(10000.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(m[i] - mean0[i]) < mean_tol);
    CHECK(c(i, i) == doctest::Approx(4e-4).epsilon(0.05));
  }
}

TEST_CASE("SepCma samples the configured diagonal covariance") {
  // diag(1, 4) with unit step size, lambda = 50000: diagonal entries within
  // 5%, off-diagonal magnitude below 0.05.
  Eigen::VectorXd mean0(2);
  mean0 << 1.0, -1.0;
  SepCma es(mean0, 1.0, 50000);
  Eigen::VectorXd dv(2);
  dv << 1.0, 4.0;
  es.set_diag_variance(dv);
  Rng rng(402);
  const Eigen::MatrixXd c = sample_covariance(es.ask(rng));
  CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(c(1, 1) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::abs(c(0, 1)) < 0.05);
  CHECK(std::abs(c(1, 0)) < 0.05);
}

TEST_CASE("FullCma samples the configured full covariance") {
  // [[2, 1], [1, 2]] with unit step size, lambda = 50000: every entry of the
  // sample covariance within 5% of the target.
  Eigen::VectorXd mean0(2);
  mean0 << 0.0, 0.0;
  FullCma es(mean0, 1.0, 50000);
  Eigen::MatrixXd target(2, 2);
  target << 2.0, 1.0, 1.0, 2.0;
  es.set_covariance(target);
  Rng rng(403);
  const Eigen::MatrixXd c = sample_covariance(es.ask(rng));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(c(i, j) == doctest::Approx(target(i, j)).epsilon(0.05));
    }
  }
}

TEST_CASE("LmMa samples isotropically before any adaptation") {
  Eigen::VectorXd mean0(4);
  mean0 << 0.5, -0.5, 1.5, 0.0;
  LmMa es(mean0, 0.7, 50000, 4);
  Rng rng(404);
  const Eigen::MatrixXd x = es.ask(rng);
  const Eigen::VectorXd m = sample_mean(x);
  const Eigen::MatrixXd c = sample_covariance(x);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(m[i] - mean0[i]) < 3.0 * 0.7 / std::sqrt(50000.0));
    CHECK(c(i, i) == doctest::Approx(0.49).epsilon(0.05));
    for (int j = 0; j < 4; ++j) {
      if (i != j) CHECK(std::abs(c(i, j)) < 0.02);
    }
  }
}

TEST_CASE("after reset the sampling distribution is isotropic at sigma0") {
  Eigen::VectorXd mean0 = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd target(2);
  target << 2.0, -3.0;

  FullCma full(mean0, 1.0, 50000);
  Eigen::MatrixXd warped(2, 2);
  warped << 5.0, 2.0, 2.0, 1.0;
  full.set_covariance(warped);
  full.reset(target, 0.3);

  SepCma sep(mean0, 1.0, 50000);
  Eigen::VectorXd dv(2);
  dv << 9.0, 0.25;
  sep.set_diag_variance(dv);
  sep.reset(target, 0.3);

  Rng rng(405);
  for (qdmae::EvolutionStrategy* es :
       {static_cast<qdmae::EvolutionStrategy*>(&full),
        static_cast<qdmae::EvolutionStrategy*>(&sep)}) {
    const Eigen::MatrixXd x = es->ask(rng);
    const Eigen::MatrixXd c = sample_covariance(x);
    CHECK(std::sqrt(c(0, 0)) == doctest::Approx(0.3).epsilon(0.05));
    CHECK(std::sqrt(c(1, 1)) == doctest::Approx(0.3).epsilon(0.05));
    CHECK(std::abs(sample_mean(x)[0] - 2.0) < 0.01);
    CHECK(std::abs(sample_mean(x)[1] + 3.0) < 0.01);
  }
}

TEST_CASE("ask is deterministic given the generator state") {
  const Eigen::VectorXd mean0 = Eigen::VectorXd::Constant(5, 0.2);
  FullCma a(mean0, 0.4, 12), b(mean0, 0.4, 12);
  Rng ra(406), rb(406);
  CHECK(a.ask(ra) == b.ask(rb));

  LmMa la(mean0, 0.4, 12, 6), lb(mean0, 0.4, 12, 6);
  Rng rla(406), rlb(406);
  CHECK(la.ask(rla) == lb.ask(rlb));

  SepCma sa(mean0, 0.4, 12), sb(mean0, 0.4, 12);
  Rng rsa(406), rsb(406);
  CHECK(sa.ask(rsa) == sb.ask(rsb));

  OpenAi oa(mean0, 0.4, 12, 0.01, 0.0), ob(mean0, 0.4, 12, 0.01, 0.0);
  Rng roa(406), rob(406);
  CHECK(oa.ask(roa) == ob.ask(rob));

  // Consecutive asks advance the generator and differ.
  Rng r2(406);
  const Eigen::MatrixXd first = a.ask(r2);
  const Eigen::MatrixXd second = a.ask(r2);
  CHECK(first != second);
}

TEST_CASE("ask does not mutate the distribution parameters") {
  const Eigen::VectorXd mean0 = Eigen::VectorXd::Constant(3, -0.7);
  FullCma full(mean0, 0.6, 10);
  Rng rng(407);
  const Eigen::VectorXd mean_before = full.mean();
  const Eigen::MatrixXd cov_before = full.covariance();
  (void)full.ask(rng);
  CHECK(full.mean() == mean_before);
  CHECK(full.step_size() == 0.6);
  CHECK(full.covariance() == cov_before);
  CHECK(full.generation() == 0);

  SepCma sep(mean0, 0.6, 10);
  const Eigen::VectorXd dv_before = sep.diag_variance();
  (void)sep.ask(rng);
  CHECK(sep.diag_variance() == dv_before);
  CHECK(sep.mean() == mean0);

  LmMa lm(mean0, 0.6, 10, 5);
  (void)lm.ask(rng);
  CHECK(lm.mean() == mean0);
  CHECK(lm.direction_vectors().isZero(0.0));

  OpenAi open(mean0, 0.6, 10, 0.01, 0.0);
  (void)open.ask(rng);
  CHECK(open.mean() == mean0);
  CHECK(open.sigma() == 0.6);
  CHECK(open.adam_step() == 0);
}

TEST_CASE("ask rejects non-finite state by naming the parameter") {
  PoisonableSepCma es(Eigen::VectorXd::Zero(3), 0.4, 6);
  es.poison_mean();
  Rng rng(408);
  CHECK_THROWS_WITH_AS(es.ask(rng), doctest::Contains("mean"),
                       std::runtime_error);
}
