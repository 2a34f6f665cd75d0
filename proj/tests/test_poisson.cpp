#include <cmath>
#include <memory>

#include <doctest.h>

#include "dfrac/errors.hpp"
#include "dfrac/poisson.hpp"
#include "dfrac/quadrature.hpp"
#include "oracle.hpp"

using namespace dfrac;

static double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

TEST_CASE("Gauss-Legendre rules") {
  const GaussRule two = gauss_legendre(2);
  CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(1.0));
  const GaussRule& g = gauss_legendre16();
  REQUIRE(g.nodes.size() == 16);
  // Exact for degree 31.
  for (int p = 0; p <= 31; ++p) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    CHECK(std::fabs(s - exact) < 1e-14);
  }
}

TEST_CASE("Poisson weights") {
  CHECK(poisson_weight(0, 0.0) == 1.0);
  CHECK(poisson_weight(3, 0.0) == 0.0);
  CHECK(rel(poisson_weight(5, 2.0), std::exp(-2.0) * 32.0 / 120.0) < 1e-14);
  double total = 0.0;
  for (int n = 0; n < 200; ++n) total += poisson_weight(n, 30.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::isfinite(poisson_weight(400, 350.0)));
  CHECK_THROWS_AS(poisson_weight(-1, 1.0), UsageError);
  CHECK_THROWS_AS(poisson_weight(1, -1.0), DomainError);
}

TEST_CASE("transform of an exponential") {
  for (double lambda : {0.0, 0.5, 2.0}) {
    for (int n : {0, 1, 10, 40}) {
      CHECK(rel(poisson_transform_scalar(exp_function(lambda), n), std::pow(1.0 + lambda, -(n + 1.0))) < 1e-10);
    }
  }
}

TEST_CASE("transform of g_alpha is the kernel") {
  for (double alpha : {0.5, 1.3, 2.5}) {
    for (int n : {0, 3, 20, 40}) {
      CHECK(rel(poisson_transform_scalar(galpha_function(alpha), n), oracle::kernel(alpha, n)) < 1e-9);
    }
  }
}

TEST_CASE("transform of a Mittag-Leffler function") {
  for (int n : {0, 5, 30}) {
    const double closed = poisson_ml_closed(1.5, 1.5, 0.3, n);
    CHECK(rel(poisson_transform_scalar(ml_function(1.5, 1.5, 0.3), n), closed) < 1e-8);
  }
  // lambda = 0 collapses to the kernel.
  CHECK(rel(poisson_ml_closed(1.5, 1.7, 0.0, 12), oracle::kernel(1.7, 12)) < 1e-13);
  CHECK_THROWS_AS(ml_function(1.5, 1.5, 1.2), DomainError);
}

TEST_CASE("orthogonality-type inner product of Poisson densities") {
  // integral p_n p_m = C(n+m, n) / 2^{n+m+1}
  for (auto [n, m] : {std::pair{0, 0}, {2, 5}, {10, 10}, {20, 3}}) {
    const double ref = std::exp(std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) / std::pow(2.0, n + m + 1);
    CHECK(rel(poisson_transform_scalar(poisson_density_function(m), n), ref) < 1e-10);
  }
}

TEST_CASE("growth at or above 1 is rejected") {
  CHECK_THROWS_AS(poisson_transform_scalar(decay_function(1.0, -1.5), 2), InadmissibleGrowthError);
}

TEST_CASE("function descriptors") {
  CHECK(poisson_transform_scalar(parse_time_function("exp:1"), 0) == doctest::Approx(0.5));
  CHECK_NOTHROW(parse_time_function("galpha:1.5"));
  CHECK_NOTHROW(parse_time_function("ml:1.5,1.5,0.3"));
  CHECK_THROWS_AS(parse_time_function("exp"), ConfigError);
  CHECK_THROWS_AS(parse_time_function("sin:1"), ConfigError);
  CHECK_THROWS_AS(parse_time_function("ml:1,2"), ConfigError);
}

TEST_CASE("subordinated family equals the recurrence on a nonnegative operator") {
  Eigen::MatrixXd m(2, 2);
  m << 0.3, 0.1, 0.2, 0.4;
  auto op = std::make_shared<const LinOperator>(LinOperator::dense(m));
  const ResolventFamily sub = subordinate_family(op, 1.6, 30);
  CHECK(sub.method() == ResolventMethod::subordination);
  CHECK(sub.trusted_upto() == 30);
  CHECK(max_relative_gap(build_recurrence(op, 1.6, 30), sub, 30) < 1e-9);
}

TEST_CASE("subordinated family is flagged on a negative spectrum") {
  Eigen::VectorXd d(2);
  d << -0.8, 0.05;
  const ResolventFamily sub = subordinate_family(std::make_shared<const LinOperator>(LinOperator::diagonal(d)), 1.5, 60);
  CHECK(sub.trusted_upto() < 60);
  CHECK_THROWS_AS(subordinate_family(std::make_shared<const LinOperator>(LinOperator::diagonal(Eigen::VectorXd::Constant(2, 1.0))), 1.5, 5),
                  MethodInapplicableError);
}

TEST_CASE("sampling identity") {
  const SamplingReport r = verify_sampling_identity(2.5, FracOrder(1.2), 30);
  CHECK(r.kernel_route < 1e-12);
  CHECK(r.quadrature_route < 1e-8);
  CHECK_THROWS_AS(verify_sampling_identity(1.0, FracOrder(1.5), 10), DomainError);
}
