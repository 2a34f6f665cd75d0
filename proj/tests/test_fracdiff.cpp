#include <cmath>
#include <random>

#include <doctest.h>

#include "dfrac/errors.hpp"
#include "dfrac/fracdiff.hpp"
#include "oracle.hpp"

using namespace dfrac;

namespace {

ScalarSeq random_seq(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarSeq s(static_cast<std::size_t>(N) + 1);
  for (double& v : s) v = u(rng);
  return s;
}

}  // namespace

TEST_CASE("RL difference agrees with the literal definition") {
  std::mt19937_64 rng(7);
  for (double alpha : {1.1, 1.5, 1.8, 2.0}) {
    const ScalarSeq u = random_seq(rng, 40);
    const ScalarSeq got = rl_diff(FracOrder(alpha), u);
    const std::vector<double> ref = oracle::rl_diff(alpha, u);
    REQUIRE(got.size() == ref.size());
    for (std::size_t n = 0; n < ref.size(); ++n) CHECK(std::fabs(got[n] - ref[n]) < 1e-12);
  }
}

TEST_CASE("order two is the second forward difference") {
  ScalarSeq u(12);
  for (int n = 0; n < 12; ++n) u[n] = std::sin(0.3 * n);
  const ScalarSeq d = rl_diff(FracOrder(2.0), u), c = caputo_diff(FracOrder(2.0), u);
  for (int n = 0; n < 10; ++n) {
    CHECK(std::fabs(d[n] - (u[n + 2] - 2 * u[n + 1] + u[n])) < 1e-15);
    CHECK(c[n] == doctest::Approx(d[n]).epsilon(1e-14));
  }
}

TEST_CASE("difference of a kernel lowers its order") {
  // Delta^alpha k^beta(n) = k^{beta - alpha}(n + 2).
  for (auto [beta, alpha] : {std::pair{2.5, 1.5}, {3.0, 1.3}, {2.9, 1.9}}) {
    const int N = 40;
    const ScalarSeq d = rl_diff(FracOrder(alpha), cesaro_kernel(beta, N));
    for (int n = 0; n + 2 <= N; ++n) {
      const double ref = oracle::kernel(beta - alpha, n + 2);
      CHECK(std::fabs(d[n] - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
    }
  }
}

TEST_CASE("Caputo difference of a constant vanishes, RL does not") {
  const ScalarSeq c(30, 3.0);
  const double alpha = 1.4;
  const ScalarSeq cap = caputo_diff(FracOrder(alpha), c), rl = rl_diff(FracOrder(alpha), c);
  for (int n = 0; n < 28; ++n) {
    CHECK(cap[n] == 0.0);
    CHECK(std::fabs(rl[n] - 3.0 * oracle::kernel(1.0 - alpha, n + 2)) < 1e-14);
  }
}

TEST_CASE("Caputo and RL differ by the initial-value corrections") {
  std::mt19937_64 rng(11);
  for (double alpha : {1.2, 1.5, 1.9}) {
    const int N = 30;
    const ScalarSeq u = random_seq(rng, N);
    const ScalarSeq cap = caputo_diff(FracOrder(alpha), u), rl = rl_diff(FracOrder(alpha), u);
    const ScalarSeq k = cesaro_kernel(2.0 - alpha, N);
    for (int n = 0; n + 2 <= N; ++n) {
      const double expect = rl[n] - k[n + 1] * (u[1] - 2 * u[0]) - k[n + 2] * u[0];
      CHECK(std::fabs(cap[n] - expect) < 1e-13);
    }
  }
}

TEST_CASE("fractional sum composes additively") {
  std::mt19937_64 rng(3);
  const ScalarSeq u = random_seq(rng, 25);
  const ScalarSeq a = frac_sum(0.4, frac_sum(0.7, u)), b = frac_sum(1.1, u);
  for (int n = 0; n <= 25; ++n) CHECK(std::fabs(a[n] - b[n]) < 1e-13);
  const ScalarSeq one = frac_sum(1.0, u);
  double run = 0.0;
  for (int n = 0; n <= 25; ++n) {
    run += u[n];
    CHECK(std::fabs(one[n] - run) < 1e-14);
  }
}

TEST_CASE("convolution rule matches direct evaluation") {
  std::mt19937_64 rng(5);
  for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
    const int N = 30;
    const ScalarSeq u = random_seq(rng, N);
    Eigen::MatrixXd vm(3, N + 1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (Eigen::Index i = 0; i < vm.size(); ++i) vm.data()[i] = d(rng);
    const VecSeq v(vm);
    const VecSeq rule = rl_diff_of_conv(FracOrder(alpha), u, v);
    for (Eigen::Index i = 0; i < 3; ++i) {
      const ScalarSeq direct = rl_diff(FracOrder(alpha), conv(u, v.component(i)));
      const ScalarSeq via = rule.component(i);
      REQUIRE(via.size() == direct.size());
      for (std::size_t n = 0; n < direct.size(); ++n) CHECK(std::fabs(via[n] - direct[n]) < 1e-12);
    }
  }
}

TEST_CASE("vector differences act componentwise") {
  std::mt19937_64 rng(9);
  const ScalarSeq a = random_seq(rng, 20), b = random_seq(rng, 20);
  Eigen::MatrixXd m(2, 21);
  for (int n = 0; n <= 20; ++n) m.col(n) << a[n], b[n];
  const VecSeq r = rl_diff(FracOrder(1.6), VecSeq(m));
  CHECK(r.horizon() == 18);
  const ScalarSeq ra = rl_diff(FracOrder(1.6), a);
  for (int n = 0; n <= 18; ++n) CHECK(r.state(n)(0) == doctest::Approx(ra[n]).epsilon(1e-15));
}

TEST_CASE("differences need two trailing indices") {
  CHECK_THROWS_AS(rl_diff(FracOrder(1.5), ScalarSeq{1.0, 2.0}), UsageError);
}
