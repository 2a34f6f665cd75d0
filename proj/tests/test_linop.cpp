#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "dfrac/errors.hpp"
#include "dfrac/linop.hpp"

using namespace dfrac;

TEST_CASE("apply agrees with the materialized matrix") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(4, 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
  Eigen::VectorXd diag(4);
  diag << 0.5, -1.0, 2.0, 0.0;
  Eigen::VectorXd x(4);
  x << 1.0, -2.0, 0.5, 3.0;
  for (const LinOperator& op : {LinOperator::dense(m), LinOperator::diagonal(diag),
                                LinOperator::laplacian1d(0.0, 1.0, 4), LinOperator::zero(4)}) {
    CHECK((op.apply(x) - op.materialize() * x).norm() < 1e-12);
    Eigen::MatrixXd cols(4, 2);
    cols << x, 2 * x;
    CHECK((op.apply_columns(cols) - op.materialize() * cols).norm() < 1e-12);
  }
}

TEST_CASE("Laplacian stencil and spectrum") {
  const LinOperator lap = LinOperator::laplacian1d(0.0, std::numbers::pi, 9);
  const Eigen::MatrixXd m = lap.materialize();
  const double h = std::numbers::pi / 10.0;
  CHECK(m(0, 0) == doctest::Approx(-2.0 / (h * h)));
  CHECK(m(0, 1) == doctest::Approx(1.0 / (h * h)));
  CHECK(m(0, 2) == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto ev = laplacian_eigenvalues(std::get<Laplacian1DRepr>(lap.repr()));
  REQUIRE(ev.size() == 9);
  std::vector<double> sorted(ev);
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 9; ++i) CHECK(sorted[i] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-12));
  // The lowest mode approaches -1 as the grid refines.
  const auto fine = laplacian_eigenvalues(Laplacian1DRepr{0.0, std::numbers::pi, 400});
  CHECK(std::fabs(*std::max_element(fine.begin(), fine.end()) + 1.0) < 1e-4);
}

TEST_CASE("resolve inverts lambda I - A") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(5, 5);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
  Eigen::VectorXd diag = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(5, 1.0, 2.0);
  for (const LinOperator& op : {LinOperator::dense(m), LinOperator::diagonal(diag),
                                LinOperator::laplacian1d(0.0, 2.0, 5)}) {
    for (double lambda : {3.5, -7.0, 100.0}) {
      const Eigen::VectorXd x = op.resolve(lambda, y);
      CHECK((lambda * x - op.apply(x) - y).norm() < 1e-10 * y.norm());
      const Eigen::MatrixXd ys = Eigen::MatrixXd::Random(5, 3);
      const Eigen::MatrixXd xs = op.factor(lambda).solve_columns(ys);
      CHECK((lambda * xs - op.apply_columns(xs) - ys).norm() < 1e-10 * ys.norm());
    }
  }
}

TEST_CASE("spectrum points are rejected") {
  Eigen::VectorXd diag(3);
  diag << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(LinOperator::diagonal(diag).resolve(2.0, Eigen::VectorXd::Ones(3)), ResolventSetError);
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(LinOperator::dense(m).factor(1.0), ResolventSetError);
}

TEST_CASE("norms") {
  Eigen::MatrixXd m(2, 2);
  m << 3.0, 0.0, 4.0, 0.0;
  CHECK(spectral_norm(m) == doctest::Approx(5.0).epsilon(1e-14));
  Eigen::VectorXd diag(3);
  diag << -4.0, 1.0, 2.0;
  CHECK(LinOperator::diagonal(diag).norm_estimate() == doctest::Approx(4.0));
  CHECK(LinOperator::zero(3).norm_estimate() == 0.0);
  const double lap = LinOperator::laplacian1d(0.0, 1.0, 30).norm_estimate();
  CHECK(lap == doctest::Approx(4.0 * 31 * 31 * std::pow(std::cos(std::numbers::pi / 62.0), 2)).epsilon(1e-6));
}

TEST_CASE("sign structure") {
  Eigen::VectorXd pos(2), neg(2);
  pos << 0.1, 0.2;
  neg << 0.1, -0.2;
  CHECK(LinOperator::diagonal(pos).entrywise_nonneg());
  CHECK_FALSE(LinOperator::diagonal(neg).entrywise_nonneg());
  CHECK_FALSE(LinOperator::laplacian1d(0.0, 1.0, 3).entrywise_nonneg());
}
