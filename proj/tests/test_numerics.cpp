#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spinchain/numerics.hpp"

using namespace spinchain;

namespace {

Matrix random_antisymmetric(int dim, double scale, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      m(i, j) = dist(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

}  // namespace

TEST_CASE("binary entropy values and limits", "[numerics]") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // independent evaluation of -x log2 x - (1-x) log2(1-x) at x = 1/4:
  // 2 - (3/4) log2 3
  CHECK(binary_entropy(0.25) == Catch::Approx(2.0 - 0.75 * std::log2(3.0)).margin(1e-14));
  CHECK(binary_entropy(-1e-12) == 0.0);  // roundoff clamp
  CHECK(binary_entropy(1.0 + 1e-12) == 0.0);
  CHECK_THROWS_AS(binary_entropy(-1e-3), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_CASE("binary entropy is symmetric and concave on a grid", "[numerics]") {
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    CHECK(binary_entropy(x) == Catch::Approx(binary_entropy(1.0 - x)).margin(1e-12));
  }
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = dist(rng), y = dist(rng);
    const double mid = binary_entropy((x + y) / 2.0);
    CHECK(mid >= (binary_entropy(x) + binary_entropy(y)) / 2.0 - 1e-12);
  }
}

TEST_CASE("antisymmetric spectrum closed forms", "[numerics]") {
  const double a = 0.37;
  Matrix m(2, 2);
  m << 0, a, -a, 0;
  const auto nu = antisymmetric_spectrum(AntisymmetricMatrix(m));
  REQUIRE(nu.values.size() == 1);
  CHECK(nu.values[0] == Catch::Approx(a).margin(1e-14));

  const auto zero = antisymmetric_spectrum(AntisymmetricMatrix(Matrix::Zero(6, 6)));
  REQUIRE(zero.values.size() == 3);
  for (const double v : zero.values) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("antisymmetric spectrum matches a generic eigensolver", "[numerics]") {
  const Matrix m = random_antisymmetric(6, 0.15, 42);
  const auto nu = antisymmetric_spectrum(AntisymmetricMatrix(m));
  // independent route: non-symmetric complex eigensolver on m itself,
  // eigenvalues +-i nu
  Eigen::ComplexEigenSolver<CMatrix> es(m.cast<std::complex<double>>());
  std::vector<double> imag;
  for (Eigen::Index i = 0; i < 6; ++i)
    if (es.eigenvalues()(i).imag() > 0) imag.push_back(es.eigenvalues()(i).imag());
  std::sort(imag.begin(), imag.end(), std::greater<>());
  REQUIRE(imag.size() == nu.values.size());
  for (size_t i = 0; i < imag.size(); ++i)
    CHECK(nu.values[i] == Catch::Approx(imag[i]).margin(1e-12));
}

TEST_CASE("antisymmetric spectrum is permutation invariant", "[numerics]") {
  const Matrix m = random_antisymmetric(8, 0.1, 99);
  std::mt19937 rng(3);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(8);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + 8, rng);
  const Matrix permuted = perm.transpose() * m * perm;
  const auto nu1 = antisymmetric_spectrum(AntisymmetricMatrix(m));
  const auto nu2 = antisymmetric_spectrum(AntisymmetricMatrix(permuted));
  for (size_t i = 0; i < nu1.values.size(); ++i)
    CHECK(nu1.values[i] == Catch::Approx(nu2.values[i]).margin(1e-12));
}

TEST_CASE("antisymmetric spectrum contract violations", "[numerics]") {
  Matrix bad(2, 2);
  bad << 0, 1.0, -1.0 + 1e-6, 0;
  CHECK_THROWS_AS(AntisymmetricMatrix(bad), std::invalid_argument);

  Matrix large(2, 2);
  large << 0, 2.0, -2.0, 0;  // nu = 2: not a correlation matrix
  CHECK_THROWS_AS(antisymmetric_spectrum(AntisymmetricMatrix(large)), std::domain_error);

  CHECK_THROWS_AS(antisymmetric_spectrum(AntisymmetricMatrix(Matrix::Zero(3, 3))),
                  std::invalid_argument);
}

TEST_CASE("stable sech", "[numerics]") {
  CHECK(stable_sech(0.0) == 1.0);
  CHECK(stable_sech(1.0) == Catch::Approx(1.0 / std::cosh(1.0)).margin(1e-15));
  CHECK(stable_sech(-4.2) == Catch::Approx(1.0 / std::cosh(4.2)).margin(1e-15));
  const double huge = stable_sech(1000.0);
  CHECK(std::isfinite(huge));
  CHECK(huge >= 0.0);
  CHECK(huge < 1e-300);
  CHECK(stable_sech(500.0) == Catch::Approx(2.0 * std::exp(-500.0)).epsilon(1e-12));
  CHECK(std::isfinite(stable_sech(std::numeric_limits<double>::infinity())));
}

TEST_CASE("log law fit recovers exact lines", "[numerics]") {
  std::vector<std::pair<double, double>> pts;
  for (const double b : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
    pts.emplace_back(b, std::log2(b) / 3.0 + 1.17);
  const auto fit = fit_log_law(pts, 0.5, 32.0);
  CHECK(fit.c == Catch::Approx(1.0).margin(1e-12));
  CHECK(fit.c_prime == Catch::Approx(1.17).margin(1e-12));
  CHECK(fit.rms_residual < 1e-12);

  std::vector<std::pair<double, double>> flat;
  for (const double b : {1.0, 2.0, 4.0}) flat.emplace_back(b, 2.0);
  const auto cfit = fit_log_law(flat, 1.0, 4.0);
  CHECK(cfit.c == Catch::Approx(0.0).margin(1e-13));
  CHECK(cfit.c_prime == Catch::Approx(2.0).margin(1e-13));
}

TEST_CASE("log law fit window and noise behavior", "[numerics]") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  const double c_true = 0.5, cp_true = 0.75;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 40; ++i) {
    const double b = std::pow(2.0, i / 39.0 * 6.0);  // [1, 64]
    pts.emplace_back(b, c_true / 3.0 * std::log2(b) + cp_true + noise(rng));
  }
  const auto fit = fit_log_law(pts, 1.0, 64.0);
  CHECK(std::abs(fit.c - c_true) < 0.02);
  CHECK(std::abs(fit.c_prime - cp_true) < 0.02);

  // window restricts the usable points
  CHECK_THROWS_AS(fit_log_law(pts, 100.0, 200.0), std::invalid_argument);
  std::vector<std::pair<double, double>> bad{{-1.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  CHECK_THROWS_AS(fit_log_law(bad, 0.5, 4.0), std::domain_error);
}

TEST_CASE("log law fit exact recovery property", "[numerics]") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> cd(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = cd(rng), cp = cd(rng);
    std::vector<std::pair<double, double>> pts;
    for (const double b : {0.7, 1.3, 2.9, 6.1, 13.0, 28.0})
      pts.emplace_back(b, c / 3.0 * std::log2(b) + cp);
    const auto fit = fit_log_law(pts, 0.5, 30.0);
    CHECK(std::abs(fit.c - c) < 1e-12);
    CHECK(std::abs(fit.c_prime - cp) < 1e-12);
  }
}
