#include <catch2/catch_amalgamated.hpp>

#include "sqkit/ml/pca.hpp"
#include "sqkit/rng.hpp"

#include <cmath>

using namespace sqkit;

namespace {

/// Closed-form eigenvalues of a symmetric 3x3 matrix via the characteristic
/// polynomial (trigonometric solution of the depressed cubic). Independent
/// oracle for the Jacobi path.
std::array<double, 3> charpoly_eigenvalues_3x3(const Matrix& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> eig{a[0][0], a[1][1], a[2][2]};
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
  }
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix b(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                       b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                       b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double eig1 = q + 2.0 * p * std::cos(phi);
  const double eig3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  return {eig1, q * 3.0 - eig1 - eig3, eig3};
}

Matrix random_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  Matrix rows(n, std::vector<double>(d));
  for (auto& r : rows) {
    for (double& v : r) v = rng.normal();
  }
  return rows;
}

}  // namespace

TEST_CASE("collinear 2-feature data has one component along (1,1)/sqrt(2)") {
  Matrix rows;
  for (int i = -5; i <= 5; ++i) {
    rows.push_back({static_cast<double>(i), static_cast<double>(i)});
  }
  const PcaModel model = pca_fit(rows, 2);
  REQUIRE(model.components[0][0] == Catch::Approx(std::sqrt(0.5)).margin(1e-9));
  REQUIRE(model.components[0][1] == Catch::Approx(std::sqrt(0.5)).margin(1e-9));
  REQUIRE(model.explained_fraction[0] == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(model.informative == 1);
}

TEST_CASE("explained fractions sum to one at full rank") {
  const Matrix rows = random_rows(40, 6, 2);
  const PcaModel model = pca_fit(rows, 6);
  double sum = 0.0;
  for (double f : model.explained_fraction) sum += f;
  REQUIRE(sum == Catch::Approx(1.0).margin(1e-9));

  const PcaModel partial = pca_fit(rows, 2);
  REQUIRE(partial.explained_fraction.size() == 2);
  REQUIRE(partial.explained_fraction[0] + partial.explained_fraction[1] <= 1.0 + 1e-12);
  REQUIRE(partial.explained_fraction[0] >= partial.explained_fraction[1]);
}

TEST_CASE("jacobi eigenvalues match the characteristic-polynomial oracle") {
  Xoshiro256ss rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        a[i][j] = rng.uniform(-2.0, 2.0);
        a[j][i] = a[i][j];
      }
    }
    std::vector<double> values;
    Matrix vectors;
    jacobi_eigen(a, values, vectors);
    std::sort(values.begin(), values.end(), std::greater<>());

    const auto oracle = charpoly_eigenvalues_3x3(a);
    for (int k = 0; k < 3; ++k) {
      REQUIRE(values[static_cast<std::size_t>(k)] ==
              Catch::Approx(oracle[static_cast<std::size_t>(k)]).margin(1e-8));
    }
  }
}

TEST_CASE("jacobi eigenpairs satisfy A v = lambda v") {
  const Matrix rows = random_rows(30, 4, 3);
  // Build the covariance directly and check the returned pairs.
  Matrix cov(4, std::vector<double>(4, 0.0));
  std::vector<double> mu(4, 0.0);
  for (const auto& r : rows) {
    for (int j = 0; j < 4; ++j) mu[static_cast<std::size_t>(j)] += r[static_cast<std::size_t>(j)];
  }
  for (double& v : mu) v /= 30.0;
  for (const auto& r : rows) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            (r[static_cast<std::size_t>(i)] - mu[static_cast<std::size_t>(i)]) *
            (r[static_cast<std::size_t>(j)] - mu[static_cast<std::size_t>(j)]) / 29.0;
      }
    }
  }
  std::vector<double> values;
  Matrix vectors;
  jacobi_eigen(cov, values, vectors);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < 4; ++j) av += cov[i][j] * vectors[k][j];
      REQUIRE(av == Catch::Approx(values[k] * vectors[k][i]).margin(1e-9));
    }
  }
}

TEST_CASE("components are orthonormal") {
  const Matrix rows = random_rows(50, 6, 4);
  const PcaModel model = pca_fit(rows, 6);
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < 6; ++j) dot += model.components[a][j] * model.components[b][j];
      REQUIRE(dot == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-9));
    }
  }
}

TEST_CASE("sign convention fixes the largest-magnitude entry positive") {
  const Matrix rows = random_rows(50, 5, 6);
  const PcaModel model = pca_fit(rows, 5);
  for (const auto& comp : model.components) {
    double best = 0.0;
    for (double v : comp) {
      if (std::abs(v) > std::abs(best)) best = v;
    }
    REQUIRE(best > 0.0);
  }
}

TEST_CASE("duplicated feature lowers the informative rank") {
  Matrix rows = random_rows(30, 2, 8);
  for (auto& r : rows) r.push_back(r[0]);  // third feature duplicates the first
  const PcaModel model = pca_fit(rows, 3);
  REQUIRE(model.informative == 2);
  REQUIRE(model.explained_variance[2] <= 1e-10);
}

TEST_CASE("projection is centered and ordered by variance") {
  const Matrix rows = random_rows(60, 6, 10);
  const PcaModel model = pca_fit(rows, 2);
  std::vector<double> pc1, pc2;
  for (const auto& r : rows) {
    const auto p = pca_project(model, r);
    pc1.push_back(p[0]);
    pc2.push_back(p[1]);
  }
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < pc1.size(); ++i) {
    m1 += pc1[i];
    m2 += pc2[i];
  }
  m1 /= static_cast<double>(pc1.size());
  m2 /= static_cast<double>(pc2.size());
  REQUIRE(std::abs(m1) <= 1e-9);
  REQUIRE(std::abs(m2) <= 1e-9);

  double v1 = 0.0, v2 = 0.0;
  for (std::size_t i = 0; i < pc1.size(); ++i) {
    v1 += (pc1[i] - m1) * (pc1[i] - m1);
    v2 += (pc2[i] - m2) * (pc2[i] - m2);
  }
  REQUIRE(v1 >= v2);
  REQUIRE(v1 / 59.0 == Catch::Approx(model.explained_variance[0]).margin(1e-9));
}

TEST_CASE("pca_fit validates its inputs") {
  const Matrix rows = random_rows(4, 6, 1);
  REQUIRE_THROWS_AS(pca_fit(rows, 2), ParamError);   // fewer rows than features
  const Matrix ok = random_rows(10, 3, 1);
  REQUIRE_THROWS_AS(pca_fit(ok, 4), ParamError);     // k > d
  REQUIRE_NOTHROW(pca_fit(ok, 3));
}
