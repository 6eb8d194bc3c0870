#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "sqkit/errors.hpp"

namespace sqkit {

using Matrix = std::vector<std::vector<double>>;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues and orthonormal eigenvectors (as rows of `vectors`),
/// unordered.
inline void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw ParamError("jacobi_eigen: matrix must be square");
  }
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-24) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vpk = vectors[p][k], vqk = vectors[q][k];
          vectors[p][k] = c * vpk - s * vqk;
          vectors[q][k] = s * vpk + c * vqk;
        }
      }
    }
  }

  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i];
}

/// PCA projection fitted on (already standardized) training rows.
struct PcaModel {
  std::vector<double> mean;                  // feature means of the fit data
  Matrix components;                          // k rows, orthonormal
  std::vector<double> explained_variance;     // eigenvalues, descending
  std::vector<double> explained_fraction;     // eigenvalue / total, descending
  std::size_t informative = 0;                // eigenvalues above rank tolerance
};

/// Eigendecomposition of the sample covariance. Components are ordered by
/// descending eigenvalue; the sign convention makes the largest-magnitude
/// entry of each component positive so outputs are stable.
inline PcaModel pca_fit(const Matrix& rows, std::size_t k) {
  const std::size_t m = rows.size();
  if (m < 2) throw ParamError("pca_fit: need at least 2 rows");
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw ParamError("pca_fit: ragged rows");
  }
  if (k > d) throw ParamError("pca_fit: k exceeds feature count");
  if (m < d) throw ParamError("pca_fit: need at least as many rows as features");

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += r[j];
  }
  for (double& v : model.mean) v /= static_cast<double>(m);

  Matrix cov(d, std::vector<double>(d, 0.0));
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = r[i] - model.mean[i];
      for (std::size_t j = i; j < d; ++j) cov[i][j] += di * (r[j] - model.mean[j]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i][j] /= static_cast<double>(m - 1);
      cov[j][i] = cov[i][j];
    }
  }

  std::vector<double> values;
  Matrix vectors;
  jacobi_eigen(cov, values, vectors);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] > values[b] : a < b;
  });

  double total = 0.0;
  for (double v : values) total += std::max(v, 0.0);
  const double rank_tol = 1e-12 * std::max(1.0, values[order[0]]);

  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t src = order[r];
    std::vector<double> comp = vectors[src];
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(comp[j]) > std::abs(comp[arg])) arg = j;
    }
    if (comp[arg] < 0.0) {
      for (double& v : comp) v = -v;
    }
    if (values[src] > rank_tol) ++model.informative;
    if (r < k) {
      model.components.push_back(std::move(comp));
      model.explained_variance.push_back(values[src]);
      model.explained_fraction.push_back(total > 0.0 ? std::max(values[src], 0.0) / total : 0.0);
    }
  }
  return model;
}

inline std::vector<double> pca_project(const PcaModel& model, const std::vector<double>& row) {
  if (row.size() != model.mean.size()) throw ParamError("pca_project: wrong row length");
  std::vector<double> out(model.components.size(), 0.0);
  for (std::size_t c = 0; c < model.components.size(); ++c) {
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      acc += model.components[c][j] * (row[j] - model.mean[j]);
    }
    out[c] = acc;
  }
  return out;
}

}  // namespace sqkit
