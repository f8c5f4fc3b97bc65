#pragma once

// Low-dimensional coordinates from a distance matrix: classical (Torgerson)
// scaling as the starting point, then stress majorisation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/labeled_matrix.hpp"

namespace teflow {

/// Row-major N x dims coordinates.
struct Embedding {
  std::vector<std::string> labels;
  std::size_t dims = 2;
  std::vector<double> coords;
  double stress = 0.0;

  double& at(std::size_t i, std::size_t a) { return coords[i * dims + a]; }
  double at(std::size_t i, std::size_t a) const { return coords[i * dims + a]; }

  double distance(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t a = 0; a < dims; ++a) {
      const double diff = at(i, a) - at(j, a);
      s += diff * diff;
    }
    return std::sqrt(s);
  }
};

/// Kruskal stress-1: sqrt( sum_{i<j} (d_ij - e_ij)^2 / sum_{i<j} d_ij^2 ) with
/// e_ij the Euclidean distance between embedded points.
inline double stress(const std::vector<double>& coords, std::size_t dims, const LabeledMatrix& dist) {
  const std::size_t n = dist.size();
  require(dims > 0 && coords.size() == n * dims, ErrorCode::ShapeMismatch,
          "coordinates do not match a " + std::to_string(n) + "-point distance matrix");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double e = 0.0;
      for (std::size_t a = 0; a < dims; ++a) {
        const double diff = coords[i * dims + a] - coords[j * dims + a];
        e += diff * diff;
      }
      const double r = dist(i, j) - std::sqrt(e);
      num += r * r;
      den += dist(i, j) * dist(i, j);
    }
  }
  require(den > 0.0, ErrorCode::DegenerateInput, "all target distances are zero");
  return std::sqrt(num / den);
}

inline double stress(const Embedding& e, const LabeledMatrix& dist) { return stress(e.coords, e.dims, dist); }

namespace detail {

inline void symmetric_matvec(const std::vector<double>& a, std::size_t n, const std::vector<double>& x,
                             std::vector<double>& y) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = &a[i * n];
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

/// Leading eigenpairs of a symmetric matrix by power iteration with
/// deflation. The matrix is first shifted by a Gershgorin bound so that it is
/// positive semidefinite, which makes "largest" mean algebraically largest.
inline std::vector<EigenPair> top_eigenpairs(std::vector<double> a, std::size_t n, std::size_t count,
                                             std::size_t max_iters = 20000, double tol = 1e-14) {
  double shift = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) off += std::abs(a[i * n + j]);
    shift = std::max(shift, off - a[i * n + i]);
    scale = std::max(scale, off + std::abs(a[i * n + i]));
  }
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] += shift;
  scale = std::max(scale + shift, 1e-300);

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<EigenPair> pairs;
  std::vector<double> x(n), y(n);
  for (std::size_t p = 0; p < count; ++p) {
    for (double& v : x) v = unif(rng);
    double mu = 0.0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
      double norm = 0.0;
      for (double v : x) norm += v * v;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (double& v : x) v /= norm;
      symmetric_matvec(a, n, x, y);
      mu = 0.0;
      for (std::size_t i = 0; i < n; ++i) mu += x[i] * y[i];
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) resid += (y[i] - mu * x[i]) * (y[i] - mu * x[i]);
      x.swap(y);
      if (std::sqrt(resid) <= tol * scale) break;
    }
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : x) v /= norm;
    // Fix the sign: largest-magnitude component positive.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(x[i]) > std::abs(x[arg])) arg = i;
    if (x[arg] < 0.0)
      for (double& v : x) v = -v;
    symmetric_matvec(a, n, x, y);
    mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += x[i] * y[i];

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] -= mu * x[i] * x[j];
    pairs.push_back({mu - shift, x});
  }
  return pairs;
}

}  // namespace detail

/// Classical scaling: double-centre the squared distances, keep the top-dims
/// eigenpairs, scale eigenvectors by sqrt(eigenvalue). Negative eigenvalues
/// are truncated to zero, which collapses that axis.
inline Embedding classical_mds(const LabeledMatrix& dist, std::size_t dims = 2) {
  require_kind(dist, MatrixKind::Distance);
  const std::size_t n = dist.size();
  require(dims >= 1, ErrorCode::InvalidArgument, "embedding dimension must be positive");
  require(n >= dims + 1, ErrorCode::ShapeTooSmall,
          "need at least " + std::to_string(dims + 1) + " points for a " + std::to_string(dims) + "-D embedding");

  bool any = false;
  for (double v : dist.data()) any = any || v != 0.0;
  require(any, ErrorCode::DegenerateInput, "all distances are zero");

  // Squares are averaged with the transpose so slightly asymmetric input
  // still gives a symmetric B.
  std::vector<double> b(n * n);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double sq = 0.5 * (dist(i, j) * dist(i, j) + dist(j, i) * dist(j, i));
      b[i * n + j] = sq;
      row_mean[i] += sq;
    }
  for (double& m : row_mean) {
    grand += m;
    m /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i * n + j] = -0.5 * (b[i * n + j] - row_mean[i] - row_mean[j] + grand);
  const auto pairs = detail::top_eigenpairs(std::move(b), n, dims);
  Embedding e;
  e.labels = dist.labels();
  e.dims = dims;
  e.coords.assign(n * dims, 0.0);
  for (std::size_t a = 0; a < dims; ++a) {
    const double lambda = std::max(0.0, pairs[a].value);
    const double s = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) e.at(i, a) = s * pairs[a].vector[i];
  }
  e.stress = stress(e, dist);
  return e;
}

/// One Guttman transform with unit weights: X' = B(X) X / n, where
/// B_ij = -d_ij / e_ij (0 when e_ij = 0) and B_ii = -sum_{j != i} B_ij.
inline std::vector<double> guttman_step(const std::vector<double>& coords, std::size_t dims, const LabeledMatrix& dist) {
  const std::size_t n = dist.size();
  require(dims > 0 && coords.size() == n * dims, ErrorCode::ShapeMismatch, "embedding does not match the distance matrix");
  std::vector<double> next(n * dims, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double e = 0.0;
      for (std::size_t a = 0; a < dims; ++a) {
        const double diff = coords[i * dims + a] - coords[j * dims + a];
        e += diff * diff;
      }
      e = std::sqrt(e);
      const double bij = e > 0.0 ? -dist(i, j) / e : 0.0;
      diag -= bij;
      for (std::size_t a = 0; a < dims; ++a) next[i * dims + a] += bij * coords[j * dims + a];
    }
    for (std::size_t a = 0; a < dims; ++a) next[i * dims + a] += diag * coords[i * dims + a];
  }
  for (double& v : next) v /= static_cast<double>(n);
  return next;
}

struct RefineOptions {
  std::size_t max_iters = 500;
  double tol = 1e-9;  // stop when the relative stress improvement drops below this
};

/// Stress majorisation from a starting embedding. Stress never increases: a
/// step that would raise it (possible only through rounding) ends the loop
/// and the best embedding so far is returned. When `trace` is given it
/// receives the starting stress and the stress after each accepted step.
inline Embedding refine(const Embedding& start, const LabeledMatrix& dist, RefineOptions opts = {},
                        std::vector<double>* trace = nullptr) {
  require_kind(dist, MatrixKind::Distance);
  require(start.coords.size() == dist.size() * start.dims, ErrorCode::ShapeMismatch,
          "embedding does not match the distance matrix");

  Embedding best = start;
  best.labels = dist.labels();
  best.stress = stress(best, dist);
  if (trace) trace->push_back(best.stress);

  for (std::size_t iter = 0; iter < opts.max_iters && best.stress > 0.0; ++iter) {
    auto next = guttman_step(best.coords, best.dims, dist);
    const double s = stress(next, best.dims, dist);
    if (!(s <= best.stress)) break;
    const double improvement = (best.stress - s) / best.stress;
    best.coords = std::move(next);
    best.stress = s;
    if (trace) trace->push_back(s);
    if (improvement < opts.tol) break;
  }
  return best;
}

/// classical_mds followed by refine.
inline Embedding embed(const LabeledMatrix& dist, std::size_t dims = 2, RefineOptions opts = {}) {
  return refine(classical_mds(dist, dims), dist, opts);
}

}  // namespace teflow
