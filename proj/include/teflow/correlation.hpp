#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/panel.hpp"
#include "teflow/parallel.hpp"

namespace teflow {

namespace detail {

// Centred, unit-norm copy of a column; Pearson correlation is then a dot
// product.
inline std::vector<double> standardize(std::span<const double> x, const std::string& label) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  std::vector<double> out(x.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] - mean;
    ss += out[i] * out[i];
  }
  require(ss > 0.0 && std::sqrt(ss / n) > 1e-14 * std::max(1.0, std::abs(mean)), ErrorCode::ZeroVariance,
          "column '" + label + "' has zero variance");
  const double inv = 1.0 / std::sqrt(ss);
  for (double& v : out) v *= inv;
  return out;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

inline LabeledMatrix pearson_matrix(const std::vector<std::string>& labels,
                                    const std::vector<std::vector<double>>& columns, const Parallelism& par = {}) {
  require(labels.size() == columns.size(), ErrorCode::ShapeMismatch, "one column per label required");
  const std::size_t N = labels.size();
  for (std::size_t c = 1; c < N; ++c)
    require(columns[c].size() == columns[0].size(), ErrorCode::LengthMismatch, "columns differ in length");
  require(N == 0 || columns[0].size() >= 2, ErrorCode::TooShort, "correlation needs at least two rows");

  std::vector<std::vector<double>> z(N);
  for (std::size_t c = 0; c < N; ++c) z[c] = detail::standardize(columns[c], labels[c]);

  LabeledMatrix out(labels, MatrixKind::Correlation);
  parallel_for(N, par, [&](std::size_t i) {
    out(i, i) = 1.0;
    for (std::size_t j = i + 1; j < N; ++j) out(i, j) = std::clamp(detail::dot(z[i], z[j]), -1.0, 1.0);
  });
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  return out;
}

inline LabeledMatrix pearson_matrix(const ReturnPanel& panel, const Parallelism& par = {}) {
  return pearson_matrix(panel.labels(), panel.all_values(), par);
}

/// d = sqrt(2 (1 - c)).
inline double correlation_to_distance(double c) { return std::sqrt(std::max(0.0, 2.0 * (1.0 - c))); }

inline LabeledMatrix correlation_distance(const LabeledMatrix& corr) {
  require_kind(corr, MatrixKind::Correlation);
  LabeledMatrix out(corr.labels(), MatrixKind::Distance);
  for (std::size_t i = 0; i < corr.size(); ++i)
    for (std::size_t j = 0; j < corr.size(); ++j) out(i, j) = i == j ? 0.0 : correlation_to_distance(corr(i, j));
  return out;
}

/// Distance from normalised transfer entropy: the correlation formula with NTE
/// in place of c, zero diagonal, and the smaller of the two directions kept.
inline LabeledMatrix nte_distance(const LabeledMatrix& nte) {
  require_kind(nte, MatrixKind::Nte);
  const std::size_t N = nte.size();
  LabeledMatrix out(nte.labels(), MatrixKind::Distance);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      const double d = std::min(correlation_to_distance(nte(i, j)), correlation_to_distance(nte(j, i)));
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

}  // namespace teflow
