#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "teflow/error.hpp"

namespace teflow {

enum class MatrixKind { Correlation, Distance, Te, Rte, Ete, Nte, Binary };

inline std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Correlation: return "correlation";
    case MatrixKind::Distance: return "distance";
    case MatrixKind::Te: return "te";
    case MatrixKind::Rte: return "rte";
    case MatrixKind::Ete: return "ete";
    case MatrixKind::Nte: return "nte";
    case MatrixKind::Binary: return "binary";
  }
  return "unknown";
}

inline MatrixKind parse_matrix_kind(const std::string& text) {
  for (auto k : {MatrixKind::Correlation, MatrixKind::Distance, MatrixKind::Te, MatrixKind::Rte, MatrixKind::Ete,
                 MatrixKind::Nte, MatrixKind::Binary})
    if (to_string(k) == text) return k;
  fail(ErrorCode::ParseError, "unknown matrix kind '" + text + "'");
}

/// True for the information-flow kinds, which are directed and read
/// row = source, column = destination.
inline bool is_flow_kind(MatrixKind kind) {
  return kind == MatrixKind::Te || kind == MatrixKind::Rte || kind == MatrixKind::Ete || kind == MatrixKind::Nte;
}

/// Square matrix keyed by column labels. For flow kinds, (s, d) holds the
/// flow from label s to label d.
class LabeledMatrix {
 public:
  LabeledMatrix() = default;

  LabeledMatrix(std::vector<std::string> labels, MatrixKind kind, double fill = 0.0)
      : labels_(std::move(labels)), kind_(kind), values_(labels_.size() * labels_.size(), fill) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) require(seen.insert(l).second, ErrorCode::DuplicateLabel, "duplicate label '" + l + "'");
  }

  std::size_t size() const { return labels_.size(); }
  MatrixKind kind() const { return kind_; }
  void set_kind(MatrixKind kind) { kind_ = kind; }
  const std::vector<std::string>& labels() const { return labels_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * labels_.size() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * labels_.size() + c]; }

  const std::vector<double>& data() const { return values_; }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    fail(ErrorCode::UnknownLabel, "no matrix label '" + label + "'");
  }

  bool has_label(const std::string& label) const {
    for (const auto& l : labels_)
      if (l == label) return true;
    return false;
  }

 private:
  std::vector<std::string> labels_;
  MatrixKind kind_ = MatrixKind::Te;
  std::vector<double> values_;
};

inline void require_same_labels(const LabeledMatrix& a, const LabeledMatrix& b) {
  require(a.labels() == b.labels(), ErrorCode::LabelMismatch, "matrices are keyed by different labels");
}

inline void require_kind(const LabeledMatrix& m, MatrixKind kind) {
  require(m.kind() == kind, ErrorCode::KindMismatch,
          "expected a " + to_string(kind) + " matrix, got " + to_string(m.kind()));
}

}  // namespace teflow
