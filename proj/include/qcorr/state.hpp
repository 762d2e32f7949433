#pragma once

#include <map>
#include <string>
#include <utility>

#include "qcorr/layout.hpp"
#include "qcorr/types.hpp"

namespace qcorr {

/// Dense Hermitian PSD operator with trace in (0, 1], carried on a labeled
/// tensor-factor layout. Cone elements (trace < 1) are first-class.
class MultipartiteState {
 public:
  MultipartiteState(Mat matrix, SubsystemLayout layout)
      : m_(std::move(matrix)), layout_(std::move(layout)) {
    validate();
    trace_ = m_.trace().real();
  }

  /// Construction bypassing the Hermitian/PSD checks, for internal ops that
  /// preserve these invariants exactly.
  static MultipartiteState trusted(Mat matrix, SubsystemLayout layout) {
    return MultipartiteState(std::move(matrix), std::move(layout), Trusted{});
  }

  const Mat& matrix() const { return m_; }
  const SubsystemLayout& layout() const { return layout_; }
  long dim() const { return m_.rows(); }
  double trace_weight() const { return trace_; }
  bool is_state() const { return std::abs(trace_ - 1.0) <= tols().trace; }

 private:
  struct Trusted {};
  MultipartiteState(Mat matrix, SubsystemLayout layout, Trusted)
      : m_(std::move(matrix)), layout_(std::move(layout)) {
    trace_ = m_.trace().real();
  }

  void validate() const;

  Mat m_;
  SubsystemLayout layout_;
  double trace_ = 0.0;
};

/// Per-label orthogonal projectors; labels absent from the family act as
/// identity.
class ProjectorFamily {
 public:
  ProjectorFamily() = default;

  void set(const std::string& label, Mat projector);
  bool has(const std::string& label) const {
    return projectors_.count(label) > 0;
  }
  const Mat& get(const std::string& label) const {
    return projectors_.at(label);
  }
  int rank(const std::string& label) const { return ranks_.at(label); }
  const std::map<std::string, Mat>& all() const { return projectors_; }

 private:
  std::map<std::string, Mat> projectors_;
  std::map<std::string, int> ranks_;
};

}  // namespace qcorr
