#pragma once

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "qcorr/types.hpp"

namespace qcorr {

/// Ordered list of labeled tensor factors. Labels are unique, dims >= 1.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;

  SubsystemLayout(std::initializer_list<std::pair<std::string, int>> factors) {
    for (const auto& [l, d] : factors) push_back(l, d);
  }

  SubsystemLayout(std::vector<std::string> labels, std::vector<int> dims) {
    if (labels.size() != dims.size())
      throw layout_error("layout: labels/dims size mismatch");
    for (std::size_t i = 0; i < labels.size(); ++i)
      push_back(labels[i], dims[i]);
  }

  void push_back(const std::string& label, int dim) {
    if (dim < 1) throw layout_error("layout: dim < 1 for label " + label);
    if (contains(label)) throw layout_error("layout: duplicate label " + label);
    labels_.push_back(label);
    dims_.push_back(dim);
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[i]; }
  int dim(int i) const { return dims_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }

  long total_dim() const {
    long d = 1;
    for (int x : dims_) d *= x;
    return d;
  }

  int index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
  }

  bool contains(const std::string& label) const { return index_of(label) >= 0; }

  int dim_of(const std::string& label) const {
    int i = index_of(label);
    if (i < 0) throw layout_error("layout: unknown label " + label);
    return dims_[i];
  }

  long dim_of(const std::vector<std::string>& labels) const {
    long d = 1;
    for (const auto& l : labels) d *= dim_of(l);
    return d;
  }

  /// Factor indices of the given labels, sorted into layout order.
  std::vector<int> indices_of(const std::vector<std::string>& labels) const {
    std::vector<int> idx;
    idx.reserve(labels.size());
    for (const auto& l : labels) {
      int i = index_of(l);
      if (i < 0) throw layout_error("layout: unknown label " + l);
      idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.size() != labels.size())
      throw layout_error("layout: repeated label in selection");
    return idx;
  }

  SubsystemLayout select(const std::vector<int>& indices) const {
    SubsystemLayout out;
    for (int i : indices) out.push_back(labels_[i], dims_[i]);
    return out;
  }

  /// Row-major strides: flat index = sum_i digit_i * stride_i.
  std::vector<long> strides() const {
    std::vector<long> s(labels_.size(), 1);
    for (int i = size() - 2; i >= 0; --i) s[i] = s[i + 1] * dims_[i + 1];
    return s;
  }

  static SubsystemLayout concat(const SubsystemLayout& a,
                                const SubsystemLayout& b) {
    SubsystemLayout out = a;
    for (int i = 0; i < b.size(); ++i) out.push_back(b.label(i), b.dim(i));
    return out;
  }

  bool operator==(const SubsystemLayout& o) const {
    return labels_ == o.labels_ && dims_ == o.dims_;
  }
  bool operator!=(const SubsystemLayout& o) const { return !(*this == o); }

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
};

}  // namespace qcorr
