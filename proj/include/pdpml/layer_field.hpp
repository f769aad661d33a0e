#pragma once

#include "grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace pdpml {

/// Inclusive box of centred node indices.
struct Box {
  int lo1, hi1, lo2, hi2;
  bool contains(int i1, int i2) const { return i1 >= lo1 && i1 <= hi1 && i2 >= lo2 && i2 <= hi2; }
  int rows() const { return hi1 - lo1 + 1; }
  int cols() const { return hi2 - lo2 + 1; }
};

/// Field stored on a few disjoint boxes and zero everywhere else.
template <typename Scalar>
class LayerField {
 public:
  LayerField() = default;
  explicit LayerField(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
    for (const Box& b : boxes_) data_.push_back(Field<Scalar>::Zero(b.rows(), b.cols()));
  }

  Scalar operator()(int i1, int i2) const {
    for (std::size_t b = 0; b < boxes_.size(); ++b)
      if (boxes_[b].contains(i1, i2)) return data_[b](i1 - boxes_[b].lo1, i2 - boxes_[b].lo2);
    return Scalar(0);
  }
  /// Reference to a stored node; the node must lie in one of the boxes.
  Scalar& ref(int i1, int i2) {
    for (std::size_t b = 0; b < boxes_.size(); ++b)
      if (boxes_[b].contains(i1, i2)) return data_[b](i1 - boxes_[b].lo1, i2 - boxes_[b].lo2);
    throw std::out_of_range("node outside the layer field support");
  }

  const std::vector<Box>& boxes() const { return boxes_; }
  std::vector<Field<Scalar>>& data() { return data_; }
  const std::vector<Field<Scalar>>& data() const { return data_; }

  void set_zero() {
    for (auto& d : data_) d.setZero();
  }
  /// this += s * other (same geometry).
  void add_scaled(const LayerField& other, Scalar s) {
    for (std::size_t b = 0; b < data_.size(); ++b) data_[b] += s * other.data_[b];
  }
  bool is_zero() const {
    for (const auto& d : data_)
      if (!(d == Scalar(0)).all()) return false;
    return true;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& d : data_)
      if (d.size()) m = std::max(m, static_cast<double>(d.abs().maxCoeff()));
    return m;
  }
  bool all_finite() const {
    for (const auto& d : data_)
      if (!d.allFinite()) return false;
    return true;
  }

 private:
  std::vector<Box> boxes_;
  std::vector<Field<Scalar>> data_;
};

/// The two layer strips n < |i_axis| <= n + n_p over the full other axis.
std::vector<Box> slab_boxes(const GridConfig& g, int axis);
/// The four n_p x n_p corner blocks.
std::vector<Box> corner_boxes(const GridConfig& g);

}  // namespace pdpml
