#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roughlab/rough_path.hpp"

namespace roughlab {

/// Shape of the value space of a controlled path: rows x cols matrices.
/// Plain vector-valued paths use cols == 1.
struct ValueShape {
  std::size_t rows = 1;
  std::size_t cols = 1;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(ValueShape, ValueShape) = default;
};

/// An X-controlled rough path (Y, Y') sampled on the grid of its base.
///
/// Node k stores Y(t_k) as a rows x cols block (index a * cols + b) and the
/// Gubinelli derivative Y'(t_k) as a rows x cols x d block
/// (index (a * cols + b) * d + i), where d is the base dimension.
class ControlledPath {
 public:
  ControlledPath(RoughPathPtr base, ValueShape shape, std::vector<double> values,
                 std::vector<double> derivatives);

  /// (X, id): the driver itself, controlled by its own rough path.
  static ControlledPath identity(RoughPathPtr base);

  /// A constant path with zero derivative.
  static ControlledPath constant(RoughPathPtr base, ValueShape shape, std::span<const double> value);

  const RoughPath& base() const { return *base_; }
  const RoughPathPtr& base_ptr() const { return base_; }
  const Grid& grid() const { return base_->grid(); }
  ValueShape shape() const { return shape_; }
  std::size_t dim() const { return base_->dim(); }
  std::size_t cells() const { return base_->cells(); }
  std::size_t nodes() const { return base_->cells() + 1; }
  double alpha() const { return base_->alpha(); }
  std::size_t value_size() const { return shape_.size(); }
  std::size_t derivative_size() const { return shape_.size() * dim(); }

  std::span<const double> value(std::size_t k) const {
    return {values_.data() + k * value_size(), value_size()};
  }
  std::span<const double> derivative(std::size_t k) const {
    return {derivs_.data() + k * derivative_size(), derivative_size()};
  }
  std::span<const double> values() const { return values_; }
  std::span<const double> derivatives() const { return derivs_; }

  /// Restriction to nodes first..last on the correspondingly windowed base.
  ControlledPath window(std::size_t first, std::size_t last) const;

  /// Same (Y, Y') data on another base with an identical grid.
  ControlledPath rebased(RoughPathPtr base) const;

 private:
  RoughPathPtr base_;
  ValueShape shape_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

/// True when both paths are controlled by the same rough path (same object or
/// identical data).
bool same_base(const ControlledPath& a, const ControlledPath& b);

struct Remainders {
  std::vector<double> r0;  // Y_{s,t} - Y'_s X_{s,t}, rows x cols
  std::vector<double> r1;  // Y'_{s,t}, rows x cols x d
};

/// Remainders of Y over the grid pair (t_i, t_j).
Remainders remainders(const ControlledPath& y, std::size_t i, std::size_t j);

}  // namespace roughlab
