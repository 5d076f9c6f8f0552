#include "roughlab/controlled_path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughlab/error.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {

ControlledPath::ControlledPath(RoughPathPtr base, ValueShape shape, std::vector<double> values,
                               std::vector<double> derivatives)
    : base_(std::move(base)), shape_(shape), values_(std::move(values)), derivs_(std::move(derivatives)) {
  if (!base_) throw InvalidArgument("core", "controlled path needs a base rough path");
  if (shape_.rows == 0 || shape_.cols == 0) {
    throw InvalidArgument("core", "controlled path value shape must be nonempty");
  }
  if (values_.size() != nodes() * value_size()) {
    throw InvalidArgument("core", "controlled path expects " + std::to_string(nodes() * value_size()) +
                                      " values, got " + std::to_string(values_.size()));
  }
  if (derivs_.size() != nodes() * derivative_size()) {
    throw InvalidArgument("core", "controlled path expects " +
                                      std::to_string(nodes() * derivative_size()) +
                                      " derivative entries, got " + std::to_string(derivs_.size()));
  }
}

ControlledPath ControlledPath::identity(RoughPathPtr base) {
  const std::size_t d = base->dim();
  const std::size_t n1 = base->cells() + 1;
  std::vector<double> y(base->values().begin(), base->values().end());
  std::vector<double> dy(n1 * d * d, 0.0);
  for (std::size_t k = 0; k < n1; ++k) {
    for (std::size_t a = 0; a < d; ++a) dy[k * d * d + a * d + a] = 1.0;
  }
  return ControlledPath(std::move(base), ValueShape{d, 1}, std::move(y), std::move(dy));
}

ControlledPath ControlledPath::constant(RoughPathPtr base, ValueShape shape,
                                        std::span<const double> value) {
  if (value.size() != shape.size()) {
    throw InvalidArgument("core", "constant path: value size does not match shape");
  }
  const std::size_t n1 = base->cells() + 1;
  const std::size_t d = base->dim();
  std::vector<double> y(n1 * shape.size());
  for (std::size_t k = 0; k < n1; ++k) std::copy(value.begin(), value.end(), y.begin() + k * shape.size());
  std::vector<double> dy(n1 * shape.size() * d, 0.0);
  return ControlledPath(std::move(base), shape, std::move(y), std::move(dy));
}

ControlledPath ControlledPath::window(std::size_t first, std::size_t last) const {
  auto b = base_->window(first, last);
  const std::size_t vs = value_size();
  const std::size_t ds = derivative_size();
  std::vector<double> y(values_.begin() + static_cast<std::ptrdiff_t>(first * vs),
                        values_.begin() + static_cast<std::ptrdiff_t>((last + 1) * vs));
  std::vector<double> dy(derivs_.begin() + static_cast<std::ptrdiff_t>(first * ds),
                         derivs_.begin() + static_cast<std::ptrdiff_t>((last + 1) * ds));
  return ControlledPath(std::move(b), shape_, std::move(y), std::move(dy));
}

ControlledPath ControlledPath::rebased(RoughPathPtr base) const {
  if (!base || !(base->grid() == grid()) || base->dim() != dim()) {
    throw InvalidArgument("core", "rebased: new base must share grid and dimension");
  }
  return ControlledPath(std::move(base), shape_, values_, derivs_);
}

bool same_base(const ControlledPath& a, const ControlledPath& b) {
  return a.base_ptr() == b.base_ptr() || a.base().same_data(b.base());
}

Remainders remainders(const ControlledPath& y, std::size_t i, std::size_t j) {
  const std::size_t n = y.cells();
  if (j > n || i > j) {
    throw InvalidArgument("core", "remainders: need 0 <= i <= j <= n, got i=" + std::to_string(i) +
                                      " j=" + std::to_string(j));
  }
  const std::size_t d = y.dim();
  const auto xi = y.base().value(i);
  const auto xj = y.base().value(j);
  std::vector<double> dx(d);
  for (std::size_t p = 0; p < d; ++p) dx[p] = xj[p] - xi[p];

  Remainders out{std::vector<double>(y.value_size()), std::vector<double>(y.derivative_size())};
  const auto yi = y.value(i);
  const auto yj = y.value(j);
  tensor::matvec(y.derivative(i), dx, out.r0);
  for (std::size_t a = 0; a < out.r0.size(); ++a) out.r0[a] = (yj[a] - yi[a]) - out.r0[a];
  const auto di = y.derivative(i);
  const auto dj = y.derivative(j);
  for (std::size_t a = 0; a < out.r1.size(); ++a) out.r1[a] = dj[a] - di[a];
  return out;
}

}  // namespace roughlab
