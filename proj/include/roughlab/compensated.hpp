#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace roughlab {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum.
class NeumaierSum {
 public:
  NeumaierSum() = default;
  explicit NeumaierSum(double init) : sum_(init) {}

  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  NeumaierSum& operator+=(double v) {
    add(v);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Component-wise compensated accumulator for small fixed-size vectors.
class NeumaierVector {
 public:
  explicit NeumaierVector(std::size_t size) : parts_(size) {}

  void add(std::span<const double> v) {
    for (std::size_t k = 0; k < parts_.size(); ++k) parts_[k].add(v[k]);
  }

  std::size_t size() const { return parts_.size(); }

  void value_into(std::span<double> out) const {
    for (std::size_t k = 0; k < parts_.size(); ++k) out[k] = parts_[k].value();
  }

  std::vector<double> value() const {
    std::vector<double> out(parts_.size());
    value_into(out);
    return out;
  }

 private:
  std::vector<NeumaierSum> parts_;
};

}  // namespace roughlab
