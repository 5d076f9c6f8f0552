#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughlab/controlled_path.hpp"

namespace roughlab {

/// Bounds on ‖F‖_∞, ‖DF‖_∞, ‖D²F‖_∞, ‖D³F‖_∞ (Frobenius norms).
struct CbNorms {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
  double d3f = 0.0;
  bool sampled = false;  // estimated from probe points rather than proven
};

/// F : R^m -> R^{m x q} with its first two derivatives.
///
/// Layouts (row-major):
///   eval    F_ab          at a * q + b
///   deriv1  ∂_c F_ab      at (a * q + b) * m + c
///   deriv2  ∂_c ∂_e F_ab  at ((a * q + b) * m + c) * m + e
class VectorField {
 public:
  using Map = std::function<void(std::span<const double> y, std::span<double> out)>;

  /// When `check` is set, deriv1 and deriv2 are compared against central
  /// differences at pseudo-random probe points and InvalidArgument is thrown
  /// on a mismatch.
  VectorField(std::string name, std::size_t m, std::size_t q, Map eval, Map deriv1, Map deriv2,
              std::optional<CbNorms> cb = std::nullopt, bool check = true);

  const std::string& name() const { return name_; }
  std::size_t m() const { return m_; }
  std::size_t q() const { return q_; }
  std::size_t value_size() const { return m_ * q_; }
  std::size_t deriv1_size() const { return m_ * q_ * m_; }
  std::size_t deriv2_size() const { return m_ * q_ * m_ * m_; }
  const std::optional<CbNorms>& cb_norms() const { return cb_; }

  void eval(std::span<const double> y, std::span<double> out) const { eval_(y, out); }
  void deriv1(std::span<const double> y, std::span<double> out) const { d1_(y, out); }
  void deriv2(std::span<const double> y, std::span<double> out) const { d2_(y, out); }

  std::vector<double> eval(std::span<const double> y) const;
  std::vector<double> deriv1(std::span<const double> y) const;
  std::vector<double> deriv2(std::span<const double> y) const;

 private:
  std::string name_;
  std::size_t m_;
  std::size_t q_;
  Map eval_;
  Map d1_;
  Map d2_;
  std::optional<CbNorms> cb_;
};

/// Largest entrywise |numeric - analytic| / max(1, |analytic|) of the first
/// and second derivatives over `probes` points drawn uniformly from [-2, 2]^m.
struct ConsistencyReport {
  double deriv1 = 0.0;
  double deriv2 = 0.0;
  bool ok(double tol = 1e-5) const { return deriv1 <= tol && deriv2 <= tol; }
};
ConsistencyReport derivative_consistency(const VectorField& f, std::size_t probes = 8, std::uint64_t seed = 0);

/// Field whose derivatives are central differences of `eval`: step
/// eps^{1/3} max(1, |y_c|) for DF and eps^{1/4} max(1, |y_c|) for D²F. Missing
/// C_b norms are estimated by sampling [-4, 4]^m.
VectorField fd_field(std::string name, std::size_t m, std::size_t q, VectorField::Map eval,
                     std::optional<CbNorms> cb = std::nullopt);

/// F(y) = A.
VectorField constant_field(std::size_t m, std::size_t q, std::vector<double> a);

/// F_ab(y) = Σ_c Λ_abc y_c, Λ laid out like deriv1.
VectorField linear_field(std::size_t m, std::size_t q, std::vector<double> lambda);

/// F_ab(y) = scale * tanh(Σ_c Λ_abc y_c).
VectorField tanh_field(std::size_t m, std::size_t q, std::vector<double> lambda, double scale = 1.0);

/// F_ab(y) = scale * sin(Σ_c Λ_abc y_c).
VectorField sin_field(std::size_t m, std::size_t q, std::vector<double> lambda, double scale = 1.0);

/// m = 2, q = omega.size(): F(y)_{:,k} = omega_k J y with J the rotation by π/2.
/// Driven by Z = (X, id) the solution is exp((Σ_k omega_k X^k_{0,t}) J) y_0.
VectorField rotation_field(std::vector<double> omega);

/// (F(Y), DF(Y) Y') with (DF(Y) Y')_{abi} = Σ_c ∂_c F_ab(Y) Y'_ci.
/// Y must be vector-valued with m components.
ControlledPath compose(const VectorField& f, const ControlledPath& y);

/// Explicit majorant of ‖F(Y)‖_{X;α} built from ‖DF‖_∞, ‖D²F‖_∞ and the
/// grid norms of Y and X:
///   A = |Y'_0| + T^α ‖Y'‖_α           (bounds sup |Y'|)
///   B = A ‖X‖_α + T^α ‖R^0‖_{2α}       (bounds ‖Y‖_α)
///   ‖R^{0,F(Y)}‖_{2α} <= ‖DF‖ ‖R^0‖_{2α} + ½ ‖D²F‖ B²
///   ‖R^{1,F(Y)}‖_α    <= ‖DF‖ ‖Y'‖_α + ‖D²F‖ A B
/// Requires C_b norms.
double compose_bound(const VectorField& f, const ControlledPath& y);

}  // namespace roughlab
