#include "roughlab/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "roughlab/error.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/rng.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kStep1 = std::cbrt(kEps);
const double kStep2 = std::pow(kEps, 0.25);

double step(double base, double y) { return base * std::max(1.0, std::abs(y)); }

// Central differences of a map g : R^m -> R^k along each coordinate:
// out[r * m + c] = ∂_c g_r(y).
void central_jacobian(const VectorField::Map& g, std::size_t k, std::span<const double> y,
                      std::span<double> out, double base_step) {
  const std::size_t m = y.size();
  std::vector<double> yp(y.begin(), y.end());
  std::vector<double> plus(k), minus(k);
  for (std::size_t c = 0; c < m; ++c) {
    const double h = step(base_step, y[c]);
    yp[c] = y[c] + h;
    g(yp, plus);
    yp[c] = y[c] - h;
    g(yp, minus);
    yp[c] = y[c];
    const double width = (y[c] + h) - (y[c] - h);
    for (std::size_t r = 0; r < k; ++r) out[r * m + c] = (plus[r] - minus[r]) / width;
  }
}

double max_relative_gap(std::span<const double> numeric, std::span<const double> analytic) {
  double worst = 0.0;
  for (std::size_t k = 0; k < numeric.size(); ++k) {
    worst = std::max(worst, std::abs(numeric[k] - analytic[k]) / std::max(1.0, std::abs(analytic[k])));
  }
  return worst;
}

std::vector<double> probe(std::uint64_t seed, std::size_t index, std::size_t m, double radius) {
  std::vector<double> y(m);
  for (std::size_t c = 0; c < m; ++c) y[c] = radius * (2.0 * uniform_at(seed, index, c) - 1.0);
  return y;
}

void require_size(const std::vector<double>& v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw InvalidArgument("calculus", std::string(what) + ": expected " + std::to_string(expected) +
                                          " entries, got " + std::to_string(v.size()));
  }
}

// F_ab = scale * phi(Σ_c Λ_abc y_c) for a smooth bounded phi.
struct Saturation {
  double (*phi)(double);
  double (*dphi)(double);
  double (*d2phi)(double);
  double sup_phi, sup_dphi, sup_d2phi, sup_d3phi;
};

VectorField saturated(std::string name, std::size_t m, std::size_t q, std::vector<double> lambda, double scale,
                      const Saturation& s) {
  require_size(lambda, m * q * m, name.c_str());
  auto pre = [lambda, m](std::size_t ab, std::span<const double> y) {
    double v = 0.0;
    for (std::size_t c = 0; c < m; ++c) v += lambda[ab * m + c] * y[c];
    return v;
  };
  auto eval = [=](std::span<const double> y, std::span<double> out) {
    for (std::size_t ab = 0; ab < m * q; ++ab) out[ab] = scale * s.phi(pre(ab, y));
  };
  auto d1 = [=](std::span<const double> y, std::span<double> out) {
    for (std::size_t ab = 0; ab < m * q; ++ab) {
      const double g = scale * s.dphi(pre(ab, y));
      for (std::size_t c = 0; c < m; ++c) out[ab * m + c] = g * lambda[ab * m + c];
    }
  };
  auto d2 = [=](std::span<const double> y, std::span<double> out) {
    for (std::size_t ab = 0; ab < m * q; ++ab) {
      const double g = scale * s.d2phi(pre(ab, y));
      for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t e = 0; e < m; ++e) out[(ab * m + c) * m + e] = g * lambda[ab * m + c] * lambda[ab * m + e];
      }
    }
  };
  // |Λ_ab|^k summed over rows gives the Frobenius bound of each derivative.
  double rows = 0.0, p2 = 0.0, p4 = 0.0, p6 = 0.0;
  for (std::size_t ab = 0; ab < m * q; ++ab) {
    double sq = 0.0;
    for (std::size_t c = 0; c < m; ++c) sq += lambda[ab * m + c] * lambda[ab * m + c];
    if (sq > 0.0 || s.phi(0.0) != 0.0) rows += 1.0;
    p2 += sq;
    p4 += sq * sq;
    p6 += sq * sq * sq;
  }
  const double a = std::abs(scale);
  const CbNorms cb{a * s.sup_phi * std::sqrt(rows), a * s.sup_dphi * std::sqrt(p2), a * s.sup_d2phi * std::sqrt(p4),
                   a * s.sup_d3phi * std::sqrt(p6), false};
  return VectorField(std::move(name), m, q, eval, d1, d2, cb);
}

double tanh1(double x) { return std::tanh(x); }
double tanh_d1(double x) {
  const double c = 1.0 / std::cosh(x);
  return c * c;
}
double tanh_d2(double x) { return -2.0 * std::tanh(x) * tanh_d1(x); }
double sin1(double x) { return std::sin(x); }
double sin_d1(double x) { return std::cos(x); }
double sin_d2(double x) { return -std::sin(x); }

}  // namespace

VectorField::VectorField(std::string name, std::size_t m, std::size_t q, Map eval, Map deriv1, Map deriv2,
                         std::optional<CbNorms> cb, bool check)
    : name_(std::move(name)),
      m_(m),
      q_(q),
      eval_(std::move(eval)),
      d1_(std::move(deriv1)),
      d2_(std::move(deriv2)),
      cb_(cb) {
  if (m_ == 0 || q_ == 0) throw InvalidArgument("calculus", "vector field dimensions must be positive");
  if (!eval_ || !d1_ || !d2_) throw InvalidArgument("calculus", "vector field " + name_ + " is incomplete");
  if (check) {
    const auto report = derivative_consistency(*this);
    if (!report.ok()) {
      throw InvalidArgument("calculus", "vector field " + name_ +
                                            " fails the finite-difference check (DF rel. error " +
                                            std::to_string(report.deriv1) + ", D2F rel. error " +
                                            std::to_string(report.deriv2) + ")");
    }
  }
}

std::vector<double> VectorField::eval(std::span<const double> y) const {
  std::vector<double> out(value_size());
  eval_(y, out);
  return out;
}

std::vector<double> VectorField::deriv1(std::span<const double> y) const {
  std::vector<double> out(deriv1_size());
  d1_(y, out);
  return out;
}

std::vector<double> VectorField::deriv2(std::span<const double> y) const {
  std::vector<double> out(deriv2_size());
  d2_(y, out);
  return out;
}

ConsistencyReport derivative_consistency(const VectorField& f, std::size_t probes, std::uint64_t seed) {
  ConsistencyReport report;
  const VectorField::Map eval = [&f](std::span<const double> y, std::span<double> out) { f.eval(y, out); };
  const VectorField::Map d1 = [&f](std::span<const double> y, std::span<double> out) { f.deriv1(y, out); };
  std::vector<double> num1(f.deriv1_size()), num2(f.deriv2_size());
  for (std::size_t k = 0; k < probes; ++k) {
    const auto y = probe(seed, k, f.m(), 2.0);
    central_jacobian(eval, f.value_size(), y, num1, kStep1);
    central_jacobian(d1, f.deriv1_size(), y, num2, kStep1);
    for (const double v : f.deriv1(y)) {
      if (!std::isfinite(v)) return {std::numeric_limits<double>::infinity(), 0.0};
    }
    report.deriv1 = std::max(report.deriv1, max_relative_gap(num1, f.deriv1(y)));
    report.deriv2 = std::max(report.deriv2, max_relative_gap(num2, f.deriv2(y)));
  }
  return report;
}

VectorField fd_field(std::string name, std::size_t m, std::size_t q, VectorField::Map eval,
                     std::optional<CbNorms> cb) {
  if (!eval) throw InvalidArgument("calculus", "fd_field needs an evaluation function");
  const std::size_t k = m * q;
  auto d1 = [eval, k](std::span<const double> y, std::span<double> out) {
    central_jacobian(eval, k, y, out, kStep1);
  };
  auto d2 = [eval, k, m](std::span<const double> y, std::span<double> out) {
    std::vector<double> pos(y.begin(), y.end());
    std::vector<double> fpp(k), fpm(k), fmp(k), fmm(k), f0(k);
    eval(y, f0);
    for (std::size_t c = 0; c < m; ++c) {
      const double hc = step(kStep2, y[c]);
      for (std::size_t e = c; e < m; ++e) {
        if (e == c) {
          pos[c] = y[c] + hc;
          eval(pos, fpp);
          pos[c] = y[c] - hc;
          eval(pos, fmm);
          pos[c] = y[c];
          for (std::size_t r = 0; r < k; ++r) {
            out[(r * m + c) * m + c] = (fpp[r] - 2.0 * f0[r] + fmm[r]) / (hc * hc);
          }
          continue;
        }
        const double he = step(kStep2, y[e]);
        const auto at = [&](double sc, double se, std::vector<double>& dst) {
          pos[c] = y[c] + sc * hc;
          pos[e] = y[e] + se * he;
          eval(pos, dst);
        };
        at(1, 1, fpp);
        at(1, -1, fpm);
        at(-1, 1, fmp);
        at(-1, -1, fmm);
        pos[c] = y[c];
        pos[e] = y[e];
        for (std::size_t r = 0; r < k; ++r) {
          const double v = (fpp[r] - fpm[r] - fmp[r] + fmm[r]) / (4.0 * hc * he);
          out[(r * m + c) * m + e] = v;
          out[(r * m + e) * m + c] = v;
        }
      }
    }
  };
  for (std::size_t p = 0; p < 4; ++p) {
    std::vector<double> out(k);
    const auto y = probe(0x6664, p, m, 2.0);
    try {
      eval(y, out);
    } catch (const std::exception& e) {
      throw InvalidArgument("calculus", "fd_field " + name + ": evaluation failed at a probe point: " + e.what());
    }
    for (const double v : out) {
      if (!std::isfinite(v)) throw InvalidArgument("calculus", "fd_field " + name + ": non-finite value at a probe");
    }
  }
  if (!cb) {
    // Sampled sup norms; D³F from differences of the sampled D²F.
    CbNorms est;
    est.sampled = true;
    std::vector<double> v(k), g(k * m), h(k * m * m), hp(k * m * m), hm(k * m * m);
    for (std::size_t p = 0; p < 64; ++p) {
      auto y = probe(0x6362, p, m, 4.0);
      eval(y, v);
      d1(y, g);
      d2(y, h);
      est.f = std::max(est.f, tensor::norm(v));
      est.df = std::max(est.df, tensor::norm(g));
      est.d2f = std::max(est.d2f, tensor::norm(h));
      double third = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        const double hc = step(1e-2, y[c]);
        const double yc = y[c];
        y[c] = yc + hc;
        d2(y, hp);
        y[c] = yc - hc;
        d2(y, hm);
        y[c] = yc;
        third += tensor::squared_distance(hp, hm) / (4.0 * hc * hc);
      }
      est.d3f = std::max(est.d3f, std::sqrt(third));
    }
    cb = est;
  }
  return VectorField(std::move(name), m, q, eval, d1, d2, cb, false);
}

VectorField constant_field(std::size_t m, std::size_t q, std::vector<double> a) {
  require_size(a, m * q, "constant field");
  const double norm = tensor::norm(a);
  auto eval = [a](std::span<const double>, std::span<double> out) { std::copy(a.begin(), a.end(), out.begin()); };
  auto zero = [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  return VectorField("constant", m, q, eval, zero, zero, CbNorms{norm, 0.0, 0.0, 0.0, false});
}

VectorField linear_field(std::size_t m, std::size_t q, std::vector<double> lambda) {
  require_size(lambda, m * q * m, "linear field");
  const double norm = tensor::norm(lambda);
  auto eval = [lambda, m, q](std::span<const double> y, std::span<double> out) {
    for (std::size_t ab = 0; ab < m * q; ++ab) {
      double v = 0.0;
      for (std::size_t c = 0; c < m; ++c) v += lambda[ab * m + c] * y[c];
      out[ab] = v;
    }
  };
  auto d1 = [lambda](std::span<const double>, std::span<double> out) {
    std::copy(lambda.begin(), lambda.end(), out.begin());
  };
  auto zero = [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  return VectorField("linear", m, q, eval, d1, zero,
                     CbNorms{std::numeric_limits<double>::infinity(), norm, 0.0, 0.0, false});
}

VectorField tanh_field(std::size_t m, std::size_t q, std::vector<double> lambda, double scale) {
  // sup|tanh''| = 4 / (3√3), attained where tanh² = 1/3; sup|tanh'''| = 2 at 0.
  static const Saturation kTanh{tanh1, tanh_d1, tanh_d2, 1.0, 1.0, 4.0 / (3.0 * std::numbers::sqrt3), 2.0};
  return saturated("tanh", m, q, std::move(lambda), scale, kTanh);
}

VectorField sin_field(std::size_t m, std::size_t q, std::vector<double> lambda, double scale) {
  static const Saturation kSin{sin1, sin_d1, sin_d2, 1.0, 1.0, 1.0, 1.0};
  return saturated("sin", m, q, std::move(lambda), scale, kSin);
}

VectorField rotation_field(std::vector<double> omega) {
  const std::size_t q = omega.size();
  if (q == 0) throw InvalidArgument("calculus", "rotation field needs at least one frequency");
  // F_{a k}(y) = omega_k (J y)_a with J = [[0, -1], [1, 0]].
  std::vector<double> lambda(2 * q * 2, 0.0);
  for (std::size_t k = 0; k < q; ++k) {
    lambda[(0 * q + k) * 2 + 1] = -omega[k];
    lambda[(1 * q + k) * 2 + 0] = omega[k];
  }
  VectorField lin = linear_field(2, q, std::move(lambda));
  return VectorField("rotation", 2, q, [lin](auto y, auto out) { lin.eval(y, out); },
                     [lin](auto y, auto out) { lin.deriv1(y, out); }, [lin](auto y, auto out) { lin.deriv2(y, out); },
                     lin.cb_norms(), false);
}

ControlledPath compose(const VectorField& f, const ControlledPath& y) {
  const std::size_t m = f.m();
  const std::size_t q = f.q();
  if (y.shape().cols != 1 || y.shape().rows != m) {
    throw InvalidArgument("calculus", "compose: path must be a vector of dimension " + std::to_string(m));
  }
  const std::size_t d = y.dim();
  const std::size_t nodes = y.nodes();
  std::vector<double> values(nodes * m * q);
  std::vector<double> derivs(nodes * m * q * d, 0.0);
  std::vector<double> df(f.deriv1_size());
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto yk = y.value(k);
    f.eval(yk, std::span<double>(values).subspan(k * m * q, m * q));
    f.deriv1(yk, df);
    const auto yd = y.derivative(k);
    double* out = derivs.data() + k * m * q * d;
    for (std::size_t ab = 0; ab < m * q; ++ab) {
      for (std::size_t c = 0; c < m; ++c) {
        const double g = df[ab * m + c];
        if (g == 0.0) continue;
        for (std::size_t i = 0; i < d; ++i) out[ab * d + i] += g * yd[c * d + i];
      }
    }
  }
  return ControlledPath(y.base_ptr(), ValueShape{m, q}, std::move(values), std::move(derivs));
}

double compose_bound(const VectorField& f, const ControlledPath& y) {
  const auto& cb = f.cb_norms();
  if (!cb) throw InvalidArgument("calculus", "compose_bound: field " + f.name() + " has no C_b norms");
  const HolderReport r = controlled_report(y);
  const double ta = std::pow(y.grid().horizon(), y.alpha());
  const double a = tensor::norm(y.derivative(0)) + ta * r.r1_alpha;
  const double b = a * r.x_alpha + ta * r.r0_2alpha;
  const double r0 = cb->df * r.r0_2alpha + 0.5 * cb->d2f * b * b;
  const double r1 = cb->df * r.r1_alpha + cb->d2f * a * b;
  return r0 + r1;
}

}  // namespace roughlab
