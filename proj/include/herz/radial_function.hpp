#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "herz/quadrature.hpp"

namespace herz {

struct RadialNode;

/// Immutable radial function on R^n, shared by value.
class RadialFunction {
 public:
  RadialFunction();  // the zero function
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, RadialFunction>)
  RadialFunction(T&& alt);  // NOLINT(google-explicit-constructor)

  [[nodiscard]] const RadialNode& node() const { return *node_; }
  [[nodiscard]] bool is_zero() const;

 private:
  std::shared_ptr<const RadialNode> node_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Zero {};

struct Constant {
  double value = 1.0;
};

/// amplitude * exp(-(r/width)^2)
struct Gaussian {
  double width = 1.0;
  double amplitude = 1.0;
};

/// r^{-decay} (log 1/r)^{-log_exp} on 0 < r < cutoff, zero elsewhere.
struct PowerLogCutoff {
  double decay = 0.0;
  double log_exp = 0.0;
  double cutoff = 0x1p-10;
};

/// Indicator of the dyadic shell 2^{j-1} <= r < 2^j.
struct AnnulusIndicator {
  int j = 0;
};

/// Indicator of r < radius.
struct BallIndicator {
  double radius = 1.0;
};

/// Smooth plateau of height amplitude on [inner + ramp, outer - ramp],
/// C-infinity transitions of width ramp, zero outside (inner, outer).
/// inner = 0 gives a mollified ball with no inner transition.
struct SmoothBump {
  double inner = 0.0;
  double outer = 1.0;
  double ramp = 0.1;
  double amplitude = 1.0;
};

struct SampledData {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> errors;  // optional per-node absolute error, empty if unknown
  std::vector<double> slopes;  // log-log slope per cell, NaN where linear interpolation is used
  bool log_uniform = false;
  double log_r0 = 0.0;
  double inv_log_step = 0.0;
};

/// Samples on increasing positive radii with piecewise power-law
/// interpolation (linear on cells with a sign change or a zero endpoint).
/// Constant below the first radius, zero beyond the last.
struct Sampled {
  std::shared_ptr<const SampledData> data;

  static Sampled make(std::vector<double> radii, std::vector<double> values, std::vector<double> errors = {});
  static Sampled on_grid(const RadialGrid& grid, std::vector<double> values, std::vector<double> errors = {});
};

/// r^exponent * base(r)
struct PowerWeightProduct {
  RadialFunction base;
  double exponent = 0.0;
};

/// |base|^{exponent-1} base
struct SignedPower {
  RadialFunction base;
  double exponent = 1.0;
};

struct Product {
  RadialFunction left;
  RadialFunction right;
};

struct Sum {
  std::vector<RadialFunction> terms;
};

/// amplitude * base(dilation * r)
struct Scaled {
  RadialFunction base;
  double amplitude = 1.0;
  double dilation = 1.0;
};

/// base restricted to lo <= r < hi.
struct Restricted {
  RadialFunction base;
  double lo = 0.0;
  double hi = kInf;
};

/// e^{t Lap} base in dimension n, evaluated pointwise by quadrature.
struct HeatEvolved {
  RadialFunction base;
  double t = 0.0;
  int n = 3;
  QuadratureSpec quad;
};

struct RadialNode
    : std::variant<Zero, Constant, Gaussian, PowerLogCutoff, AnnulusIndicator, BallIndicator, SmoothBump, Sampled,
                   PowerWeightProduct, SignedPower, Product, Sum, Scaled, Restricted, HeatEvolved> {
  using variant::variant;
};

template <class T>
  requires(!std::is_same_v<std::decay_t<T>, RadialFunction>)
RadialFunction::RadialFunction(T&& alt) : node_(std::make_shared<const RadialNode>(std::forward<T>(alt))) {}

/// Value at radius r > 0.
double value(const RadialFunction& f, double r);

/// Value at r >= 0; nullopt marks a singularity at the origin.
/// Throws std::invalid_argument for r < 0.
std::optional<double> evaluate(const RadialFunction& f, double r);

/// Radii in (lo, hi) where f jumps or has a sharp transition, sorted.
std::vector<double> breakpoints(const RadialFunction& f, double lo, double hi, bool jumps_only = false);

/// Length below which f is smooth on linear scale away from its breakpoints
/// (kInf for piecewise power laws).
double feature_scale(const RadialFunction& f);

/// Upper bound on sup |f|, kInf if unknown or unbounded.
double sup_bound(const RadialFunction& f);

/// Two-sided model lo * r^power * (log 1/r)^{-log_power} <= |f(r)| <= hi * (...)
/// valid on 0 < r <= radius.
struct OriginBehavior {
  bool known = false;
  bool vanishes = false;  // f == 0 on (0, radius]
  double power = 0.0;
  double log_power = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double radius = 0.0;
};

OriginBehavior origin_behavior(const RadialFunction& f, double radius);

/// Far-field model used to close annulus sums above a window.
struct FarField {
  enum class Kind { Compact, Gaussian, Power, Unknown };
  Kind kind = Kind::Unknown;
  double support = kInf;  // Compact: f == 0 for r >= support
  double coef = 0.0;      // Gaussian: |f| <= coef r^power e^{-(r/width)^2}; Power: lo/hi below
  double power = 0.0;
  double width = 0.0;
  double lo = 0.0;  // Power: lo r^power <= |f| <= hi r^power
  double hi = 0.0;
  double from = 0.0;  // model valid for r >= from
};

FarField far_field(const RadialFunction& f);

// Convenience constructors.
RadialFunction operator+(const RadialFunction& a, const RadialFunction& b);
RadialFunction operator-(const RadialFunction& a, const RadialFunction& b);
RadialFunction operator*(double c, const RadialFunction& f);
RadialFunction dilate(const RadialFunction& f, double lambda);  // f(lambda r)

/// Samples f on the grid (singular origin values are not needed: radii > 0).
Sampled sample(const RadialFunction& f, const RadialGrid& grid);

/// Sampled values combined node-wise when both share the same radii.
std::optional<Sampled> combine_sampled(const RadialFunction& a, double ca, const RadialFunction& b, double cb);

/// Two-column text with a one-line header naming the interpolation rule.
void save_sampled(const Sampled& f, std::ostream& os);
Sampled load_sampled(std::istream& is);

/// Short description of the variant tree for reports.
std::string describe(const RadialFunction& f);

}  // namespace herz
