#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "affl1/kernel.hpp"

namespace affl1 {

/// Finitely supported mean-zero real function on ball elements; an element
/// of the dense subspace V of E. Entries are sorted by index, zeros dropped.
class EVector {
 public:
  using Entry = std::pair<ElementIndex, double>;

  EVector() = default;
  /// Throws InputError unless the coefficients sum to 0 within 1e-12.
  explicit EVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  double coefficient(ElementIndex x) const;
  std::vector<ElementIndex> support() const;

  EVector scaled(double factor) const;
  friend bool operator==(const EVector&, const EVector&) = default;

 private:
  std::vector<Entry> entries_;
};

inline constexpr double kMeanZeroTolerance = 1e-12;

double norm_l1(const EVector& v);
/// (-½ Σ v(x)v(y)K(x,y))^{1/2}; the form is clamped at 0 above
/// kCndHardLimit and rejected (InvariantError) below it.
double norm_f(const EVector& v, const DisplacementKernel& k);
double norm_e(const EVector& v, const DisplacementKernel& k);

/// (π(s)v)(x) = v(s^{-1}x): the support moves to s·supp(v).
EVector rep_apply(const CayleyBall& ball, ElementIndex s, const EVector& v);

/// b(s) = δ_s - δ_e (zero for s = e).
EVector cocycle(ElementIndex s);

/// max |b(st) - π(s)b(t) - b(s)| over coefficients.
double check_cocycle_identity(const CayleyBall& ball, ElementIndex s, ElementIndex t);

struct BoundCheck {
  double lhs = 0.0;    ///< ‖π(s)v‖_f² - ‖v‖_f²
  double rhs = 0.0;    ///< (Δ/2)·‖v‖₁²
  double delta = 0.0;  ///< per-support displacement excess, both directions
  bool pass = true;
};

/// The norm-growth inequality with Δ = max |K(sx,sy) - K(x,y)| over the
/// support, i.e. the larger of displacement_excess(K, s, S) and
/// displacement_excess(K, s^{-1}, sS).
BoundCheck per_vector_bound_check(const DisplacementKernel& k, ElementIndex s, const EVector& v, double tol = 1e-9);

/// √(M/2) + 1.
double uniform_bound(double m);

struct OptimizerConfig {
  int restarts = 32;
  int iterations = 500;
  int decay_every = 50;
  double initial_step = 0.5;
  std::uint64_t seed = 1;
};

struct OpNormEstimate {
  double lower_bound = 0.0;  ///< best ‖π(s)v‖_E / ‖v‖_E found
  double theoretical_upper = 0.0;
  long long evaluations = 0;
  std::uint64_t seed = 0;
};

/// Seeded multi-start perturbation ascent of ‖π(s)v‖_E / ‖v‖_E over
/// mean-zero v supported in ball(radius). The result is a lower bound on
/// the restricted operator norm.
OpNormEstimate op_norm_lower_bound(const DisplacementKernel& k, ElementIndex s, int radius, const OptimizerConfig& config);

struct NormRow {
  ElementIndex element = 0;
  std::string word;
  int distance = 0;
  double norm_f = 0.0;
  double norm_l1 = 0.0;
  double norm_e = 0.0;
  double lower_bound = 0.0;  ///< √d(e,s) + 2
};

struct NormReport {
  std::vector<NormRow> rows;
  bool lower_bounds_checked = false;
  std::vector<ElementIndex> failures;  ///< rows with ‖b(s)‖_E < √d + 2 - 1e-9
  bool pass() const { return failures.empty(); }
};

/// Rows for every s != e of the kernel's ball (or of `subset` when given).
/// The properness bound is asserted for bicombing kernels.
NormReport properness_report(const DisplacementKernel& k, const std::vector<ElementIndex>& subset = {});

}  // namespace affl1
