#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affl1/bicombing.hpp"

namespace affl1 {

/// Eigenvalues of an exactly positive semidefinite form above this are
/// treated as nonnegative; below the hard limit the kernel is rejected.
inline constexpr double kCndTolerance = 1e-9;
inline constexpr double kCndHardLimit = -1e-6;

enum class KernelProvenance { bicombing, tree_action, user_supplied };
std::string_view to_string(KernelProvenance p);

/// Dense symmetric matrix K(i,j) = ‖f(x_i) - f(x_j)‖² over the first
/// size() elements of a ball. Bicombing and tree-action kernels also keep
/// exact values (integer numerators over a fixed denominator).
class DisplacementKernel {
 public:
  DisplacementKernel(const CayleyBall& ball, std::size_t size, KernelProvenance provenance,
                     std::int64_t exact_denominator = 0);

  const CayleyBall& ball() const { return *ball_; }
  std::size_t size() const { return n_; }
  bool contains(ElementIndex i) const { return i < n_; }
  KernelProvenance provenance() const { return provenance_; }

  double operator()(ElementIndex i, ElementIndex j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }

  bool has_exact() const { return exact_den_ > 0; }
  Rational exact(ElementIndex i, ElementIndex j) const;

  /// Sets K(i,j) and K(j,i). Exact values must be multiples of 1/denominator.
  void set_exact(ElementIndex i, ElementIndex j, const Rational& value);
  /// Sets a single float entry (not mirrored) and drops exact storage; used
  /// for user-supplied kernels, which are verified before use.
  void set_entry(ElementIndex i, ElementIndex j, double value);

  double displacement_constant() const { return displacement_constant_; }
  void set_displacement_constant(double m) { displacement_constant_ = m; }

  /// The bicombing a kernel was built from, when known.
  const Bicombing* source() const { return source_ ? &*source_ : nullptr; }
  void set_source(const Bicombing& b) { source_ = b; }

 private:
  const CayleyBall* ball_;
  std::size_t n_;
  KernelProvenance provenance_;
  std::vector<double> values_;
  std::vector<std::int32_t> exact_num_;
  std::int64_t exact_den_ = 0;
  double displacement_constant_ = 0.0;
  std::optional<Bicombing> source_;
};

/// K(x,y) = ‖q[e,x] - q[e,y]‖₁ over ball(radius), exact. The displacement
/// constant is set by displacement_constant_scan with s and supports in
/// ball(radius / 2).
DisplacementKernel kernel_from_bicombing(const Bicombing& b, int radius);

struct DisplacementScan {
  double constant = 0.0;
  std::array<ElementIndex, 3> witness{0, 0, 0};  ///< (s, x, y)
};

/// max |K(sx,sy) - K(x,y)| over s in ball(s_radius) and x,y in
/// ball(support_radius); the two-sided form equals the one-sided excess
/// over the symmetric set {s, s^{-1}}. Throws OutOfBallError if a translate
/// leaves the kernel.
DisplacementScan displacement_constant_scan(const DisplacementKernel& k, int s_radius, int support_radius);

struct ExcessReport {
  double excess = 0.0;                ///< max over x,y in S of K(sx,sy) - K(x,y)
  std::array<ElementIndex, 2> witness{0, 0};
  std::optional<Rational> exact_excess;
  bool decomposition_checked = false;  ///< triangle-area replay performed
  bool decomposition_holds = true;
  Rational max_area_sum;               ///< largest two-triangle bound seen
  std::array<ElementIndex, 2> decomposition_witness{0, 0};
  std::size_t pairs = 0;
};

/// One-sided displacement excess of s on the index set S. For kernels built
/// from an antisymmetric bicombing each pair is also checked against
///   K(sx,sy) - K(x,y) <= ‖q[e,sx]+q[sx,sy]+q[sy,e]‖₁ + ‖q[sy,sx]+q[sx,s]+q[s,sy]‖₁
/// in exact arithmetic.
ExcessReport displacement_excess(const DisplacementKernel& k, ElementIndex s, const std::vector<ElementIndex>& support);

/// Smallest eigenvalue of -½K restricted to mean-zero vectors on S.
/// Throws InvariantError if the eigen-solver fails, InputError if |S| < 2.
double cnd_min_eigenvalue(const DisplacementKernel& k, const std::vector<ElementIndex>& support);
double cnd_min_eigenvalue(const std::vector<double>& matrix, std::size_t n);

/// Coordinates of the explicit Hilbert embedding J of integer 1-chains: a
/// chain value a on edge t occupies slots 1..a with +1 (a > 0) or slots
/// a+1..0 with -1 (a < 0).
struct FeatureCoordinate {
  std::uint64_t edge_key;
  std::int64_t slot;
  friend auto operator<=>(const FeatureCoordinate&, const FeatureCoordinate&) = default;
};

class FeatureVector {
 public:
  struct Entry {
    FeatureCoordinate coord;
    int value;
  };
  explicit FeatureVector(std::vector<Entry> entries) : entries_(std::move(entries)) {}
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;  // sorted by coordinate
};

/// Throws InputError if a coefficient is not an integer.
FeatureVector feature_embed(const Chain1& c);
std::int64_t squared_distance(const FeatureVector& u, const FeatureVector& w);

/// max over pairs of |K(x,y) - ‖J(q[e,x]) - J(q[e,y])‖²|, exact. Half-integer
/// chains are doubled before embedding and the squared distance halved.
Rational kernel_cross_validate(const DisplacementKernel& k, const Bicombing& b);
Rational kernel_cross_validate(const Bicombing& b, int radius);

struct KernelDefect {
  std::string what;
  ElementIndex i = 0;
  ElementIndex j = 0;
  double value = 0.0;
};

/// Diagonal, symmetry and sign checks; empty when the kernel is well formed.
std::vector<KernelDefect> structural_defects(const DisplacementKernel& k, double tol = 1e-12);

/// CSV "i,j,K" for i <= j (ball indices), preceded by optional "# " lines.
void write_kernel_csv(std::ostream& os, const DisplacementKernel& k);
DisplacementKernel read_kernel_csv(std::istream& is, const CayleyBall& ball);

}  // namespace affl1
