#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "affl1/ball.hpp"
#include "affl1/chain.hpp"

namespace affl1 {

enum class BicombingKind { tree_geodesic, shortlex, shortlex_antisymmetrized };

std::string_view to_string(BicombingKind kind);
BicombingKind parse_bicombing_kind(std::string_view name);  // "tree", "shortlex", "shortlex-anti"

/// Equivariant path bicombing on a precomputed ball:
///   q[x,y] = x * q[e, x^{-1}y],
/// where q[e,z] is the edge path along the canonical (shortlex-least
/// geodesic) word of z. The antisymmetrized kind returns
///   ½ (q[x,y] - q[y,x]).
/// Every chain is relative to the ball: arguments whose paths leave it
/// raise OutOfBallError.
class Bicombing {
 public:
  Bicombing(const CayleyBall& ball, BicombingKind kind);

  const CayleyBall& ball() const { return *ball_; }
  BicombingKind kind() const { return kind_; }

  /// Chains are relative to the ball when the presentation has no global
  /// canonical forms (dehn mode); reports flag this.
  bool ball_relative() const { return !ball_->group().has_canonical_forms(); }

  /// q[y,x] = -q[x,y] holds exactly for this kind (geodesics in trees are
  /// unique, and antisymmetrization forces it).
  bool antisymmetric() const;

  Chain1 chain(ElementIndex x, ElementIndex y) const;

 private:
  Chain1 path_chain(ElementIndex x, ElementIndex y) const;

  const CayleyBall* ball_;
  BicombingKind kind_;
};

/// Antisymmetrized version of a path bicombing.
Bicombing antisymmetrize(const Bicombing& b);

/// ‖q[x,y] + q[y,z] + q[z,x]‖₁, exact.
Rational area(const Bicombing& b, ElementIndex x, ElementIndex y, ElementIndex z);

struct SamplingPolicy {
  int radius = 2;                          ///< triples are drawn from ball(radius)
  std::uint64_t exhaustive_limit = 20'000'000;  ///< max unordered triples scanned exhaustively
  std::size_t samples = 5000;              ///< triples drawn when above the limit
  std::uint64_t seed = 1;
  bool force_sampling = false;
};

struct AreaScan {
  Rational constant;
  std::array<ElementIndex, 3> witness{0, 0, 0};
  std::uint64_t triples = 0;
  bool exhaustive = false;
};

/// Maximum area over the policy's triple set. Ties keep the
/// lexicographically least witness triple.
AreaScan empirical_area_constant(const Bicombing& b, const SamplingPolicy& policy);

struct QuasiGeodesicFit {
  Rational lambda;      ///< max ‖q[x,y]‖₁ / d(x,y) over pairs with d > 0
  Rational additive;    ///< max ‖q[x,y]‖₁ - d(x,y)
  bool lower_bound_holds = true;  ///< d(x,y) <= ‖q[x,y]‖₁ on every pair
  std::array<ElementIndex, 2> lower_bound_witness{0, 0};
  std::uint64_t pairs = 0;
};

/// Scans all ordered pairs of ball(radius).
QuasiGeodesicFit quasi_geodesic_constants(const Bicombing& b, int radius);

}  // namespace affl1
