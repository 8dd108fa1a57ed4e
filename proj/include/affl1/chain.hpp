#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affl1/ball.hpp"
#include "affl1/rational.hpp"

namespace affl1 {

/// Canonically oriented Cayley-graph edge from `source` to source*g, where
/// g is the generator with index `generator`. Reverse traversals are
/// encoded by negating the chain coefficient.
struct OrientedEdge {
  ElementIndex source = 0;
  std::uint8_t generator = 0;

  std::uint64_t key() const { return (static_cast<std::uint64_t>(source) << 8) | generator; }
  static OrientedEdge from_key(std::uint64_t k) {
    return {static_cast<ElementIndex>(k >> 8), static_cast<std::uint8_t>(k & 0xff)};
  }
  friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

/// Finitely supported rational 1-chain on the oriented edges of a ball.
///
/// Stored as sorted (edge key, numerator) pairs over one common positive
/// denominator; no zero coefficients are kept. All arithmetic is exact.
class Chain1 {
 public:
  struct Term {
    std::uint64_t key;
    std::int64_t num;
  };

  Chain1() = default;

  /// Edge path starting at `start` and following `word`. Throws
  /// OutOfBallError if the path leaves the ball.
  static Chain1 path(const CayleyBall& ball, ElementIndex start, std::string_view word);

  /// Single edge with the given coefficient.
  static Chain1 edge(OrientedEdge e, Rational coefficient);

  bool empty() const { return terms_.empty(); }
  std::size_t support_size() const { return terms_.size(); }
  std::int64_t denominator() const { return den_; }
  const std::vector<Term>& terms() const { return terms_; }

  Rational coefficient(OrientedEdge e) const;
  std::vector<std::pair<OrientedEdge, Rational>> coefficients() const;

  /// True when every coefficient is an integer.
  bool is_integral() const { return den_ == 1; }

  Chain1& operator+=(const Chain1& o);
  Chain1& operator-=(const Chain1& o);
  friend Chain1 operator+(Chain1 a, const Chain1& b) { return a += b; }
  friend Chain1 operator-(Chain1 a, const Chain1& b) { return a -= b; }
  Chain1 scaled(const Rational& factor) const;

  friend bool operator==(const Chain1& a, const Chain1& b);

 private:
  void combine(const Chain1& o, std::int64_t sign);
  void normalize();

  std::vector<Term> terms_;
  std::int64_t den_ = 1;
};

/// Sum of absolute coefficients, exact.
Rational chain_l1_norm(const Chain1& c);

/// Exact l1 norm of a - b without materializing the difference.
Rational l1_distance(const Chain1& a, const Chain1& b);

/// Exact ‖a + b + c‖₁ without materializing the sum (triangle areas).
Rational l1_norm_of_sum(const Chain1& a, const Chain1& b, const Chain1& c);

/// Finitely supported rational function on vertices, sorted by index.
using VertexFunction = std::vector<std::pair<ElementIndex, Rational>>;

/// Boundary: each edge (x,g) with coefficient c contributes +c at x*g and
/// -c at x. Throws OutOfBallError if an edge endpoint leaves the ball.
VertexFunction boundary(const Chain1& c, const CayleyBall& ball);

/// Left translation: relabels every edge (x,g) to (s*x,g).
Chain1 translate_chain(const CayleyBall& ball, ElementIndex s, const Chain1& c);

/// One line per edge, "sourceWord letter coefficient", sorted by (source,
/// letter). The identity source is written as "1".
std::string dump_chain(const Chain1& c, const CayleyBall& ball);

}  // namespace affl1
