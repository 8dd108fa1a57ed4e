#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affl1/presentation.hpp"

namespace affl1 {

/// A group element carried by a reduced word. The identity is the empty word.
///
/// In free and rewriting mode reduce_word already yields the canonical
/// (shortlex-least) word. In dehn mode the Dehn-reduced word solves the word
/// problem but is not canonical; canonical words come from CayleyBall.
struct GroupElement {
  std::string word;

  bool is_identity() const { return word.empty(); }
  std::size_t length() const { return word.size(); }
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Invariant of an element under a homomorphism to a class-2 nilpotent (or
/// abelian) quotient. Equal elements have equal keys.
struct QuotientKey {
  std::vector<std::int64_t> coords;
  friend bool operator==(const QuotientKey&, const QuotientKey&) = default;
};

struct QuotientKeyHash {
  std::size_t operator()(const QuotientKey& key) const noexcept;
};

/// Word-problem engine for a validated presentation. Immutable after
/// construction and safe to share across threads.
class Group {
 public:
  explicit Group(GroupPresentation presentation);

  const GroupPresentation& presentation() const { return presentation_; }
  ReductionMode mode() const { return presentation_.mode; }

  /// True when reduce() returns canonical normal forms on its own.
  bool has_canonical_forms() const { return presentation_.mode != ReductionMode::dehn; }

  /// Mode-specific reduction: free reduction, Dehn's algorithm, or
  /// exhaustive rewriting to the unique irreducible word.
  std::string reduce(std::string_view word) const;

  bool is_identity(std::string_view word) const { return reduce(word).empty(); }
  bool same_element(std::string_view u, std::string_view v) const;

  /// Image in a nilpotent quotient; used to bucket candidates before the
  /// (exact) word-problem comparison in dehn mode.
  QuotientKey quotient_key(std::string_view word) const;

 private:
  struct Rule {
    std::string lhs;
    std::string rhs;
  };

  std::string dehn_reduce(std::string_view word) const;
  std::string rewrite(std::string_view word) const;

  GroupPresentation presentation_;
  std::vector<Rule> rules_;  // Dehn replacements or rewriting rules, longest lhs first
  bool nilpotent_key_ = false;
  // Hermite normal form rows of the relator lattice in quotient coordinates.
  std::vector<std::vector<std::int64_t>> lattice_;
};

GroupElement reduce_word(std::string_view word, const Group& group);
GroupElement multiply(const GroupElement& x, const GroupElement& y, const Group& group);
GroupElement invert(const GroupElement& x);

/// Local confluence check over all critical pairs of a rewriting system
/// (together with free cancellation). Returns a description of the first
/// failing critical pair, or nullopt when the system is locally confluent.
std::optional<std::string> find_nonconfluent_pair(const GroupPresentation& presentation);

}  // namespace affl1
