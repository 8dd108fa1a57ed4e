#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "affl1/group.hpp"

namespace affl1 {

using ElementIndex = std::uint32_t;
inline constexpr ElementIndex kNoElement = UINT32_MAX;
inline constexpr std::size_t kDefaultBallCap = 200000;

/// Breadth-first truncation of the Cayley graph: every element of word
/// length <= radius, indexed in shortlex order of its canonical word (the
/// shortlex-least geodesic). Index 0 is the identity.
///
/// The ball is also the canonicalizer of the run: in dehn mode it is the
/// only source of canonical words, and every downstream module addresses
/// group elements by ball index.
class CayleyBall {
 public:
  /// Throws ResourceError when more than `cap` elements would be created.
  static CayleyBall build(Group group, int radius, std::size_t cap = kDefaultBallCap);

  const Group& group() const { return group_; }
  const GroupPresentation& presentation() const { return group_.presentation(); }
  int radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }

  const std::string& word(ElementIndex i) const { return words_[i]; }
  GroupElement element(ElementIndex i) const { return GroupElement{words_[i]}; }
  int length(ElementIndex i) const { return static_cast<int>(words_[i].size()); }

  /// Number of elements of length <= r (elements of ball(r) are exactly
  /// the indices below this count).
  std::size_t count_within(int r) const;
  std::vector<std::size_t> sphere_sizes() const;

  /// Product x * letter, where `letter_rank` is the rank of the letter in
  /// the presentation's letter order; kNoElement when outside the ball.
  ElementIndex neighbor(ElementIndex x, int letter_rank) const {
    return adjacency_[static_cast<std::size_t>(x) * alphabet_ + static_cast<std::size_t>(letter_rank)];
  }

  ElementIndex inverse(ElementIndex x) const { return inverse_[x]; }

  /// Index of the element represented by an arbitrary word, if it lies in
  /// the ball.
  std::optional<ElementIndex> find(std::string_view word) const;

  /// Index of x*y, if it lies in the ball.
  std::optional<ElementIndex> multiply(ElementIndex x, ElementIndex y) const;

  /// Follows a word letter by letter from x; nullopt if the walk leaves the
  /// ball.
  std::optional<ElementIndex> walk(ElementIndex x, std::string_view word) const;

 private:
  CayleyBall(Group group, int radius) : group_(std::move(group)), radius_(radius) {}

  std::optional<ElementIndex> find_reduced(const std::string& reduced) const;
  ElementIndex insert(std::string word);

  Group group_;
  int radius_ = 0;
  std::size_t alphabet_ = 0;
  std::vector<std::string> words_;
  std::vector<ElementIndex> adjacency_;
  std::vector<ElementIndex> inverse_;
  std::unordered_map<std::string, ElementIndex> by_word_;
  std::unordered_map<QuotientKey, std::vector<ElementIndex>, QuotientKeyHash> buckets_;  // dehn mode
};

/// Word metric distance d(x,y) = |x^{-1}y|. In free mode this is the length
/// of the freely reduced word; otherwise it is the BFS distance read from
/// the ball. Throws OutOfBallError if the distance exceeds r_max (or the
/// ball radius).
int word_distance(const GroupElement& x, const GroupElement& y, const CayleyBall& ball, int r_max);
int word_distance(ElementIndex x, ElementIndex y, const CayleyBall& ball);

}  // namespace affl1
