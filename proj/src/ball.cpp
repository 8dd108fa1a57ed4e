#include "affl1/ball.hpp"

#include <algorithm>

#include "affl1/errors.hpp"

namespace affl1 {

std::optional<ElementIndex> CayleyBall::find_reduced(const std::string& reduced) const {
  if (auto it = by_word_.find(reduced); it != by_word_.end()) return it->second;
  if (group_.has_canonical_forms()) return std::nullopt;
  auto bucket = buckets_.find(group_.quotient_key(reduced));
  if (bucket == buckets_.end()) return std::nullopt;
  for (ElementIndex i : bucket->second) {
    if (group_.same_element(words_[i], reduced)) return i;
  }
  return std::nullopt;
}

std::optional<ElementIndex> CayleyBall::find(std::string_view word) const {
  for (char c : word) {
    if (!presentation().has_letter(c)) throw InputError("unknown letter '" + std::string(1, c) + "'");
  }
  return find_reduced(group_.reduce(word));
}

ElementIndex CayleyBall::insert(std::string word) {
  const auto idx = static_cast<ElementIndex>(words_.size());
  if (!group_.has_canonical_forms()) buckets_[group_.quotient_key(word)].push_back(idx);
  by_word_.emplace(word, idx);
  words_.push_back(std::move(word));
  adjacency_.resize(words_.size() * alphabet_, kNoElement);
  return idx;
}

CayleyBall CayleyBall::build(Group group, int radius, std::size_t cap) {
  if (radius < 0) throw InputError("ball radius must be nonnegative");
  CayleyBall ball(std::move(group), radius);
  const auto& p = ball.presentation();
  ball.alphabet_ = p.alphabet_size();
  ball.insert("");

  // Spheres are processed in index order and letters in rank order, so the
  // first word found for a new element is its shortlex-least geodesic.
  for (ElementIndex i = 0; i < ball.words_.size(); ++i) {
    const std::string base = ball.words_[i];
    for (int r = 0; r < static_cast<int>(ball.alphabet_); ++r) {
      if (ball.neighbor(i, r) != kNoElement) continue;
      const std::string candidate = base + p.letter_at(r);
      std::optional<ElementIndex> hit;
      if (!base.empty() && p.letter_rank(base.back()) == (r ^ 1)) {
        hit = ball.by_word_.at(base.substr(0, base.size() - 1));
      } else {
        hit = ball.find_reduced(ball.group_.reduce(candidate));
      }
      ElementIndex j = kNoElement;
      if (hit) {
        j = *hit;
      } else if (static_cast<int>(base.size()) < radius) {
        if (ball.words_.size() >= cap) {
          throw ResourceError("ball of radius " + std::to_string(radius) + " exceeds the element cap of " +
                              std::to_string(cap));
        }
        std::string word = ball.group_.has_canonical_forms() ? ball.group_.reduce(candidate) : candidate;
        if (word.size() != base.size() + 1) {
          throw InvariantError("normal form '" + word + "' is not geodesic; rewriting rules must yield shortlex forms");
        }
        j = ball.insert(std::move(word));
      }
      if (j == kNoElement) continue;
      ball.adjacency_[static_cast<std::size_t>(i) * ball.alphabet_ + static_cast<std::size_t>(r)] = j;
      ball.adjacency_[static_cast<std::size_t>(j) * ball.alphabet_ + static_cast<std::size_t>(r ^ 1)] = i;
    }
  }

  ball.inverse_.resize(ball.words_.size(), kNoElement);
  for (ElementIndex i = 0; i < ball.words_.size(); ++i) {
    auto inv = ball.walk(0, inverse_word(ball.words_[i]));
    if (!inv) inv = ball.find(inverse_word(ball.words_[i]));
    if (!inv) throw InvariantError("ball not closed under inverse at '" + ball.words_[i] + "'");
    ball.inverse_[i] = *inv;
  }
  return ball;
}

std::size_t CayleyBall::count_within(int r) const {
  if (r < 0) return 0;
  auto it = std::partition_point(words_.begin(), words_.end(),
                                 [r](const std::string& w) { return static_cast<int>(w.size()) <= r; });
  return static_cast<std::size_t>(it - words_.begin());
}

std::vector<std::size_t> CayleyBall::sphere_sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(radius_) + 1, 0);
  for (const auto& w : words_) ++out[w.size()];
  return out;
}

std::optional<ElementIndex> CayleyBall::walk(ElementIndex x, std::string_view word) const {
  ElementIndex cur = x;
  for (char c : word) {
    const int r = presentation().letter_rank(c);
    if (r < 0) throw InputError("unknown letter '" + std::string(1, c) + "'");
    cur = neighbor(cur, r);
    if (cur == kNoElement) return std::nullopt;
  }
  return cur;
}

std::optional<ElementIndex> CayleyBall::multiply(ElementIndex x, ElementIndex y) const {
  if (auto hit = walk(x, words_[y])) return hit;
  return find(words_[x] + words_[y]);
}

int word_distance(ElementIndex x, ElementIndex y, const CayleyBall& ball) {
  const auto z = ball.multiply(ball.inverse(x), y);
  if (!z) {
    throw OutOfBallError("distance between '" + ball.word(x) + "' and '" + ball.word(y) + "' exceeds ball radius " +
                         std::to_string(ball.radius()));
  }
  return ball.length(*z);
}

int word_distance(const GroupElement& x, const GroupElement& y, const CayleyBall& ball, int r_max) {
  const int limit = std::min(r_max, ball.radius());
  const std::string diff = inverse_word(x.word) + y.word;
  int d = 0;
  if (ball.group().mode() == ReductionMode::free) {
    d = static_cast<int>(free_reduce(diff).size());
  } else {
    const auto z = ball.find(diff);
    if (!z) {
      throw OutOfBallError("distance between '" + x.word + "' and '" + y.word + "' exceeds radius " +
                           std::to_string(limit));
    }
    d = ball.length(*z);
  }
  if (d > limit) {
    throw OutOfBallError("distance " + std::to_string(d) + " between '" + x.word + "' and '" + y.word +
                         "' exceeds r_max " + std::to_string(limit));
  }
  return d;
}

}  // namespace affl1
