#include "affl1/chain.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include "affl1/errors.hpp"

namespace affl1 {

Chain1 Chain1::path(const CayleyBall& ball, ElementIndex start, std::string_view word) {
  const auto& p = ball.presentation();
  Chain1 out;
  out.terms_.reserve(word.size());
  ElementIndex cur = start;
  for (char c : word) {
    const int rank = p.letter_rank(c);
    if (rank < 0) throw InputError("unknown letter '" + std::string(1, c) + "'");
    const ElementIndex next = ball.neighbor(cur, rank);
    if (next == kNoElement) {
      throw OutOfBallError("path from '" + ball.word(start) + "' along '" + std::string(word) + "' leaves the ball");
    }
    const auto gen = static_cast<std::uint8_t>(rank / 2);
    if (rank % 2 == 0) {
      out.terms_.push_back({OrientedEdge{cur, gen}.key(), 1});
    } else {
      out.terms_.push_back({OrientedEdge{next, gen}.key(), -1});
    }
    cur = next;
  }
  std::sort(out.terms_.begin(), out.terms_.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
  // Merge repeated edges (non-geodesic paths may revisit an edge).
  std::vector<Term> merged;
  for (const auto& t : out.terms_) {
    if (!merged.empty() && merged.back().key == t.key) {
      merged.back().num += t.num;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.num == 0; });
  out.terms_ = std::move(merged);
  return out;
}

Chain1 Chain1::edge(OrientedEdge e, Rational coefficient) {
  Chain1 out;
  if (coefficient.num() != 0) {
    out.terms_.push_back({e.key(), coefficient.num()});
    out.den_ = coefficient.den();
  }
  return out;
}

Rational Chain1::coefficient(OrientedEdge e) const {
  const auto k = e.key();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term& t, std::uint64_t key) { return t.key < key; });
  if (it == terms_.end() || it->key != k) return Rational(0);
  return Rational(it->num, den_);
}

std::vector<std::pair<OrientedEdge, Rational>> Chain1::coefficients() const {
  std::vector<std::pair<OrientedEdge, Rational>> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.emplace_back(OrientedEdge::from_key(t.key), Rational(t.num, den_));
  return out;
}

void Chain1::combine(const Chain1& o, std::int64_t sign) {
  const std::int64_t l = std::lcm(den_, o.den_);
  const std::int64_t mine = l / den_;
  const std::int64_t theirs = sign * (l / o.den_);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->key < b->key)) {
      out.push_back({a->key, a->num * mine});
      ++a;
    } else if (a == terms_.end() || b->key < a->key) {
      out.push_back({b->key, b->num * theirs});
      ++b;
    } else {
      const std::int64_t v = a->num * mine + b->num * theirs;
      if (v != 0) out.push_back({a->key, v});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  den_ = l;
  normalize();
}

void Chain1::normalize() {
  if (terms_.empty()) {
    den_ = 1;
    return;
  }
  if (den_ == 1) return;
  std::int64_t g = den_;
  for (const auto& t : terms_) {
    g = std::gcd(g, t.num);
    if (g == 1) return;
  }
  for (auto& t : terms_) t.num /= g;
  den_ /= g;
}

Chain1& Chain1::operator+=(const Chain1& o) {
  combine(o, 1);
  return *this;
}

Chain1& Chain1::operator-=(const Chain1& o) {
  combine(o, -1);
  return *this;
}

Chain1 Chain1::scaled(const Rational& factor) const {
  Chain1 out;
  if (factor.num() == 0) return out;
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.num *= factor.num();
  out.den_ = den_ * factor.den();
  out.normalize();
  return out;
}

bool operator==(const Chain1& a, const Chain1& b) {
  if (a.den_ != b.den_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].key != b.terms_[i].key || a.terms_[i].num != b.terms_[i].num) return false;
  }
  return true;
}

Rational chain_l1_norm(const Chain1& c) {
  std::int64_t total = 0;
  for (const auto& t : c.terms()) total += t.num < 0 ? -t.num : t.num;
  return Rational(total, c.denominator());
}

Rational l1_distance(const Chain1& a, const Chain1& b) {
  const std::int64_t l = std::lcm(a.denominator(), b.denominator());
  const std::int64_t ma = l / a.denominator();
  const std::int64_t mb = l / b.denominator();
  std::int64_t total = 0;
  auto x = a.terms().begin();
  auto y = b.terms().begin();
  const auto xe = a.terms().end();
  const auto ye = b.terms().end();
  while (x != xe || y != ye) {
    std::int64_t v = 0;
    if (y == ye || (x != xe && x->key < y->key)) {
      v = x->num * ma;
      ++x;
    } else if (x == xe || y->key < x->key) {
      v = -y->num * mb;
      ++y;
    } else {
      v = x->num * ma - y->num * mb;
      ++x;
      ++y;
    }
    total += v < 0 ? -v : v;
  }
  return Rational(total, l);
}

Rational l1_norm_of_sum(const Chain1& a, const Chain1& b, const Chain1& c) {
  const std::int64_t l = std::lcm(std::lcm(a.denominator(), b.denominator()), c.denominator());
  const std::array<const Chain1*, 3> chains{&a, &b, &c};
  std::array<std::size_t, 3> pos{0, 0, 0};
  std::array<std::int64_t, 3> scale{};
  for (std::size_t i = 0; i < 3; ++i) scale[i] = l / chains[i]->denominator();
  std::int64_t total = 0;
  while (true) {
    std::uint64_t key = UINT64_MAX;
    bool any = false;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& t = chains[i]->terms();
      if (pos[i] < t.size() && (!any || t[pos[i]].key < key)) {
        key = t[pos[i]].key;
        any = true;
      }
    }
    if (!any) break;
    std::int64_t v = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& t = chains[i]->terms();
      if (pos[i] < t.size() && t[pos[i]].key == key) {
        v += t[pos[i]].num * scale[i];
        ++pos[i];
      }
    }
    total += v < 0 ? -v : v;
  }
  return Rational(total, l);
}

VertexFunction boundary(const Chain1& c, const CayleyBall& ball) {
  std::vector<std::pair<ElementIndex, std::int64_t>> contributions;
  for (const auto& t : c.terms()) {
    const auto e = OrientedEdge::from_key(t.key);
    const ElementIndex target = ball.neighbor(e.source, 2 * e.generator);
    if (target == kNoElement) throw OutOfBallError("edge from '" + ball.word(e.source) + "' leaves the ball");
    contributions.emplace_back(target, t.num);
    contributions.emplace_back(e.source, -t.num);
  }
  std::sort(contributions.begin(), contributions.end());
  VertexFunction out;
  for (std::size_t i = 0; i < contributions.size();) {
    std::int64_t sum = 0;
    std::size_t j = i;
    for (; j < contributions.size() && contributions[j].first == contributions[i].first; ++j) sum += contributions[j].second;
    if (sum != 0) out.emplace_back(contributions[i].first, Rational(sum, c.denominator()));
    i = j;
  }
  return out;
}

Chain1 translate_chain(const CayleyBall& ball, ElementIndex s, const Chain1& c) {
  Chain1 out;
  for (const auto& [edge, coeff] : c.coefficients()) {
    const auto source = ball.multiply(s, edge.source);
    if (!source) {
      throw OutOfBallError("translate of edge at '" + ball.word(edge.source) + "' by '" + ball.word(s) + "' leaves the ball");
    }
    out += Chain1::edge(OrientedEdge{*source, edge.generator}, coeff);
  }
  return out;
}

std::string dump_chain(const Chain1& c, const CayleyBall& ball) {
  std::ostringstream os;
  const auto& p = ball.presentation();
  for (const auto& [edge, coeff] : c.coefficients()) {
    const auto& w = ball.word(edge.source);
    os << (w.empty() ? "1" : w) << ' ' << p.generators[edge.generator] << ' ' << coeff.to_string() << '\n';
  }
  return os.str();
}

}  // namespace affl1
