#include "affl1/group.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "affl1/errors.hpp"

namespace affl1 {

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

struct RuleView {
  std::string_view lhs;
  std::string_view rhs;
};

// Repeatedly free-reduces and applies the leftmost matching rule (longest
// first at each position) until the word is irreducible. Every rule is
// length-reducing or shortlex-decreasing, so this terminates.
template <typename Rules>
std::string rewrite_to_normal_form(std::string_view input, const Rules& rules) {
  std::string w = free_reduce(input);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t pos = 0; pos < w.size() && !changed; ++pos) {
      for (const auto& rule : rules) {
        const std::string_view lhs = rule.lhs;
        if (lhs.size() > w.size() - pos) continue;
        if (std::string_view(w).substr(pos, lhs.size()) != lhs) continue;
        std::string next = w.substr(0, pos);
        next += rule.rhs;
        next.append(w, pos + lhs.size());
        w = free_reduce(next);
        changed = true;
        break;
      }
    }
  }
  return w;
}

// Row echelon form over the integers with positive pivots.
Matrix integer_echelon(Matrix rows) {
  Matrix out;
  if (rows.empty()) return out;
  const std::size_t width = rows.front().size();
  for (std::size_t col = 0; col < width; ++col) {
    while (true) {
      // Pick the row with the smallest nonzero |entry| in this column.
      std::size_t best = rows.size();
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        if (best == rows.size() || std::llabs(rows[r][col]) < std::llabs(rows[best][col])) best = r;
      }
      if (best == rows.size()) break;
      bool others = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == best || rows[r][col] == 0) continue;
        others = true;
        const std::int64_t q = rows[r][col] / rows[best][col];
        for (std::size_t c = col; c < width; ++c) rows[r][c] -= q * rows[best][c];
      }
      if (!others) {
        auto pivot = std::move(rows[best]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        if (pivot[col] < 0) {
          for (auto& x : pivot) x = -x;
        }
        out.push_back(std::move(pivot));
        break;
      }
    }
  }
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Exponent vector and (optionally) the class-2 commutator coordinates of a
// word, accumulated letter by letter: right multiplication by g_i^s adds
// s*v_j to the (j,i) coordinate for every j < i, then s to v_i.
std::vector<std::int64_t> nilpotent_image(const GroupPresentation& p, std::string_view word, bool with_commutators) {
  const std::size_t n = p.rank();
  const std::size_t pairs = with_commutators ? n * (n - 1) / 2 : 0;
  std::vector<std::int64_t> v(n + pairs, 0);
  auto pair_index = [n](std::size_t j, std::size_t i) { return n + j * (2 * n - j - 1) / 2 + (i - j - 1); };
  for (char c : word) {
    const int rank = p.letter_rank(c);
    const auto i = static_cast<std::size_t>(rank / 2);
    const std::int64_t s = (rank % 2 == 0) ? 1 : -1;
    if (with_commutators) {
      for (std::size_t j = 0; j < i; ++j) v[pair_index(j, i)] += s * v[j];
    }
    v[i] += s;
  }
  return v;
}

}  // namespace

std::size_t QuotientKeyHash::operator()(const QuotientKey& key) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto x : key.coords) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Group::Group(GroupPresentation presentation) : presentation_(std::move(presentation)) {
  const auto& p = presentation_;
  if (p.mode == ReductionMode::dehn) {
    std::set<std::string> symmetrized;
    for (const auto& r : p.relators) {
      for (const std::string& w : {r, inverse_word(r)}) {
        for (std::size_t k = 0; k < w.size(); ++k) symmetrized.insert(w.substr(k) + w.substr(0, k));
      }
    }
    // A subword u of a cyclic relator c = uv with |u| > |c|/2 is replaced by
    // the strictly shorter v^{-1}.
    for (const auto& c : symmetrized) {
      for (std::size_t k = c.size(); 2 * k > c.size(); --k) {
        rules_.push_back({c.substr(0, k), inverse_word(std::string_view(c).substr(k))});
      }
    }
  } else if (p.mode == ReductionMode::rewriting) {
    for (const auto& r : p.rules) rules_.push_back({r.lhs, r.rhs});
  }
  std::stable_sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) { return a.lhs.size() > b.lhs.size(); });

  // Quotient key setup: class-2 coordinates are valid modulo the relator
  // lattice only when every relator has zero exponent sum (its image is
  // then central); otherwise fall back to the abelianization.
  nilpotent_key_ = !p.relators.empty();
  for (const auto& r : p.relators) {
    const auto v = nilpotent_image(p, r, false);
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) nilpotent_key_ = false;
  }
  Matrix rows;
  for (const auto& r : p.relators) rows.push_back(nilpotent_image(p, r, nilpotent_key_));
  lattice_ = integer_echelon(std::move(rows));
}

std::string Group::dehn_reduce(std::string_view word) const { return rewrite_to_normal_form(word, rules_); }

std::string Group::rewrite(std::string_view word) const { return rewrite_to_normal_form(word, rules_); }

std::string Group::reduce(std::string_view word) const {
  switch (presentation_.mode) {
    case ReductionMode::free: return free_reduce(word);
    case ReductionMode::dehn: return dehn_reduce(word);
    case ReductionMode::rewriting: return rewrite(word);
  }
  return std::string(word);
}

bool Group::same_element(std::string_view u, std::string_view v) const {
  if (u == v) return true;
  return is_identity(inverse_word(u) + std::string(v));
}

QuotientKey Group::quotient_key(std::string_view word) const {
  QuotientKey key{nilpotent_image(presentation_, word, nilpotent_key_)};
  for (const auto& row : lattice_) {
    std::size_t col = 0;
    while (row[col] == 0) ++col;
    const std::int64_t q = floor_div(key.coords[col], row[col]);
    if (q == 0) continue;
    for (std::size_t c = col; c < row.size(); ++c) key.coords[c] -= q * row[c];
  }
  return key;
}

GroupElement reduce_word(std::string_view word, const Group& group) {
  for (char c : word) {
    if (!group.presentation().has_letter(c)) throw InputError("unknown letter '" + std::string(1, c) + "'");
  }
  return GroupElement{group.reduce(word)};
}

GroupElement multiply(const GroupElement& x, const GroupElement& y, const Group& group) {
  return GroupElement{group.reduce(x.word + y.word)};
}

GroupElement invert(const GroupElement& x) { return GroupElement{inverse_word(x.word)}; }

std::optional<std::string> find_nonconfluent_pair(const GroupPresentation& p) {
  std::vector<RewriteRule> rules = p.rules;
  for (std::size_t i = 0; i < p.alphabet_size(); ++i) {
    const char a = p.letter_at(static_cast<int>(i));
    rules.push_back({std::string{a} + inverse_word(std::string{a}), ""});
  }
  std::vector<RuleView> views;
  for (const auto& r : rules) views.push_back({r.lhs, r.rhs});
  std::stable_sort(views.begin(), views.end(), [](const RuleView& a, const RuleView& b) { return a.lhs.size() > b.lhs.size(); });

  auto show = [](std::string_view w) { return w.empty() ? std::string("1") : std::string(w); };
  auto check = [&](const std::string& word, const std::string& left, const std::string& right) -> std::optional<std::string> {
    const std::string nl = rewrite_to_normal_form(left, views);
    const std::string nr = rewrite_to_normal_form(right, views);
    if (nl == nr) return std::nullopt;
    return "critical word '" + word + "' resolves to '" + show(nl) + "' and '" + show(nr) + "'";
  };

  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const auto& [l1, r1] = rules[i];
      const auto& [l2, r2] = rules[j];
      // Overlaps: a proper suffix of l1 equals a proper prefix of l2.
      for (std::size_t k = 1; k < l1.size() && k < l2.size(); ++k) {
        if (l1.compare(l1.size() - k, k, l2, 0, k) != 0) continue;
        const std::string word = l1 + l2.substr(k);
        if (auto bad = check(word, r1 + l2.substr(k), l1.substr(0, l1.size() - k) + r2)) return bad;
      }
      // Inclusions: l2 occurs inside l1.
      if (i == j || l2.size() > l1.size()) continue;
      for (std::size_t pos = l1.find(l2); pos != std::string::npos; pos = l1.find(l2, pos + 1)) {
        const std::string other = l1.substr(0, pos) + r2 + l1.substr(pos + l2.size());
        if (auto bad = check(l1, r1, other)) return bad;
      }
    }
  }
  return std::nullopt;
}

}  // namespace affl1
