#include "affl1/bicombing.hpp"

#include <random>
#include <tuple>

#include "affl1/errors.hpp"

namespace affl1 {

std::string_view to_string(BicombingKind kind) {
  switch (kind) {
    case BicombingKind::tree_geodesic: return "tree";
    case BicombingKind::shortlex: return "shortlex";
    case BicombingKind::shortlex_antisymmetrized: return "shortlex-anti";
  }
  return "?";
}

BicombingKind parse_bicombing_kind(std::string_view name) {
  if (name == "tree" || name == "tree_geodesic") return BicombingKind::tree_geodesic;
  if (name == "shortlex") return BicombingKind::shortlex;
  if (name == "shortlex-anti" || name == "shortlex_antisymmetrized") return BicombingKind::shortlex_antisymmetrized;
  throw InputError("unknown bicombing '" + std::string(name) + "' (expected tree, shortlex or shortlex-anti)");
}

Bicombing::Bicombing(const CayleyBall& ball, BicombingKind kind) : ball_(&ball), kind_(kind) {
  if (kind == BicombingKind::tree_geodesic && ball.group().mode() != ReductionMode::free) {
    throw InputError("the tree bicombing requires a free presentation");
  }
}

bool Bicombing::antisymmetric() const {
  return kind_ != BicombingKind::shortlex || ball_->group().mode() == ReductionMode::free;
}

Chain1 Bicombing::path_chain(ElementIndex x, ElementIndex y) const {
  if (x == y) return {};
  const auto z = ball_->multiply(ball_->inverse(x), y);
  if (!z) {
    throw OutOfBallError("x^-1 y for x='" + ball_->word(x) + "', y='" + ball_->word(y) + "' lies outside the ball");
  }
  return Chain1::path(*ball_, x, ball_->word(*z));
}

Chain1 Bicombing::chain(ElementIndex x, ElementIndex y) const {
  if (kind_ != BicombingKind::shortlex_antisymmetrized) return path_chain(x, y);
  return (path_chain(x, y) - path_chain(y, x)).scaled(Rational(1, 2));
}

Bicombing antisymmetrize(const Bicombing& b) { return Bicombing(b.ball(), BicombingKind::shortlex_antisymmetrized); }

Rational area(const Bicombing& b, ElementIndex x, ElementIndex y, ElementIndex z) {
  return l1_norm_of_sum(b.chain(x, y), b.chain(y, z), b.chain(z, x));
}

namespace {

struct Best {
  Rational value{-1};
  std::array<ElementIndex, 3> witness{0, 0, 0};

  void offer(const Rational& v, std::array<ElementIndex, 3> t) {
    if (v > value || (v == value && t < witness)) {
      value = v;
      witness = t;
    }
  }
};

}  // namespace

AreaScan empirical_area_constant(const Bicombing& b, const SamplingPolicy& policy) {
  const auto n = static_cast<ElementIndex>(b.ball().count_within(policy.radius));
  AreaScan scan;
  Best best;
  const std::uint64_t unordered = static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 6;
  const bool orientation_matters = !b.antisymmetric();

  if (!policy.force_sampling && unordered <= policy.exhaustive_limit) {
    scan.exhaustive = true;
    // Chains between all pairs of the scanned ball, computed once.
    std::vector<Chain1> chains(static_cast<std::size_t>(n) * n);
    for (ElementIndex x = 0; x < n; ++x) {
      for (ElementIndex y = 0; y < n; ++y) {
        if (x != y) chains[static_cast<std::size_t>(x) * n + y] = b.chain(x, y);
      }
    }
    auto q = [&](ElementIndex x, ElementIndex y) -> const Chain1& { return chains[static_cast<std::size_t>(x) * n + y]; };
    // Cyclic rotations of a triple have equal area; degenerate triples are
    // covered for completeness.
    for (ElementIndex x = 0; x < n; ++x) {
      for (ElementIndex y = 0; y < n; ++y) {
        if (y == x) continue;
        const Rational degenerate = chain_l1_norm(q(x, y) + q(y, x));
        best.offer(degenerate, {x, x, y});
        ++scan.triples;
      }
    }
    for (ElementIndex x = 0; x < n; ++x) {
      for (ElementIndex y = x + 1; y < n; ++y) {
        for (ElementIndex z = y + 1; z < n; ++z) {
          best.offer(l1_norm_of_sum(q(x, y), q(y, z), q(z, x)), {x, y, z});
          ++scan.triples;
          if (orientation_matters) {
            best.offer(l1_norm_of_sum(q(x, z), q(z, y), q(y, x)), {x, z, y});
            ++scan.triples;
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(policy.seed);
    std::uniform_int_distribution<ElementIndex> pick(0, n - 1);
    for (std::size_t i = 0; i < policy.samples; ++i) {
      const ElementIndex x = pick(rng);
      const ElementIndex y = pick(rng);
      const ElementIndex z = pick(rng);
      best.offer(area(b, x, y, z), {x, y, z});
      ++scan.triples;
    }
  }
  scan.constant = best.value < Rational(0) ? Rational(0) : best.value;
  scan.witness = best.witness;
  return scan;
}

QuasiGeodesicFit quasi_geodesic_constants(const Bicombing& b, int radius) {
  const auto n = static_cast<ElementIndex>(b.ball().count_within(radius));
  QuasiGeodesicFit fit;
  fit.lambda = Rational(1);
  fit.additive = Rational(0);
  bool first_lambda = true;
  for (ElementIndex x = 0; x < n; ++x) {
    for (ElementIndex y = 0; y < n; ++y) {
      if (x == y) continue;
      const Rational norm = chain_l1_norm(b.chain(x, y));
      const Rational d(word_distance(x, y, b.ball()));
      ++fit.pairs;
      if (norm < d && fit.lower_bound_holds) {
        fit.lower_bound_holds = false;
        fit.lower_bound_witness = {x, y};
      }
      const Rational ratio = norm / d;
      if (first_lambda || ratio > fit.lambda) fit.lambda = ratio;
      first_lambda = false;
      if (norm - d > fit.additive) fit.additive = norm - d;
    }
  }
  return fit;
}

}  // namespace affl1
