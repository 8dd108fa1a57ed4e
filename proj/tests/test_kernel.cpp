#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <sstream>

#include "affl1/errors.hpp"
#include "affl1/kernel.hpp"
#include "test_support.hpp"

using namespace affl1;
namespace ts = testing_support;

namespace {

// Slot-by-slot expansion of J, independent of the library's encoding.
std::map<std::pair<std::uint64_t, std::int64_t>, int> slots(const Chain1& c) {
  std::map<std::pair<std::uint64_t, std::int64_t>, int> out;
  for (const auto& [edge, value] : c.coefficients()) {
    REQUIRE(value.is_integer());
    const std::int64_t a = value.num();
    if (a > 0)
      for (std::int64_t k = 1; k <= a; ++k) out[{edge.key(), k}] = 1;
    else
      for (std::int64_t k = a + 1; k <= 0; ++k) out[{edge.key(), k}] = -1;
  }
  return out;
}

std::int64_t slot_distance(const Chain1& u, const Chain1& w) {
  auto su = slots(u);
  for (const auto& [coord, v] : slots(w)) su[coord] -= v;
  std::int64_t total = 0;
  for (const auto& [coord, v] : su) total += static_cast<std::int64_t>(v) * v;
  return total;
}

std::vector<ElementIndex> first(std::size_t n) {
  std::vector<ElementIndex> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<ElementIndex>(i);
  return s;
}

}  // namespace

TEST_CASE("feature embedding examples") {
  const Chain1 one = Chain1::edge({0, 0}, Rational(1));
  const FeatureVector j = feature_embed(one);
  REQUIRE(j.entries().size() == 1);
  CHECK(j.entries()[0].coord.slot == 1);
  CHECK(j.entries()[0].value == 1);
  CHECK(squared_distance(j, feature_embed(Chain1())) == 1);

  const Chain1 v = Chain1::edge({3, 1}, Rational(2));
  const Chain1 w = Chain1::edge({3, 1}, Rational(-1));
  CHECK(squared_distance(feature_embed(v), feature_embed(w)) == 3);
  CHECK(feature_embed(w).entries()[0].coord.slot == 0);
  CHECK(feature_embed(w).entries()[0].value == -1);
  CHECK_THROWS_AS(feature_embed(Chain1::edge({0, 0}, Rational(1, 2))), InputError);
}

TEST_CASE("J identity on random integer chains") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<ElementIndex> vertex(0, 30);
  for (int trial = 0; trial < 100; ++trial) {
    Chain1 u, w;
    for (int i = 0; i < 8; ++i) {
      u += Chain1::edge({vertex(rng), static_cast<std::uint8_t>(rng() % 2)}, Rational(coeff(rng)));
      w += Chain1::edge({vertex(rng), static_cast<std::uint8_t>(rng() % 2)}, Rational(coeff(rng)));
    }
    const std::int64_t expected = slot_distance(u, w);
    CHECK(squared_distance(feature_embed(u), feature_embed(w)) == expected);
    CHECK(Rational(expected) == l1_distance(u, w));
  }
}

TEST_CASE("tree kernel equals the word metric") {
  const auto f = ts::ball("f2.pres", 8);
  const Bicombing q(f, BicombingKind::tree_geodesic);
  const auto k = kernel_from_bicombing(q, 4);
  CHECK(k.size() == 161);
  CHECK(k.provenance() == KernelProvenance::bicombing);
  for (ElementIndex x = 0; x < k.size(); ++x) {
    CHECK(k.exact(x, x) == Rational(0));
    CHECK(k.exact(0, x) == chain_l1_norm(q.chain(0, x)));
    for (ElementIndex y = 0; y < k.size(); ++y) {
      CHECK(k.exact(x, y) == Rational(word_distance(x, y, f)));
      CHECK(k(x, y) == static_cast<double>(word_distance(x, y, f)));
    }
  }
  CHECK(k.displacement_constant() == 0.0);
  CHECK(structural_defects(k).empty());
}

TEST_CASE("kernel cross-validation is exact") {
  const auto f = ts::ball("f2.pres", 6);
  const Bicombing q(f, BicombingKind::tree_geodesic);
  CHECK(kernel_cross_validate(q, 3) == Rational(0));
  CHECK(kernel_cross_validate(q, 1) == Rational(0));
  const auto s = ts::ball("surface2.pres", 4);
  for (const auto kind : {BicombingKind::shortlex, BicombingKind::shortlex_antisymmetrized}) {
    const Bicombing b(s, kind);
    const auto k = kernel_from_bicombing(b, 2);
    CHECK(kernel_cross_validate(k, b) == Rational(0));
  }
}

TEST_CASE("surface kernel matches the independent oracle") {
  const auto s = ts::ball("surface2.pres", 4);
  const Bicombing anti(s, BicombingKind::shortlex_antisymmetrized);
  const auto k = kernel_from_bicombing(anti, 2);
  REQUIRE(k.size() == 65);
  // Values from tests/oracles/surface_area.py with numpy.
  Rational total(0);
  for (ElementIndex x = 0; x < k.size(); ++x)
    for (ElementIndex y = 0; y < k.size(); ++y) total += k.exact(x, y);
  CHECK(total == Rational(14464));
  CHECK(k.exact(*s.find("ab"), *s.find("dc")) == Rational(4));
  CHECK(cnd_min_eigenvalue(k, first(k.size())) == doctest::Approx(0.089344886098965).epsilon(1e-9));
}

TEST_CASE("CND certification") {
  CHECK(cnd_min_eigenvalue(std::vector<double>(16, 0.0), 4) == doctest::Approx(0.0));
  const auto f = ts::ball("f2.pres", 6);
  const auto tree = kernel_from_bicombing(Bicombing(f, BicombingKind::tree_geodesic), 3);
  CHECK(cnd_min_eigenvalue(tree, first(tree.size())) >= -kCndTolerance);
  for (const char* name : {"surface2.pres", "f2xf2.pres", "z2.pres"}) {
    CAPTURE(name);
    const auto b = ts::ball(name, 4);
    for (const auto kind : {BicombingKind::shortlex, BicombingKind::shortlex_antisymmetrized}) {
      const auto k = kernel_from_bicombing(Bicombing(b, kind), 2);
      CHECK(cnd_min_eigenvalue(k, first(k.size())) >= -kCndTolerance);
    }
  }
  // max(d - 1, 0) on a path of 5 points: -1/(2 sqrt 5) per numpy.
  std::vector<double> path(25);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) path[static_cast<std::size_t>(i * 5 + j)] = std::max(std::abs(i - j) - 1, 0);
  CHECK(cnd_min_eigenvalue(path, 5) == doctest::Approx(-0.2236067977499789).epsilon(1e-12));
  CHECK_THROWS_AS(cnd_min_eigenvalue(path, 1), InputError);
}

TEST_CASE("quadratic form agrees with the Gram form of J") {
  const auto s = ts::ball("surface2.pres", 4);
  const Bicombing raw(s, BicombingKind::shortlex);
  const auto k = kernel_from_bicombing(raw, 2);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<ElementIndex> pick(0, static_cast<ElementIndex>(k.size() - 1));
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<ElementIndex, int>> v;
    int sum = 0;
    for (int i = 0; i < 5; ++i) {
      v.emplace_back(pick(rng), coeff(rng));
      sum += v.back().second;
    }
    v.emplace_back(pick(rng), -sum);
    // -1/2 sum v_x v_y K(x,y) = |sum v_x J(q[e,x])|^2 for mean-zero v.
    double form = 0.0;
    for (const auto& [x, a] : v)
      for (const auto& [y, b] : v) form += -0.5 * a * b * k(x, y);
    std::map<std::pair<std::uint64_t, std::int64_t>, long long> combo;
    for (const auto& [x, a] : v)
      for (const auto& [coord, val] : slots(raw.chain(0, x))) combo[coord] += static_cast<long long>(a) * val;
    long long gram = 0;
    for (const auto& [coord, val] : combo) gram += val * val;
    CHECK(form == doctest::Approx(static_cast<double>(gram)));
  }
}

TEST_CASE("displacement excess") {
  const auto f = ts::ball("f2.pres", 8);
  const auto tree = kernel_from_bicombing(Bicombing(f, BicombingKind::tree_geodesic), 4);
  for (ElementIndex s = 0; s < f.count_within(2); ++s) {
    const ExcessReport r = displacement_excess(tree, s, first(f.count_within(2)));
    CHECK(r.excess == 0.0);
    CHECK(*r.exact_excess == Rational(0));
    CHECK(r.decomposition_holds);
  }
  const DisplacementScan scan = displacement_constant_scan(tree, 2, 2);
  CHECK(scan.constant == 0.0);

  // Surface group, s = a, S = ball(2): every pairwise excess is below the
  // exact two-triangle area sum, hence below 2 M_emp.
  const auto s = ts::ball("surface2.pres", 6);
  const Bicombing anti(s, BicombingKind::shortlex_antisymmetrized);
  const auto k = kernel_from_bicombing(anti, 3);
  SamplingPolicy policy;
  policy.radius = 3;
  const AreaScan m = empirical_area_constant(anti, policy);
  const ExcessReport r = displacement_excess(k, *s.find("a"), first(s.count_within(2)));
  CHECK(r.decomposition_checked);
  CHECK(r.decomposition_holds);
  CHECK(*r.exact_excess <= r.max_area_sum);
  CHECK(r.max_area_sum <= m.constant * Rational(2));
  CHECK(r.excess <= 2.0 * m.constant.to_double());
  // The raw displacement is not zero everywhere on this ball.
  const auto k4 = kernel_from_bicombing(anti, 4);
  Rational largest(0);
  for (ElementIndex g = 1; g < s.count_within(2); ++g) {
    const ExcessReport rg = displacement_excess(k4, g, first(s.count_within(2)));
    CHECK(rg.decomposition_holds);
    largest = std::max(largest, *rg.exact_excess);
  }
  CHECK(largest > Rational(0));
  CHECK(r.pairs == 65 * 65);
  CHECK_THROWS_AS(displacement_excess(k, *s.find("abc"), first(s.count_within(2))), OutOfBallError);
}

TEST_CASE("structural defects and CSV round trip") {
  const auto f = ts::ball("f2.pres", 4);
  const auto k = kernel_from_bicombing(Bicombing(f, BicombingKind::tree_geodesic), 2);
  std::stringstream io;
  write_kernel_csv(io, k);
  const std::string text = io.str();
  CHECK(text.rfind("i,j,K\n0,0,0\n0,1,1\n", 0) == 0);
  std::istringstream in(text);
  const auto back = read_kernel_csv(in, f);
  CHECK(back.provenance() == KernelProvenance::user_supplied);
  REQUIRE(back.size() == k.size());
  for (ElementIndex x = 0; x < k.size(); ++x)
    for (ElementIndex y = 0; y < k.size(); ++y) CHECK(back(x, y) == k(x, y));

  DisplacementKernel bad = back;
  bad.set_entry(3, 3, 1.0);
  bad.set_entry(1, 2, -1.0);
  bad.set_entry(4, 5, 7.0);
  const auto defects = structural_defects(bad);
  REQUIRE(defects.size() >= 3);
  CHECK(defects.front().i == 1);

  std::istringstream missing("i,j,K\n0,0,0\n0,1,1\n");
  CHECK_THROWS_AS(read_kernel_csv(missing, f), InputError);
  std::istringstream no_header("0,0,0\n");
  CHECK_THROWS_AS(read_kernel_csv(no_header, f), InputError);
  std::istringstream garbage("i,j,K\n0,x,0\n");
  CHECK_THROWS_AS(read_kernel_csv(garbage, f), InputError);
}
