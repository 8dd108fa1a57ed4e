// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "affl1/actions.hpp"
#include "affl1/errors.hpp"
#include "affl1/report.hpp"
#include "cli_support.hpp"
#include "test_support.hpp"

using namespace affl1;
namespace ts = testing_support;
namespace cs = cli_support;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::vector<ElementIndex> first(std::size_t n) {
  std::vector<ElementIndex> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<ElementIndex>(i);
  return s;
}

void ac1(Outcome& out) {
  const auto big = ts::ball("f2.pres", 10);
  const Bicombing q(big, BicombingKind::tree_geodesic);

  SamplingPolicy sampled;
  sampled.radius = 5;
  sampled.samples = 5000;
  sampled.seed = 2024;
  sampled.force_sampling = true;
  const AreaScan s = empirical_area_constant(q, sampled);
  out.require(s.triples == 5000 && s.constant == Rational(0), "M_emp = 0 on 5000 sampled triples of ball(5)");

  SamplingPolicy exhaustive;
  exhaustive.radius = 3;
  const AreaScan e = empirical_area_constant(q, exhaustive);
  out.require(e.exhaustive && e.constant == Rational(0), "M_emp = 0 exhaustively on ball(3)");

  const auto k = kernel_from_bicombing(q, 5);
  out.require(k.size() == 485, "ball(5) has 485 elements");
  bool metric = true;
  for (ElementIndex x = 0; x < k.size(); ++x)
    for (ElementIndex y = 0; y < k.size(); ++y) metric = metric && k.exact(x, y) == Rational(word_distance(x, y, big));
  out.require(metric, "K = d exactly on ball(5)");

  double worst = 0.0;
  for (ElementIndex x = 1; x < k.size(); ++x)
    worst = std::max(worst, std::abs(norm_e(cocycle(x), k) - (std::sqrt(big.length(x)) + 2.0)));
  out.require(worst <= 1e-9, "norm formula within 1e-9");

  double residual = 0.0;
  const auto n2 = static_cast<ElementIndex>(big.count_within(2));
  for (ElementIndex x = 0; x < n2; ++x)
    for (ElementIndex y = 0; y < n2; ++y) residual = std::max(residual, check_cocycle_identity(big, x, y));
  out.require(residual == 0.0, "cocycle residual 0 on ball(2)^2");

  OptimizerConfig cfg;
  cfg.seed = 2024;
  double op = 0.0;
  for (ElementIndex x = 0; x < n2; ++x) op = std::max(op, op_norm_lower_bound(k, x, 2, cfg).lower_bound);
  out.require(op <= 1.0 + 1e-9, "op-norm lower bounds <= 1 + 1e-9");
  out.detail << "triples=" << s.triples << "+" << e.triples << " norm_gap=" << worst << " max_opnorm=" << op;
}

void ac2(Outcome& out) {
  const auto f = ts::ball("f2.pres", 8);
  const Bicombing tree(f, BicombingKind::tree_geodesic);
  const auto kf = kernel_from_bicombing(tree, 4);
  const double ef = cnd_min_eigenvalue(kf, first(kf.size()));
  out.require(ef >= -1e-9, "F2 ball(4) CND");
  out.require(kernel_cross_validate(kf, tree) == Rational(0), "F2 cross-validation exact");

  const auto s = ts::ball("surface2.pres", 4);
  const Bicombing anti(s, BicombingKind::shortlex_antisymmetrized);
  const auto ks = kernel_from_bicombing(anti, 2);
  const double es = cnd_min_eigenvalue(ks, first(ks.size()));
  out.require(es >= -1e-9, "surface ball(2) CND");
  out.require(kernel_cross_validate(ks, anti) == Rational(0), "surface cross-validation exact");
  out.detail << "min_eig F2=" << ef << " surface=" << es;
}

void ac3(Outcome& out) {
  const auto s = ts::ball("surface2.pres", 6);
  const Bicombing anti(s, BicombingKind::shortlex_antisymmetrized);
  const auto k = kernel_from_bicombing(anti, 4);
  const auto n2 = static_cast<ElementIndex>(s.count_within(2));

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<ElementIndex> pick(0, n2 - 1);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  int failures = 0, positive = 0;
  double margin = -INFINITY;
  for (int i = 0; i < 200; ++i) {
    const ElementIndex g = pick(rng);
    std::vector<EVector::Entry> entries;
    double sum = 0.0;
    const int size = 2 + static_cast<int>(rng() % 7);
    for (int j = 0; j + 1 < size; ++j) {
      entries.emplace_back(pick(rng), coeff(rng));
      sum += entries.back().second;
    }
    entries.emplace_back(pick(rng), -sum);
    const BoundCheck c = per_vector_bound_check(k, g, EVector(std::move(entries)), 1e-9);
    if (!c.pass) ++failures;
    if (c.delta > 0) ++positive;
    margin = std::max(margin, c.lhs - c.rhs);
  }
  out.require(failures == 0, "per-vector bound on 200 seeded (s,v)");

  bool replay = true;
  Rational max_excess(0), max_bound(0);
  std::size_t pairs = 0;
  for (ElementIndex g = 0; g < n2; ++g) {
    const ExcessReport r = displacement_excess(k, g, first(n2));
    replay = replay && r.decomposition_checked && r.decomposition_holds;
    max_excess = std::max(max_excess, *r.exact_excess);
    max_bound = std::max(max_bound, r.max_area_sum);
    pairs += r.pairs;
  }
  out.require(replay, "pairwise excess <= two-triangle area sum");
  out.detail << "pairs with positive delta=" << positive << " max(lhs-rhs)=" << margin << " replayed pairs=" << pairs
             << " max_excess=" << max_excess << " max_area_sum=" << max_bound;
}

void ac4(Outcome& out) {
  const auto f = ts::ball("f2.pres", 10);
  const Bicombing tree(f, BicombingKind::tree_geodesic);
  const auto s = ts::ball("surface2.pres", 6);
  const Bicombing anti(s, BicombingKind::shortlex_antisymmetrized);
  std::size_t checked = 0;
  for (const Bicombing* b : {&tree, &anti}) {
    const CayleyBall& ball = b->ball();
    for (ElementIndex x = 0; x < ball.count_within(5); ++x, ++checked)
      out.require(chain_l1_norm(b->chain(0, x)) >= Rational(ball.length(x)), "|q[e,s]|_1 >= d(e,s)");
  }
  const auto kf = kernel_from_bicombing(tree, 5);
  const auto ks = kernel_from_bicombing(anti, 3);
  const NormReport rf = properness_report(kf), rs = properness_report(ks);
  out.require(rf.pass() && rf.lower_bounds_checked, "F2 norm rows >= sqrt(d)+2");
  out.require(rs.pass() && rs.lower_bounds_checked, "surface norm rows >= sqrt(d)+2");
  out.detail << "chains=" << checked << " rows=" << rf.rows.size() + rs.rows.size();
}

void ac5(Outcome& out) {
  const auto f = ts::ball("f2.pres", 5);
  const TreeActionSpec id = load_action(ts::data("f2_identity.act"), f.presentation());
  const auto k = orbit_kernel(id, f, 5);
  out.require(displacement_constant_scan(k, 2, 3).constant == 0.0, "identity action M = 0");
  const GrowthReport g = orbit_growth_report(k);
  bool growth = g.sphere_max.size() == 6;
  for (int n = 1; growth && n <= 5; ++n)
    growth = std::abs(g.sphere_max[static_cast<std::size_t>(n)] - (std::sqrt(n) + 2.0)) <= 1e-9;
  out.require(growth, "identity action growth sqrt(n)+2");
  out.require(g.unbounded, "identity action verdict unbounded");

  const auto b = ts::ball("f2xf2.pres", 4);
  const TreeActionSpec proj = load_action(ts::data("f2xf2_projection.act"), b.presentation());
  const auto kp = orbit_kernel(proj, b, 4);
  std::vector<ElementIndex> trivial_factor, acting_factor;
  for (ElementIndex i = 0; i < b.size(); ++i) {
    const bool has_first = b.word(i).find_first_of("aAbB") != std::string::npos;
    const bool has_second = b.word(i).find_first_of("cCdD") != std::string::npos;
    if (!has_first) trivial_factor.push_back(i);
    if (!has_second) acting_factor.push_back(i);
  }
  const GrowthReport gt = orbit_growth_report(kp, trivial_factor);
  bool constant = true;
  for (const auto& row : gt.norms.rows) constant = constant && row.norm_e == 2.0;
  out.require(constant && !gt.unbounded, "projection: |b|_E = 2 on the trivially acting factor");
  const GrowthReport ga = orbit_growth_report(kp, acting_factor);
  out.require(ga.unbounded, "projection: unbounded along the first factor");

  std::ostringstream tree_csv;
  tree_csv << "delta: 0\nx,y,d,K\n";
  const auto n = static_cast<ElementIndex>(f.count_within(2));
  for (ElementIndex x = 0; x < n; ++x)
    for (ElementIndex y = x + 1; y < n; ++y) {
      const double d = word_distance(x, y, f);
      tree_csv << display_word(f.word(x)) << ',' << display_word(f.word(y)) << ',' << d << ','
               << (x == 2 && y == 7 ? d + 0.5 : d) << '\n';
    }
  std::string exact = tree_csv.str();
  const QuasiTreeVerdict perturbed = validate_quasitree_kernel(parse_quasitree_kernel(exact));
  const auto expected = std::make_pair(display_word(f.word(2)), display_word(f.word(7)));
  out.require(!perturbed.pass && perturbed.witness == expected, "perturbed kernel rejected with the right witness");
  std::ostringstream clean;
  clean << "delta: 0\nx,y,d,K\n";
  for (ElementIndex x = 0; x < n; ++x)
    for (ElementIndex y = x + 1; y < n; ++y)
      clean << display_word(f.word(x)) << ',' << display_word(f.word(y)) << ',' << word_distance(x, y, f) << ','
            << word_distance(x, y, f) << '\n';
  out.require(validate_quasitree_kernel(parse_quasitree_kernel(clean.str())).pass, "exact tree kernel accepted");
  out.detail << "fitted_c=" << g.fitted_c << " witness=(" << expected.first << "," << expected.second << ")";
}

void ac6(Outcome& out) {
  const cs::fs::path dir = cs::scratch_dir("acceptance");
  const std::string pres = " --presentation " + cs::data_arg("f2.pres") + " --radius 2 --out \"" + dir.string() + "\"";
  out.require(cs::run("kernel" + pres, dir).exit_code == 0, "kernel dump");
  const cs::fs::path kernel = dir / "kernel.csv";
  const std::string clean = cs::read_file(kernel);
  const int before = cs::run("verify" + pres + " --kernel \"" + kernel.string() + "\"", dir).exit_code;

  std::string corrupted = clean;
  const std::string entry = "\n5,5,0\n";
  const auto pos = corrupted.find(entry);
  out.require(pos != std::string::npos, "diagonal entry present");
  if (pos != std::string::npos) corrupted.replace(pos, entry.size(), "\n5,5,1\n");
  std::ofstream(kernel) << corrupted;
  const cs::Run after = cs::run("verify" + pres + " --kernel \"" + kernel.string() + "\"", dir);
  const cs::Csv report = cs::read_csv(dir / "verify.csv");
  std::string witness;
  for (const auto& row : report.rows)
    if (row.size() >= 4 && row[1] == "fail" && witness.empty()) witness = row[0] + ": " + row[3];
  out.require(before == 0, "clean kernel verifies (exit 0)");
  out.require(after.exit_code == 1, "corrupted kernel fails (exit 1)");
  out.require(witness.find("x=aa") != std::string::npos, "witness names the corrupted element");
  out.detail << "exit " << before << " -> " << after.exit_code << ", witness '" << witness << "'";
  cs::fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    double limit_seconds;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "free-group exactness", 10.0, ac1},
      {"AC2", "CND certification", 30.0, ac2},
      {"AC3", "displacement inequality replay", 60.0, ac3},
      {"AC4", "properness lower bound", 0.0, ac4},
      {"AC5", "tree-action pipeline", 10.0, ac5},
      {"AC6", "sabotage sensitivity", 0.0, ac6},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      out.pass = false;
      out.detail << " [runtime limit " << c.limit_seconds << " s exceeded]";
    }
    if (!out.pass) ++failed;
    std::cout << c.id << ' ' << (out.pass ? "PASS" : "FAIL") << "  " << c.title << " (" << secs << " s)  "
              << out.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
