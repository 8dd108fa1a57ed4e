#include "affl1/commands.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <random>

#include "affl1/actions.hpp"
#include "affl1/errors.hpp"
#include "affl1/report.hpp"

namespace affl1 {

namespace {

constexpr std::size_t kDenseCndLimit = 2000;

BicombingKind effective_kind(const RunConfig& config, const GroupPresentation& p) {
  if (config.bicombing_given) return config.bicombing;
  return p.mode == ReductionMode::free ? BicombingKind::tree_geodesic : BicombingKind::shortlex_antisymmetrized;
}

void describe(CsvReport& report, const RunConfig& config, const GroupPresentation& p) {
  report.meta("command", config.command);
  report.meta("presentation", config.presentation.string());
  report.meta("generating_set", p.generating_set());
  report.meta("mode", std::string(to_string(p.mode)));
  report.meta("radius", std::to_string(config.radius));
  report.meta("seed", std::to_string(config.seed));
  report.meta("tol", format_double(config.tol));
}

CayleyBall make_ball(const GroupPresentation& p, int radius, const RunConfig& config) {
  return CayleyBall::build(Group(p), radius, config.cap);
}

std::string word_of(const CayleyBall& ball, ElementIndex i) { return display_word(ball.word(i)); }

struct Check {
  std::string name;
  bool pass = true;
  bool skipped = false;
  std::string value;
  std::string witness;
};

}  // namespace

int cmd_ball(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  const auto ball = make_ball(p, config.radius, config);
  CsvReport report("sphere,count");
  describe(report, config, p);
  report.meta("size", std::to_string(ball.size()));
  const auto spheres = ball.sphere_sizes();
  for (std::size_t n = 0; n < spheres.size(); ++n) report.row(csv_line({std::to_string(n), std::to_string(spheres[n])}));
  report.write(config.out / "ball.csv");
  log << "ball radius " << config.radius << ": " << ball.size() << " elements\n";
  return kExitPass;
}

int cmd_bicombing_stats(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  const BicombingKind kind = effective_kind(config, p);
  // Triangles with vertices in ball(r) have combing paths within ball(2r).
  const int working = 2 * config.radius;
  const auto ball = make_ball(p, working, config);

  CsvReport report("bicombing,M_emp,witness_x,witness_y,witness_z,triples,exhaustive,lambda_emp,c_emp,lower_bound_holds,ball_relative");
  describe(report, config, p);
  report.meta("working_radius", std::to_string(working));

  std::vector<Bicombing> combings{Bicombing(ball, kind)};
  if (kind == BicombingKind::shortlex) combings.push_back(antisymmetrize(combings.front()));
  SamplingPolicy policy;
  policy.radius = config.radius;
  policy.seed = config.seed;
  int status = kExitPass;
  for (const auto& b : combings) {
    const AreaScan scan = empirical_area_constant(b, policy);
    const QuasiGeodesicFit fit = quasi_geodesic_constants(b, config.radius);
    if (!fit.lower_bound_holds) status = kExitViolation;
    report.row(csv_line({std::string(to_string(b.kind())), scan.constant.to_string(), word_of(ball, scan.witness[0]),
                         word_of(ball, scan.witness[1]), word_of(ball, scan.witness[2]), std::to_string(scan.triples),
                         scan.exhaustive ? "true" : "false", fit.lambda.to_string(), fit.additive.to_string(),
                         fit.lower_bound_holds ? "true" : "false", b.ball_relative() ? "true" : "false"}));
    log << to_string(b.kind()) << ": M_emp = " << scan.constant << " (" << scan.triples << " triples, "
        << (scan.exhaustive ? "exhaustive" : "sampled") << "), lambda = " << fit.lambda << ", c = " << fit.additive << '\n';
  }
  report.write(config.out / "bicombing_stats.csv");
  return status;
}

int cmd_kernel(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  const auto ball = make_ball(p, config.radius, config);
  const Bicombing b(ball, effective_kind(config, p));
  const auto k = kernel_from_bicombing(b, config.radius);
  std::filesystem::create_directories(config.out);
  std::ofstream out(config.out / "kernel.csv");
  out << "# presentation: " << config.presentation.string() << '\n'
      << "# generating_set: " << p.generating_set() << '\n'
      << "# bicombing: " << to_string(b.kind()) << '\n'
      << "# radius: " << config.radius << '\n'
      << "# seed: " << config.seed << '\n';
  write_kernel_csv(out, k);
  log << "kernel over " << k.size() << " elements, displacement constant " << k.displacement_constant() << '\n';
  return kExitPass;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  const BicombingKind kind = effective_kind(config, p);
  const int r = config.radius;
  const int half = r / 2;
  const auto ball = make_ball(p, r + (r + 1) / 2, config);
  const Bicombing b(ball, kind);

  std::optional<DisplacementKernel> loaded;
  if (!config.kernel.empty()) {
    std::ifstream in(config.kernel);
    if (!in) throw InputError("cannot open kernel file '" + config.kernel.string() + "'");
    loaded.emplace(read_kernel_csv(in, ball));
  } else {
    loaded.emplace(kernel_from_bicombing(b, r));
  }
  const DisplacementKernel& k = *loaded;
  const bool from_bicombing = k.provenance() == KernelProvenance::bicombing;
  std::vector<Check> checks;

  auto guarded = [&](const std::string& name, auto&& body) {
    Check c;
    c.name = name;
    try {
      body(c);
    } catch (const InvariantError& e) {
      c.pass = false;
      c.witness = e.what();
    } catch (const OutOfBallError& e) {
      c.pass = false;
      c.witness = e.what();
    }
    checks.push_back(std::move(c));
  };

  guarded("kernel_structure", [&](Check& c) {
    const auto defects = structural_defects(k);
    c.value = std::to_string(defects.size());
    if (!defects.empty()) {
      c.pass = false;
      const auto& d = defects.front();
      c.witness = d.what + " at x=" + word_of(ball, d.i) + " y=" + word_of(ball, d.j) + " value " + format_double(d.value);
    }
  });

  guarded("cnd_min_eigenvalue", [&](Check& c) {
    int cr = r;
    while (cr > 0 && ball.count_within(cr) > kDenseCndLimit) --cr;
    std::vector<ElementIndex> support(std::min(k.size(), ball.count_within(cr)));
    for (std::size_t i = 0; i < support.size(); ++i) support[i] = static_cast<ElementIndex>(i);
    const double ev = cnd_min_eigenvalue(k, support);
    c.value = format_double(ev);
    c.pass = ev >= -kCndTolerance;
    if (!c.pass) c.witness = "centered form negative on ball(" + std::to_string(cr) + ")";
  });

  guarded("kernel_cross_validate", [&](Check& c) {
    if (!from_bicombing) {
      c.skipped = true;
      return;
    }
    const Rational gap = kernel_cross_validate(k, b);
    c.value = gap.to_string();
    c.pass = gap == Rational(0);
  });

  guarded("cocycle_identity", [&](Check& c) {
    const auto n = static_cast<ElementIndex>(ball.count_within(half));
    double worst = 0.0;
    for (ElementIndex s = 0; s < n; ++s) {
      for (ElementIndex t = 0; t < n; ++t) {
        const double res = check_cocycle_identity(ball, s, t);
        if (res > worst) {
          worst = res;
          c.witness = "(" + word_of(ball, s) + "," + word_of(ball, t) + ")";
        }
      }
    }
    c.value = format_double(worst);
    c.pass = worst == 0.0;
  });

  guarded("cocycle_norm_formula", [&](Check& c) {
    double worst = 0.0;
    for (ElementIndex s = 1; s < k.size(); ++s) {
      const double gap = std::abs(norm_e(cocycle(s), k) - (std::sqrt(std::max(k(s, 0), 0.0)) + 2.0));
      if (gap > worst) {
        worst = gap;
        c.witness = word_of(ball, s);
      }
    }
    c.value = format_double(worst);
    c.pass = worst <= config.tol;
  });

  guarded("per_vector_bound", [&](Check& c) {
    const auto n = static_cast<ElementIndex>(ball.count_within(half));
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<ElementIndex> pick(0, n - 1);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::size_t failures = 0;
    double worst_margin = -INFINITY;
    for (std::size_t i = 0; i < config.samples; ++i) {
      const ElementIndex s = pick(rng);
      const std::size_t support_size = std::min<std::size_t>(2 + rng() % 7, n);
      std::vector<EVector::Entry> entries;
      double sum = 0.0;
      for (std::size_t j = 0; j + 1 < support_size; ++j) {
        entries.emplace_back(pick(rng), coeff(rng));
        sum += entries.back().second;
      }
      entries.emplace_back(pick(rng), -sum);
      const BoundCheck check = per_vector_bound_check(k, s, EVector(std::move(entries)), config.tol);
      worst_margin = std::max(worst_margin, check.lhs - check.rhs);
      if (!check.pass) {
        if (failures++ == 0) c.witness = "s=" + word_of(ball, s) + " lhs=" + format_double(check.lhs) + " rhs=" + format_double(check.rhs);
      }
    }
    c.value = "max(lhs-rhs)=" + format_double(worst_margin);
    c.pass = failures == 0;
  });

  guarded("displacement_decomposition", [&](Check& c) {
    if (!from_bicombing || !b.antisymmetric()) {
      c.skipped = true;
      return;
    }
    const auto n = static_cast<ElementIndex>(ball.count_within(half));
    std::vector<ElementIndex> support(n);
    for (ElementIndex i = 0; i < n; ++i) support[i] = i;
    Rational worst(0);
    for (ElementIndex s = 1; s < n; ++s) {
      const ExcessReport ex = displacement_excess(k, s, support);
      if (ex.exact_excess && *ex.exact_excess > worst) worst = *ex.exact_excess;
      if (!ex.decomposition_holds && c.pass) {
        c.pass = false;
        c.witness = "s=" + word_of(ball, s) + " x=" + word_of(ball, ex.decomposition_witness[0]) +
                    " y=" + word_of(ball, ex.decomposition_witness[1]);
      }
    }
    c.value = "max_excess=" + worst.to_string();
  });

  guarded("properness", [&](Check& c) {
    if (!from_bicombing) {
      c.skipped = true;
      return;
    }
    const NormReport norms = properness_report(k);
    c.value = std::to_string(norms.rows.size()) + " rows";
    if (!norms.pass()) {
      c.pass = false;
      c.witness = word_of(ball, norms.failures.front());
    }
    for (ElementIndex s = 1; s < k.size() && c.pass; ++s) {
      if (chain_l1_norm(b.chain(0, s)) < Rational(ball.length(s))) {
        c.pass = false;
        c.witness = "‖q[e," + word_of(ball, s) + "]‖₁ < d";
      }
    }
  });

  CsvReport report("check,status,value,witness");
  describe(report, config, p);
  report.meta("bicombing", std::string(to_string(kind)));
  report.meta("kernel", config.kernel.empty() ? std::string("built from bicombing") : config.kernel.string());
  report.meta("displacement_constant", format_double(k.displacement_constant()));
  report.meta("ball_relative", b.ball_relative() ? "true" : "false");
  bool all = true;
  for (const auto& c : checks) {
    const std::string status = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
    if (!c.skipped && !c.pass) all = false;
    report.row(csv_line({c.name, status, c.value, c.witness}));
    log << status << "  " << c.name << "  " << c.value << (c.witness.empty() ? "" : "  witness: " + c.witness) << '\n';
  }
  report.write(config.out / "verify.csv");
  log << (all ? "all checks passed" : "invariant violation") << '\n';
  return all ? kExitPass : kExitViolation;
}

int cmd_norms(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  const auto ball = make_ball(p, config.radius, config);
  const Bicombing b(ball, effective_kind(config, p));
  const auto k = kernel_from_bicombing(b, config.radius);
  const NormReport norms = properness_report(k);
  CsvReport report("word,d,norm_f,norm_l1,norm_E,lower_bound");
  describe(report, config, p);
  report.meta("bicombing", std::string(to_string(b.kind())));
  for (const auto& row : norms.rows) {
    report.row(csv_line({display_word(row.word), std::to_string(row.distance), format_double(row.norm_f),
                         format_double(row.norm_l1), format_double(row.norm_e), format_double(row.lower_bound)}));
  }
  report.write(config.out / "norms.csv");
  log << norms.rows.size() << " rows, " << norms.failures.size() << " properness failures\n";
  return norms.pass() ? kExitPass : kExitViolation;
}

int cmd_opnorm(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  const auto ball = make_ball(p, config.radius, config);
  const Bicombing b(ball, effective_kind(config, p));
  const auto k = kernel_from_bicombing(b, config.radius);
  const int half = config.radius / 2;
  OptimizerConfig opt;
  opt.seed = config.seed;
  CsvReport report("word,lower_bound_found,theoretical_upper,iters,seed");
  describe(report, config, p);
  report.meta("bicombing", std::string(to_string(b.kind())));
  report.meta("displacement_constant", format_double(k.displacement_constant()));
  report.meta("subspace_radius", std::to_string(half));
  report.meta("optimizer", "restarts=" + std::to_string(opt.restarts) + " iterations=" + std::to_string(opt.iterations) +
                               " decay_every=" + std::to_string(opt.decay_every));
  int status = kExitPass;
  const auto n = static_cast<ElementIndex>(ball.count_within(half));
  for (ElementIndex s = 0; s < n; ++s) {
    const OpNormEstimate est = op_norm_lower_bound(k, s, half, opt);
    if (est.lower_bound > est.theoretical_upper + 1e-6) status = kExitViolation;
    report.row(csv_line({word_of(ball, s), format_double(est.lower_bound), format_double(est.theoretical_upper),
                         std::to_string(est.evaluations), std::to_string(est.seed)}));
  }
  report.write(config.out / "opnorm.csv");
  log << n << " operator-norm probes, bound sqrt(M/2)+1 = " << uniform_bound(k.displacement_constant()) << '\n';
  return status;
}

int cmd_action(const RunConfig& config, std::ostream& log) {
  const auto p = load_presentation(config.presentation);
  if (config.action.empty()) throw InputError("--action is required");
  const TreeActionSpec action = load_action(config.action, p);
  const auto ball = make_ball(p, config.radius, config);
  const auto k = orbit_kernel(action, ball, config.radius);
  std::vector<ElementIndex> subset;
  if (!config.restrict_letters.empty()) {
    for (ElementIndex i = 0; i < ball.size(); ++i) {
      const auto& w = ball.word(i);
      bool inside = true;
      for (char c : w) {
        if (config.restrict_letters.find(static_cast<char>(std::tolower(static_cast<unsigned char>(c)))) == std::string::npos) inside = false;
      }
      if (inside) subset.push_back(i);
    }
  }
  const GrowthReport growth = orbit_growth_report(k, subset);
  const int half = config.radius / 2;
  const DisplacementScan disp = displacement_constant_scan(k, half, half);

  CsvReport report("word,d,norm_f,norm_l1,norm_E,lower_bound");
  describe(report, config, p);
  report.meta("action", config.action.string());
  if (!config.restrict_letters.empty()) report.meta("restricted_to", config.restrict_letters);
  report.meta("displacement_constant", format_double(disp.constant));
  std::string spheres;
  for (std::size_t n = 0; n < growth.sphere_max.size(); ++n) spheres += (n ? " " : "") + format_double(growth.sphere_max[n]);
  report.meta("sphere_max_norm_E", spheres);
  report.meta("fitted_c", format_double(growth.fitted_c));
  const std::string verdict = growth.unbounded ? "unbounded on scanned range" : "bounded on scanned range";
  report.meta("verdict", verdict);
  for (const auto& row : growth.norms.rows) {
    report.row(csv_line({display_word(row.word), std::to_string(row.distance), format_double(row.norm_f),
                         format_double(row.norm_l1), format_double(row.norm_e), format_double(row.lower_bound)}));
  }
  report.write(config.out / "action.csv");
  log << "verdict: " << verdict << " (fitted c = " << growth.fitted_c << ", displacement " << disp.constant << ")\n";
  return disp.constant == 0.0 ? kExitPass : kExitViolation;
}

int cmd_quasitree(const RunConfig& config, std::ostream& log) {
  if (config.quasitree.empty()) throw InputError("--quasitree is required");
  std::ifstream in(config.quasitree);
  if (!in) throw InputError("cannot open '" + config.quasitree.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const QuasiTreeVerdict v = validate_quasitree_kernel(parse_quasitree_kernel(text));
  if (v.pass) {
    log << "pass (delta " << v.delta << ", min centered eigenvalue " << v.min_eigenvalue << ")\n";
    return kExitPass;
  }
  log << "fail: " << v.reason;
  if (v.witness) log << " at (" << v.witness->first << "," << v.witness->second << ")";
  log << '\n';
  return kExitViolation;
}

int run_command(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    if (config.radius < 0) throw InputError("--radius must be nonnegative");
    const std::string& c = config.command;
    if (c == "ball") return cmd_ball(config, log);
    if (c == "bicombing-stats") return cmd_bicombing_stats(config, log);
    if (c == "verify") return cmd_verify(config, log);
    if (c == "opnorm") return cmd_opnorm(config, log);
    if (c == "norms") return cmd_norms(config, log);
    if (c == "action") return cmd_action(config, log);
    if (c == "kernel") return cmd_kernel(config, log);
    if (c == "quasitree") return cmd_quasitree(config, log);
    throw InputError("unknown command '" + c + "'");
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const OutOfBallError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitViolation;
  }
}

}  // namespace affl1
