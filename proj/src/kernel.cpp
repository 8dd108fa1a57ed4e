#include "affl1/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "affl1/errors.hpp"

namespace affl1 {

std::string_view to_string(KernelProvenance p) {
  switch (p) {
    case KernelProvenance::bicombing: return "bicombing";
    case KernelProvenance::tree_action: return "tree_action";
    case KernelProvenance::user_supplied: return "user_supplied";
  }
  return "?";
}

DisplacementKernel::DisplacementKernel(const CayleyBall& ball, std::size_t size, KernelProvenance provenance,
                                       std::int64_t exact_denominator)
    : ball_(&ball), n_(size), provenance_(provenance), values_(size * size, 0.0), exact_den_(exact_denominator) {
  if (size > ball.size()) throw InputError("kernel larger than its ball");
  if (exact_den_ > 0) exact_num_.assign(size * size, 0);
}

Rational DisplacementKernel::exact(ElementIndex i, ElementIndex j) const {
  if (!has_exact()) throw InvariantError("kernel has no exact values");
  return Rational(exact_num_[static_cast<std::size_t>(i) * n_ + j], exact_den_);
}

void DisplacementKernel::set_exact(ElementIndex i, ElementIndex j, const Rational& value) {
  if (!has_exact()) throw InvariantError("kernel has no exact values");
  const Rational scaled = value * Rational(exact_den_);
  if (!scaled.is_integer() || scaled.num() > std::numeric_limits<std::int32_t>::max()) {
    throw InvariantError("kernel value " + value.to_string() + " not representable");
  }
  const auto num = static_cast<std::int32_t>(scaled.num());
  exact_num_[static_cast<std::size_t>(i) * n_ + j] = num;
  exact_num_[static_cast<std::size_t>(j) * n_ + i] = num;
  values_[static_cast<std::size_t>(i) * n_ + j] = value.to_double();
  values_[static_cast<std::size_t>(j) * n_ + i] = value.to_double();
}

void DisplacementKernel::set_entry(ElementIndex i, ElementIndex j, double value) {
  exact_num_.clear();
  exact_den_ = 0;
  values_[static_cast<std::size_t>(i) * n_ + j] = value;
}

DisplacementKernel kernel_from_bicombing(const Bicombing& b, int radius) {
  const CayleyBall& ball = b.ball();
  const std::size_t n = ball.count_within(radius);
  std::vector<Chain1> chains(n);
  std::int64_t den = 1;
  for (ElementIndex i = 0; i < n; ++i) {
    chains[i] = b.chain(0, i);
    den = std::lcm(den, chains[i].denominator());
  }
  DisplacementKernel k(ball, n, KernelProvenance::bicombing, den);
  for (ElementIndex i = 0; i < n; ++i) {
    for (ElementIndex j = i + 1; j < n; ++j) k.set_exact(i, j, l1_distance(chains[i], chains[j]));
  }
  k.set_source(b);
  const int half = radius / 2;
  k.set_displacement_constant(displacement_constant_scan(k, half, half).constant);
  return k;
}

namespace {

std::vector<ElementIndex> translates(const DisplacementKernel& k, ElementIndex s, const std::vector<ElementIndex>& support) {
  const CayleyBall& ball = k.ball();
  std::vector<ElementIndex> out;
  out.reserve(support.size());
  for (ElementIndex x : support) {
    const auto sx = ball.multiply(s, x);
    if (!sx || !k.contains(*sx)) {
      throw OutOfBallError("translate of '" + ball.word(x) + "' by '" + ball.word(s) + "' leaves the kernel's ball");
    }
    out.push_back(*sx);
  }
  return out;
}

std::vector<ElementIndex> prefix(std::size_t n) {
  std::vector<ElementIndex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<ElementIndex>(i);
  return out;
}

}  // namespace

DisplacementScan displacement_constant_scan(const DisplacementKernel& k, int s_radius, int support_radius) {
  const CayleyBall& ball = k.ball();
  const auto support = prefix(ball.count_within(support_radius));
  const auto ns = static_cast<ElementIndex>(ball.count_within(s_radius));
  DisplacementScan scan;
  for (ElementIndex s = 1; s < ns; ++s) {
    const auto moved = translates(k, s, support);
    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t c = a + 1; c < support.size(); ++c) {
        const double diff = std::abs(k(moved[a], moved[c]) - k(support[a], support[c]));
        if (diff > scan.constant) {
          scan.constant = diff;
          scan.witness = {s, support[a], support[c]};
        }
      }
    }
  }
  return scan;
}

ExcessReport displacement_excess(const DisplacementKernel& k, ElementIndex s, const std::vector<ElementIndex>& support) {
  ExcessReport report;
  const auto moved = translates(k, s, support);
  const Bicombing* b = k.source();
  const bool replay = k.provenance() == KernelProvenance::bicombing && b != nullptr && b->antisymmetric() && k.has_exact();
  report.decomposition_checked = replay;
  if (k.has_exact()) report.exact_excess = Rational(0);
  for (std::size_t a = 0; a < support.size(); ++a) {
    for (std::size_t c = 0; c < support.size(); ++c) {
      ++report.pairs;
      const ElementIndex x = support[a];
      const ElementIndex y = support[c];
      const ElementIndex sx = moved[a];
      const ElementIndex sy = moved[c];
      const double diff = k(sx, sy) - k(x, y);
      if (diff > report.excess) {
        report.excess = diff;
        report.witness = {x, y};
      }
      if (!k.has_exact()) continue;
      const Rational exact_diff = k.exact(sx, sy) - k.exact(x, y);
      if (exact_diff > *report.exact_excess) report.exact_excess = exact_diff;
      if (!replay || a == c) continue;
      const Rational bound = area(*b, 0, sx, sy) + area(*b, sy, sx, s);
      if (bound > report.max_area_sum) report.max_area_sum = bound;
      if (exact_diff > bound && report.decomposition_holds) {
        report.decomposition_holds = false;
        report.decomposition_witness = {x, y};
      }
    }
  }
  return report;
}

double cnd_min_eigenvalue(const std::vector<double>& matrix, std::size_t n) {
  if (n < 2) throw InputError("CND check needs at least two points");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = -0.5 * matrix[i * n + j];
  }
  // Householder reflection H with H·1/√n = e_0; columns 1.. of H span the
  // mean-zero subspace, so (HAH) without row/column 0 is the restriction.
  Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  u(0) -= 1.0;
  u.normalize();
  const Eigen::VectorXd au = a * u;
  const double uau = u.dot(au);
  const Eigen::MatrixXd hah = a - 2.0 * u * au.transpose() - 2.0 * au * u.transpose() + 4.0 * uau * u * u.transpose();
  const auto m = static_cast<Eigen::Index>(n - 1);
  const Eigen::MatrixXd restricted = hah.bottomRightCorner(m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvariantError("eigen-solver did not converge");
  return solver.eigenvalues().minCoeff();
}

double cnd_min_eigenvalue(const DisplacementKernel& k, const std::vector<ElementIndex>& support) {
  const std::size_t n = support.size();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = k(support[i], support[j]);
  }
  return cnd_min_eigenvalue(m, n);
}

FeatureVector feature_embed(const Chain1& c) {
  if (!c.is_integral()) throw InputError("feature embedding needs an integer chain");
  std::vector<FeatureVector::Entry> entries;
  for (const auto& t : c.terms()) {
    if (t.num > 0) {
      for (std::int64_t slot = 1; slot <= t.num; ++slot) entries.push_back({{t.key, slot}, +1});
    } else {
      for (std::int64_t slot = t.num + 1; slot <= 0; ++slot) entries.push_back({{t.key, slot}, -1});
    }
  }
  return FeatureVector(std::move(entries));
}

std::int64_t squared_distance(const FeatureVector& u, const FeatureVector& w) {
  std::int64_t total = 0;
  auto a = u.entries().begin();
  auto b = w.entries().begin();
  while (a != u.entries().end() || b != w.entries().end()) {
    std::int64_t d = 0;
    if (b == w.entries().end() || (a != u.entries().end() && a->coord < b->coord)) {
      d = a->value;
      ++a;
    } else if (a == u.entries().end() || b->coord < a->coord) {
      d = -b->value;
      ++b;
    } else {
      d = a->value - b->value;
      ++a;
      ++b;
    }
    total += d * d;
  }
  return total;
}

Rational kernel_cross_validate(const DisplacementKernel& k, const Bicombing& b) {
  if (!k.has_exact()) throw InputError("cross-validation needs an exact kernel");
  const std::size_t n = k.size();
  std::vector<FeatureVector> features;
  features.reserve(n);
  std::int64_t scale = 1;
  std::vector<Chain1> chains(n);
  for (ElementIndex i = 0; i < n; ++i) {
    chains[i] = b.chain(0, i);
    scale = std::lcm(scale, chains[i].denominator());
  }
  for (const auto& c : chains) features.push_back(feature_embed(c.scaled(Rational(scale))));
  Rational worst(0);
  for (ElementIndex i = 0; i < n; ++i) {
    for (ElementIndex j = i; j < n; ++j) {
      const Rational via_features(squared_distance(features[i], features[j]), scale);
      const Rational gap = abs(k.exact(i, j) - via_features);
      if (gap > worst) worst = gap;
    }
  }
  return worst;
}

Rational kernel_cross_validate(const Bicombing& b, int radius) {
  return kernel_cross_validate(kernel_from_bicombing(b, radius), b);
}

std::vector<KernelDefect> structural_defects(const DisplacementKernel& k, double tol) {
  std::vector<KernelDefect> out;
  const auto n = static_cast<ElementIndex>(k.size());
  for (ElementIndex i = 0; i < n; ++i) {
    if (std::abs(k(i, i)) > tol) out.push_back({"nonzero diagonal", i, i, k(i, i)});
    for (ElementIndex j = i + 1; j < n; ++j) {
      if (std::abs(k(i, j) - k(j, i)) > tol) out.push_back({"asymmetric entry", i, j, k(i, j) - k(j, i)});
      if (k(i, j) < -tol) out.push_back({"negative entry", i, j, k(i, j)});
    }
  }
  return out;
}

void write_kernel_csv(std::ostream& os, const DisplacementKernel& k) {
  os << "i,j,K\n";
  const auto n = static_cast<ElementIndex>(k.size());
  std::ostringstream cell;
  cell << std::setprecision(17);
  for (ElementIndex i = 0; i < n; ++i) {
    for (ElementIndex j = i; j < n; ++j) {
      cell.str("");
      cell << k(i, j);
      os << i << ',' << j << ',' << cell.str() << '\n';
    }
  }
}

DisplacementKernel read_kernel_csv(std::istream& is, const CayleyBall& ball) {
  std::map<std::pair<ElementIndex, ElementIndex>, double> entries;
  std::string line;
  bool header = false;
  ElementIndex max_index = 0;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "i,j,K") throw InputError("kernel CSV must start with header 'i,j,K'");
      header = true;
      continue;
    }
    std::istringstream row(line);
    long long i = 0;
    long long j = 0;
    double v = 0.0;
    char c1 = 0;
    char c2 = 0;
    if (!(row >> i >> c1 >> j >> c2 >> v) || c1 != ',' || c2 != ',' || i < 0 || j < i) {
      throw InputError("malformed kernel CSV line " + std::to_string(line_no) + ": '" + line + "'");
    }
    entries[{static_cast<ElementIndex>(i), static_cast<ElementIndex>(j)}] = v;
    max_index = std::max(max_index, static_cast<ElementIndex>(j));
  }
  if (entries.empty()) throw InputError("kernel CSV has no entries");
  const std::size_t n = static_cast<std::size_t>(max_index) + 1;
  if (n > ball.size()) throw InputError("kernel CSV indexes beyond the ball");
  DisplacementKernel k(ball, n, KernelProvenance::user_supplied);
  for (ElementIndex i = 0; i < n; ++i) {
    for (ElementIndex j = i; j < n; ++j) {
      auto it = entries.find({i, j});
      if (it == entries.end()) {
        throw InputError("kernel CSV misses entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      k.set_entry(i, j, it->second);
      k.set_entry(j, i, it->second);
    }
  }
  return k;
}

}  // namespace affl1
