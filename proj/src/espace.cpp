#include "affl1/espace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "affl1/errors.hpp"

namespace affl1 {

EVector::EVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  double sum = 0.0;
  for (const auto& [x, c] : entries) {
    if (!entries_.empty() && entries_.back().first == x) {
      entries_.back().second += c;
    } else {
      entries_.emplace_back(x, c);
    }
    sum += c;
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
  if (std::abs(sum) > kMeanZeroTolerance) throw InputError("vector is not mean zero (sum " + std::to_string(sum) + ")");
}

double EVector::coefficient(ElementIndex x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x, [](const Entry& e, ElementIndex k) { return e.first < k; });
  return (it != entries_.end() && it->first == x) ? it->second : 0.0;
}

std::vector<ElementIndex> EVector::support() const {
  std::vector<ElementIndex> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

EVector EVector::scaled(double factor) const {
  EVector out;
  if (factor == 0.0) return out;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.second *= factor;
  return out;
}

double norm_l1(const EVector& v) {
  double total = 0.0;
  for (const auto& e : v.entries()) total += std::abs(e.second);
  return total;
}

namespace {

// -½ Σ v(x)v(y)K(x,y), unclamped.
double quadratic_form(const EVector& v, const DisplacementKernel& k) {
  for (const auto& [x, c] : v.entries()) {
    if (!k.contains(x)) throw OutOfBallError("vector support '" + k.ball().word(x) + "' escapes the kernel");
  }
  double total = 0.0;
  const auto& e = v.entries();
  for (std::size_t a = 0; a < e.size(); ++a) {
    for (std::size_t b = a + 1; b < e.size(); ++b) total += e[a].second * e[b].second * k(e[a].first, e[b].first);
  }
  // Off-diagonal pairs counted once, so -½·2 = -1; diagonal terms included
  // for kernels that are not yet verified to vanish there.
  double diagonal = 0.0;
  for (const auto& [x, c] : e) diagonal += c * c * k(x, x);
  return -total - 0.5 * diagonal;
}

double clamped_sqrt(double form) {
  if (form < kCndHardLimit) {
    throw InvariantError("quadratic form " + std::to_string(form) + " is negative: kernel is not conditionally negative definite");
  }
  return std::sqrt(std::max(form, 0.0));
}

}  // namespace

double norm_f(const EVector& v, const DisplacementKernel& k) { return clamped_sqrt(quadratic_form(v, k)); }

double norm_e(const EVector& v, const DisplacementKernel& k) { return norm_f(v, k) + norm_l1(v); }

EVector rep_apply(const CayleyBall& ball, ElementIndex s, const EVector& v) {
  std::vector<EVector::Entry> moved;
  moved.reserve(v.entries().size());
  for (const auto& [x, c] : v.entries()) {
    const auto sx = ball.multiply(s, x);
    if (!sx) throw OutOfBallError("translate of '" + ball.word(x) + "' by '" + ball.word(s) + "' leaves the ball");
    moved.emplace_back(*sx, c);
  }
  return EVector(std::move(moved));
}

EVector cocycle(ElementIndex s) {
  if (s == 0) return {};
  return EVector({{s, 1.0}, {0, -1.0}});
}

double check_cocycle_identity(const CayleyBall& ball, ElementIndex s, ElementIndex t) {
  const auto st = ball.multiply(s, t);
  if (!st) throw OutOfBallError("product '" + ball.word(s) + "'·'" + ball.word(t) + "' leaves the ball");
  const EVector b_st = cocycle(*st);
  const EVector moved = rep_apply(ball, s, cocycle(t));
  const EVector b_s = cocycle(s);
  std::map<ElementIndex, double> residual;
  for (const auto& [x, c] : b_st.entries()) residual[x] += c;
  for (const auto& [x, c] : moved.entries()) residual[x] -= c;
  for (const auto& [x, c] : b_s.entries()) residual[x] -= c;
  double worst = 0.0;
  for (const auto& [x, c] : residual) worst = std::max(worst, std::abs(c));
  return worst;
}

BoundCheck per_vector_bound_check(const DisplacementKernel& k, ElementIndex s, const EVector& v, double tol) {
  BoundCheck check;
  if (v.empty()) return check;
  const EVector moved = rep_apply(k.ball(), s, v);
  const auto support = v.support();
  std::vector<ElementIndex> image;
  image.reserve(support.size());
  for (ElementIndex x : support) image.push_back(*k.ball().multiply(s, x));
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (!k.contains(image[a])) throw OutOfBallError("translated support escapes the kernel");
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      check.delta = std::max(check.delta, std::abs(k(image[a], image[b]) - k(support[a], support[b])));
    }
  }
  check.lhs = quadratic_form(moved, k) - quadratic_form(v, k);
  const double l1 = norm_l1(v);
  check.rhs = 0.5 * check.delta * l1 * l1;
  check.pass = check.lhs <= check.rhs + tol;
  return check;
}

double uniform_bound(double m) {
  if (m < 0.0) throw InputError("displacement constant must be nonnegative");
  return std::sqrt(m / 2.0) + 1.0;
}

OpNormEstimate op_norm_lower_bound(const DisplacementKernel& k, ElementIndex s, int radius, const OptimizerConfig& config) {
  const CayleyBall& ball = k.ball();
  const std::size_t m = ball.count_within(radius);
  OpNormEstimate est;
  est.seed = config.seed;
  est.theoretical_upper = uniform_bound(k.displacement_constant());
  if (m < 2) {
    est.lower_bound = 1.0;
    return est;
  }
  std::vector<ElementIndex> image(m);
  for (ElementIndex i = 0; i < m; ++i) {
    const auto si = ball.multiply(s, i);
    if (!si || !k.contains(*si)) throw OutOfBallError("translates of ball(" + std::to_string(radius) + ") leave the kernel");
    image[i] = *si;
  }
  auto kv = [&](ElementIndex a, ElementIndex b) { return k(a, b); };
  auto km = [&](ElementIndex a, ElementIndex b) { return k(image[a], image[b]); };

  // Quadratic forms q(v) = -1/2 v^T K v are tracked with the products Kv, so
  // a two-coordinate move is scored in O(1) and applied in O(m).
  struct Form {
    std::vector<double> product;
    double value = 0.0;
  };
  auto full_form = [&](const std::vector<double>& v, auto&& kernel) {
    Form f;
    f.product.assign(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < m; ++b) acc += kernel(static_cast<ElementIndex>(a), static_cast<ElementIndex>(b)) * v[b];
      f.product[a] = acc;
      f.value -= 0.5 * v[a] * acc;
    }
    return f;
  };
  auto moved_value = [&](const Form& f, std::size_t i, std::size_t j, double delta, auto&& kernel) {
    const auto ii = static_cast<ElementIndex>(i);
    const auto jj = static_cast<ElementIndex>(j);
    const double quad = kernel(ii, ii) + kernel(jj, jj) - kernel(ii, jj) - kernel(jj, ii);
    return f.value - delta * (f.product[i] - f.product[j]) - 0.5 * delta * delta * quad;
  };
  auto apply_move = [&](Form& f, std::size_t i, std::size_t j, double delta, double value, auto&& kernel) {
    for (std::size_t a = 0; a < m; ++a) {
      const auto aa = static_cast<ElementIndex>(a);
      f.product[a] += delta * (kernel(aa, static_cast<ElementIndex>(i)) - kernel(aa, static_cast<ElementIndex>(j)));
    }
    f.value = value;
  };
  auto ratio = [](double form_v, double form_moved, double l1) {
    return (clamped_sqrt(form_moved) + l1) / (clamped_sqrt(form_v) + l1);
  };

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  double best = 0.0;
  std::vector<double> v(m);
  for (int restart = 0; restart < config.restarts; ++restart) {
    double mean = 0.0;
    for (auto& x : v) {
      x = unit(rng);
      mean += x;
    }
    mean /= static_cast<double>(m);
    double l1 = 0.0;
    for (auto& x : v) {
      x -= mean;
      l1 += std::abs(x);
    }
    Form fv = full_form(v, kv);
    Form fm = full_form(v, km);
    double current = ratio(fv.value, fm.value, l1);
    ++est.evaluations;
    double step = config.initial_step;
    for (int it = 1; it <= config.iterations; ++it) {
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (j == i) j = (j + 1) % m;
      const double delta = step * unit(rng);
      // Moving mass between two coordinates keeps the mean at zero.
      const double l1_new = l1 - std::abs(v[i]) - std::abs(v[j]) + std::abs(v[i] + delta) + std::abs(v[j] - delta);
      const double new_v = moved_value(fv, i, j, delta, kv);
      const double new_m = moved_value(fm, i, j, delta, km);
      const double candidate = ratio(new_v, new_m, l1_new);
      ++est.evaluations;
      if (candidate > current) {
        current = candidate;
        v[i] += delta;
        v[j] -= delta;
        l1 = l1_new;
        apply_move(fv, i, j, delta, new_v, kv);
        apply_move(fm, i, j, delta, new_m, km);
      }
      if (config.decay_every > 0 && it % config.decay_every == 0) step *= 0.5;
    }
    best = std::max(best, current);
  }
  est.lower_bound = best;
  return est;
}

NormReport properness_report(const DisplacementKernel& k, const std::vector<ElementIndex>& subset) {
  NormReport report;
  report.lower_bounds_checked = k.provenance() == KernelProvenance::bicombing;
  std::vector<ElementIndex> elements = subset;
  if (elements.empty()) {
    for (ElementIndex i = 0; i < k.size(); ++i) elements.push_back(i);
  }
  for (ElementIndex s : elements) {
    if (s == 0) continue;
    const EVector b = cocycle(s);
    NormRow row;
    row.element = s;
    row.word = k.ball().word(s);
    row.distance = k.ball().length(s);
    row.norm_f = norm_f(b, k);
    row.norm_l1 = norm_l1(b);
    row.norm_e = row.norm_f + row.norm_l1;
    row.lower_bound = std::sqrt(static_cast<double>(row.distance)) + 2.0;
    if (report.lower_bounds_checked && row.norm_e < row.lower_bound - 1e-9) report.failures.push_back(s);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace affl1
