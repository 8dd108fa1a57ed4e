#include "affl1/actions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "affl1/errors.hpp"

namespace affl1 {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string TreeActionSpec::image(std::string_view source_word) const {
  std::string out;
  for (char c : source_word) {
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = images.find(lower);
    if (it == images.end()) throw InputError("no image for letter '" + std::string(1, c) + "'");
    out += (c == lower) ? it->second : inverse_word(it->second);
  }
  return free_reduce(out);
}

TreeActionSpec parse_action(std::string_view text, const GroupPresentation& source) {
  TreeActionSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_rank = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("target_rank:", 0) == 0) {
      const std::string value = trim(std::string_view(t).substr(12));
      try {
        spec.target_rank = std::stoi(value);
      } catch (const std::exception&) {
        throw InputError("invalid target_rank '" + value + "'");
      }
      if (spec.target_rank < 1 || spec.target_rank > 26) throw InputError("target_rank must be between 1 and 26");
      have_rank = true;
      continue;
    }
    const auto arrow = t.find("->");
    if (arrow == std::string::npos) throw InputError("expected 'g -> word', got '" + t + "'");
    if (!have_rank) throw InputError("target_rank must precede generator images");
    const std::string gen = trim(std::string_view(t).substr(0, arrow));
    std::string word = trim(std::string_view(t).substr(arrow + 2));
    if (word == "1") word.clear();
    if (gen.size() != 1 || source.letter_rank(gen[0]) != 2 * source.generator_index(gen[0])) {
      throw InputError("'" + gen + "' is not a generator of the source presentation");
    }
    for (char c : word) {
      const int idx = std::tolower(static_cast<unsigned char>(c)) - 'a';
      if (!std::isalpha(static_cast<unsigned char>(c)) || idx < 0 || idx >= spec.target_rank) {
        throw InputError("letter '" + std::string(1, c) + "' is outside the target free group of rank " +
                         std::to_string(spec.target_rank));
      }
    }
    if (!spec.images.emplace(gen[0], free_reduce(word)).second) throw InputError("duplicate image for '" + gen + "'");
  }
  if (!have_rank) throw InputError("missing target_rank");
  for (char g : source.generators) {
    if (!spec.images.count(g)) throw InputError("missing image for generator '" + std::string(1, g) + "'");
  }
  for (const auto& r : source.relators) {
    const std::string img = spec.image(r);
    if (!img.empty()) throw InputError("not a homomorphism: relator '" + r + "' maps to '" + img + "'");
  }
  // Rewriting rules are relations as well.
  for (const auto& rule : source.rules) {
    if (spec.image(rule.lhs) != spec.image(rule.rhs)) {
      throw InputError("not a homomorphism: rule '" + rule.lhs + " -> " + rule.rhs + "' is not preserved");
    }
  }
  return spec;
}

TreeActionSpec load_action(const std::filesystem::path& path, const GroupPresentation& source) {
  return parse_action(read_file(path), source);
}

DisplacementKernel orbit_kernel(const TreeActionSpec& action, const CayleyBall& ball, int radius) {
  const std::size_t n = ball.count_within(radius);
  std::vector<std::string> images(n);
  for (ElementIndex i = 0; i < n; ++i) images[i] = action.image(ball.word(i));
  DisplacementKernel k(ball, n, KernelProvenance::tree_action, 1);
  for (ElementIndex i = 0; i < n; ++i) {
    const std::string inv = inverse_word(images[i]);
    for (ElementIndex j = i + 1; j < n; ++j) {
      k.set_exact(i, j, Rational(static_cast<std::int64_t>(free_reduce(inv + images[j]).size())));
    }
  }
  k.set_displacement_constant(0.0);
  return k;
}

QuasiTreeKernelInput parse_quasitree_kernel(std::string_view text) {
  QuasiTreeKernelInput input;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_delta = false;
  bool have_header = false;
  struct Row {
    std::string x, y;
    double d, k;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("delta:", 0) == 0) {
      try {
        input.delta = std::stod(trim(std::string_view(t).substr(6)));
      } catch (const std::exception&) {
        throw InputError("invalid delta on line " + std::to_string(line_no));
      }
      if (input.delta < 0) throw InputError("delta must be nonnegative");
      have_delta = true;
      continue;
    }
    if (t == "x,y,d,K") {
      have_header = true;
      continue;
    }
    if (!have_header) throw InputError("quasi-tree kernel CSV needs header 'x,y,d,K'");
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (fields.size() != 4) throw InputError("line " + std::to_string(line_no) + ": expected 4 fields");
    try {
      rows.push_back({fields[0], fields[1], std::stod(fields[2]), std::stod(fields[3])});
    } catch (const std::exception&) {
      throw InputError("line " + std::to_string(line_no) + ": non-numeric value");
    }
  }
  if (!have_delta) throw InputError("missing 'delta: value' line");
  for (const auto& r : rows) {
    for (const auto& label : {r.x, r.y}) {
      if (std::find(input.labels.begin(), input.labels.end(), label) == input.labels.end()) input.labels.push_back(label);
    }
  }
  const std::size_t n = input.labels.size();
  const double unset = std::numeric_limits<double>::quiet_NaN();
  input.distance.assign(n * n, unset);
  input.kernel.assign(n * n, unset);
  for (std::size_t i = 0; i < n; ++i) {
    input.distance[i * n + i] = 0.0;
    input.kernel[i * n + i] = 0.0;
  }
  auto index = [&](const std::string& l) {
    return static_cast<std::size_t>(std::find(input.labels.begin(), input.labels.end(), l) - input.labels.begin());
  };
  for (const auto& r : rows) {
    const std::size_t i = index(r.x);
    const std::size_t j = index(r.y);
    if (i == j) {
      if (r.d != 0.0 || r.k != 0.0) throw InputError("nonzero diagonal entry for '" + r.x + "'");
      continue;
    }
    if (!std::isnan(input.distance[i * n + j])) throw InputError("duplicate pair (" + r.x + "," + r.y + ")");
    input.distance[i * n + j] = input.distance[j * n + i] = r.d;
    input.kernel[i * n + j] = input.kernel[j * n + i] = r.k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::isnan(input.distance[i * n + j])) {
        throw InputError("missing pair (" + input.labels[i] + "," + input.labels[j] + ")");
      }
    }
  }
  return input;
}

QuasiTreeVerdict validate_quasitree_kernel(const QuasiTreeKernelInput& input, double tol) {
  QuasiTreeVerdict verdict;
  verdict.delta = input.delta;
  const std::size_t n = input.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = input.distance[i * n + j];
      const double k = input.kernel[i * n + j];
      const bool below = k < d - input.delta - tol;
      const bool above = k > d + tol;
      if (below || above) {
        verdict.pass = false;
        verdict.reason = above ? "upper bound K <= d violated" : "lower bound K >= d - delta violated";
        verdict.witness = std::make_pair(input.labels[i], input.labels[j]);
        return verdict;
      }
    }
  }
  if (n >= 2) {
    verdict.min_eigenvalue = cnd_min_eigenvalue(input.kernel, n);
    if (verdict.min_eigenvalue < -kCndTolerance) {
      verdict.pass = false;
      verdict.reason = "kernel is not conditionally negative definite";
    }
  }
  return verdict;
}

GrowthReport orbit_growth_report(const DisplacementKernel& k, const std::vector<ElementIndex>& subset) {
  GrowthReport report;
  report.norms = properness_report(k, subset);
  int max_n = 0;
  for (const auto& row : report.norms.rows) max_n = std::max(max_n, row.distance);
  report.sphere_max.assign(static_cast<std::size_t>(max_n) + 1, 0.0);
  std::vector<bool> seen(report.sphere_max.size(), false);
  for (const auto& row : report.norms.rows) {
    const auto n = static_cast<std::size_t>(row.distance);
    report.sphere_max[n] = std::max(report.sphere_max[n], row.norm_e);
    seen[n] = true;
  }
  double c = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= max_n; ++n) {
    if (!seen[static_cast<std::size_t>(n)]) continue;
    const double excess = std::max(report.sphere_max[static_cast<std::size_t>(n)] - 2.0, 0.0);
    c = std::min(c, excess * excess / n);
  }
  report.fitted_c = std::isinf(c) ? 0.0 : c;
  report.unbounded = report.fitted_c > 1e-9;
  return report;
}

}  // namespace affl1
