#include "affl1/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "affl1/errors.hpp"
#include "affl1/group.hpp"

namespace affl1 {

std::string_view to_string(ReductionMode mode) {
  switch (mode) {
    case ReductionMode::free: return "free";
    case ReductionMode::dehn: return "dehn";
    case ReductionMode::rewriting: return "rewriting";
  }
  return "?";
}

int GroupPresentation::letter_rank(char letter) const {
  const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(letter)));
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i] == lower) return static_cast<int>(2 * i) + (letter == lower ? 0 : 1);
  }
  return -1;
}

char GroupPresentation::letter_at(int rank) const {
  const char g = generators.at(static_cast<std::size_t>(rank / 2));
  return rank % 2 == 0 ? g : static_cast<char>(std::toupper(static_cast<unsigned char>(g)));
}

int GroupPresentation::generator_index(char letter) const {
  const int r = letter_rank(letter);
  return r < 0 ? -1 : r / 2;
}

bool GroupPresentation::shortlex_less(std::string_view a, std::string_view b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  }
  return false;
}

std::string GroupPresentation::generating_set() const {
  std::string out;
  for (char g : generators) {
    if (!out.empty()) out += ',';
    out += g;
  }
  return out;
}

std::string inverse_word(std::string_view word) {
  std::string out(word.rbegin(), word.rend());
  for (char& c : out) {
    c = std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                                    : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

bool cancels(char a, char b) {
  return a != b && std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool cyclically_reduced(std::string_view w) {
  if (free_reduce(w) != w) return false;
  return w.size() < 2 || !cancels(w.front(), w.back());
}

void check_word(const GroupPresentation& p, std::string_view word, std::string_view context) {
  for (char c : word) {
    if (!p.has_letter(c)) {
      throw InputError("unknown letter '" + std::string(1, c) + "' in " + std::string(context) + " '" +
                       std::string(word) + "'");
    }
  }
}

std::string parse_identity_word(const std::string& raw) {
  const std::string t = trim(raw);
  return t == "1" ? std::string() : t;
}

}  // namespace

std::string free_reduce(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    if (!out.empty() && cancels(out.back(), c)) {
      out.pop_back();
    } else {
      out += c;
    }
  }
  return out;
}

PieceReport small_cancellation_pieces(const std::vector<std::string>& relators) {
  // Symmetrized set: all cyclic conjugates of relators and their inverses.
  std::set<std::string> symmetrized;
  for (const auto& r : relators) {
    for (const std::string& w : {r, inverse_word(r)}) {
      for (std::size_t k = 0; k < w.size(); ++k) symmetrized.insert(w.substr(k) + w.substr(0, k));
    }
  }
  const std::vector<std::string> words(symmetrized.begin(), symmetrized.end());
  PieceReport report;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      const auto& a = words[i];
      const auto& b = words[j];
      std::size_t k = 0;
      while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
      if (k == 0) continue;
      const bool violates = 6 * k >= a.size();
      if (violates && report.satisfies_c16) {
        report.satisfies_c16 = false;
        report.piece = a.substr(0, k);
        report.relator = a;
      }
      if (k > report.longest_piece) {
        report.longest_piece = k;
        if (report.satisfies_c16) {
          report.piece = a.substr(0, k);
          report.relator = a;
        }
      }
    }
  }
  return report;
}

GroupPresentation parse_presentation(std::string_view text) {
  std::map<std::string, std::vector<std::string>> sections;  // raw lines per section
  std::string current;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    std::string key;
    std::string rest;
    if (auto colon = t.find(':'); colon != std::string::npos) {
      key = trim(std::string_view(t).substr(0, colon));
      rest = trim(std::string_view(t).substr(colon + 1));
    } else if (t.rfind("mode ", 0) == 0) {
      key = "mode";
      rest = trim(std::string_view(t).substr(5));
    }
    if (!key.empty()) {
      if (key != "generators" && key != "relators" && key != "mode" && key != "rules") {
        throw InputError("unknown section '" + key + "'");
      }
      if (sections.count(key)) throw InputError("duplicate section '" + key + "'");
      current = key;
      sections[current];
      if (!rest.empty()) sections[current].push_back(rest);
      continue;
    }
    if (current.empty()) throw InputError("content outside any section: '" + t + "'");
    sections[current].push_back(t);
  }

  GroupPresentation p;
  if (!sections.count("generators")) throw InputError("missing section 'generators'");
  for (const auto& l : sections["generators"]) {
    for (const auto& tok : split_tokens(l)) {
      if (tok.size() != 1 || !std::islower(static_cast<unsigned char>(tok[0]))) {
        throw InputError("invalid generator '" + tok + "' (generators are single lowercase letters)");
      }
      if (std::find(p.generators.begin(), p.generators.end(), tok[0]) != p.generators.end()) {
        throw InputError("duplicate generator '" + tok + "'");
      }
      p.generators.push_back(tok[0]);
    }
  }
  if (p.generators.empty()) throw InputError("no generators declared");

  for (const auto& l : sections["relators"]) {
    for (const auto& tok : split_tokens(l)) {
      if (tok == "(none)") continue;
      check_word(p, tok, "relator");
      p.relators.push_back(tok);
    }
  }

  if (sections.count("mode")) {
    const auto toks = sections["mode"].empty() ? std::vector<std::string>{} : split_tokens(sections["mode"].front());
    if (toks.size() != 1) throw InputError("mode expects one of: free dehn rewriting");
    if (toks[0] == "free") {
      p.mode = ReductionMode::free;
    } else if (toks[0] == "dehn") {
      p.mode = ReductionMode::dehn;
    } else if (toks[0] == "rewriting") {
      p.mode = ReductionMode::rewriting;
    } else {
      throw InputError("unknown mode '" + toks[0] + "'");
    }
  } else if (!p.relators.empty()) {
    throw InputError("missing section 'mode' for a presentation with relators");
  }

  for (const auto& l : sections["rules"]) {
    const auto arrow = l.find("->");
    if (arrow == std::string::npos) throw InputError("rule without '->': '" + l + "'");
    RewriteRule rule{parse_identity_word(l.substr(0, arrow)), parse_identity_word(l.substr(arrow + 2))};
    check_word(p, rule.lhs, "rule");
    check_word(p, rule.rhs, "rule");
    if (rule.lhs.empty()) throw InputError("rule with empty left side: '" + l + "'");
    p.rules.push_back(std::move(rule));
  }

  switch (p.mode) {
    case ReductionMode::free:
      if (!p.relators.empty()) throw InputError("free mode does not accept relators ('" + p.relators.front() + "')");
      if (!p.rules.empty()) throw InputError("free mode does not accept rules");
      break;
    case ReductionMode::dehn: {
      if (!p.rules.empty()) throw InputError("dehn mode does not accept rules");
      for (const auto& r : p.relators) {
        if (r.empty() || !cyclically_reduced(r)) throw InputError("relator '" + r + "' is not cyclically reduced");
      }
      const PieceReport pieces = small_cancellation_pieces(p.relators);
      if (!pieces.satisfies_c16) {
        throw InputError("C'(1/6) violated: piece '" + pieces.piece + "' of relator '" + pieces.relator + "'");
      }
      break;
    }
    case ReductionMode::rewriting: {
      if (p.rules.empty()) throw InputError("rewriting mode requires rules");
      for (const auto& rule : p.rules) {
        if (!p.shortlex_less(rule.rhs, rule.lhs)) {
          throw InputError("rule '" + rule.lhs + " -> " + (rule.rhs.empty() ? "1" : rule.rhs) +
                           "' is not shortlex-decreasing");
        }
      }
      if (auto failure = find_nonconfluent_pair(p)) throw InputError("rules not confluent: " + *failure);
      const Group g(p);
      for (const auto& r : p.relators) {
        if (!g.is_identity(r)) throw InputError("relator '" + r + "' does not reduce to the identity under the rules");
      }
      break;
    }
  }
  return p;
}

GroupPresentation load_presentation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_presentation(buf.str());
}

}  // namespace affl1
