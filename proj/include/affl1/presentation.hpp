#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace affl1 {

enum class ReductionMode { free, dehn, rewriting };

std::string_view to_string(ReductionMode mode);

struct RewriteRule {
  std::string lhs;
  std::string rhs;
};

/// A finite presentation over single-letter generators. A lowercase letter
/// is a generator and the matching uppercase letter is its inverse.
///
/// Letters are totally ordered as g1 < G1 < g2 < G2 < ... following the
/// order in which generators are declared; this order drives shortlex
/// comparisons, ball indexing and bicombing tie-breaks.
struct GroupPresentation {
  std::vector<char> generators;
  std::vector<std::string> relators;
  ReductionMode mode = ReductionMode::free;
  std::vector<RewriteRule> rules;

  std::size_t rank() const { return generators.size(); }
  std::size_t alphabet_size() const { return 2 * generators.size(); }

  /// Position of `letter` in the letter order, or -1 if it is not a letter
  /// of this presentation.
  int letter_rank(char letter) const;
  char letter_at(int rank) const;
  bool has_letter(char letter) const { return letter_rank(letter) >= 0; }

  /// Index of the generator a letter belongs to (either orientation).
  int generator_index(char letter) const;

  /// Shortlex order: shorter first, then lexicographic in the letter order.
  bool shortlex_less(std::string_view a, std::string_view b) const;

  /// "a,b,c,d"; recorded in every report header.
  std::string generating_set() const;
};

/// Parses the line-oriented presentation format:
///
///   # comment
///   generators: a b c d
///   relators: abABcdCD
///   mode: dehn
///   rules:
///     ba -> ab
///
/// Section values may follow the colon or occupy subsequent lines.
/// "(none)" is accepted as an empty relator list. The identity word on the
/// right of a rule may be written "1" or left empty. Mode-specific
/// conditions (C'(1/6) for dehn, confluence for rewriting) are verified;
/// every failure raises InputError naming the offending token.
GroupPresentation parse_presentation(std::string_view text);
GroupPresentation load_presentation(const std::filesystem::path& path);

/// Free inverse of a word: reverse and swap case.
std::string inverse_word(std::string_view word);

/// Free reduction (cancels adjacent xX / Xx pairs).
std::string free_reduce(std::string_view word);

/// Longest piece of the symmetrized relator set together with the relator
/// it occurs in; used for the C'(1/6) check.
struct PieceReport {
  std::size_t longest_piece = 0;
  std::string piece;
  std::string relator;
  bool satisfies_c16 = true;
};
PieceReport small_cancellation_pieces(const std::vector<std::string>& relators);

}  // namespace affl1
