#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affl1/espace.hpp"

namespace affl1 {

/// Isometric action on the Cayley tree of a free group F_k, given by a
/// homomorphism φ from the source group to F_k. The target alphabet is the
/// first k lowercase letters; the basepoint is the identity of F_k.
struct TreeActionSpec {
  int target_rank = 0;
  std::map<char, std::string> images;  ///< source generator -> freely reduced target word

  /// φ(word), freely reduced in the target.
  std::string image(std::string_view source_word) const;
};

/// Format:
///   target_rank: 2
///   a -> a
///   c -> 1        # "1" or nothing for the identity
/// Every source generator needs an image, and every relator must map to a
/// word that freely reduces to the identity; failures raise InputError
/// ("not a homomorphism: relator ...").
TreeActionSpec parse_action(std::string_view text, const GroupPresentation& source);
TreeActionSpec load_action(const std::filesystem::path& path, const GroupPresentation& source);

/// K(s,t) = |φ(s)^{-1} φ(t)| over ball(radius); provenance tree_action,
/// displacement constant 0.
DisplacementKernel orbit_kernel(const TreeActionSpec& action, const CayleyBall& ball, int radius);

struct QuasiTreeKernelInput {
  std::vector<std::string> labels;
  std::vector<double> distance;  ///< row-major n x n
  std::vector<double> kernel;    ///< row-major n x n
  double delta = 0.0;
  std::size_t size() const { return labels.size(); }
};

/// CSV "x,y,d,K" with a "delta: value" line; every unordered pair of
/// distinct labels must appear once. Diagonal entries are implied to be 0.
QuasiTreeKernelInput parse_quasitree_kernel(std::string_view text);

struct QuasiTreeVerdict {
  bool pass = true;
  std::string reason;
  std::optional<std::pair<std::string, std::string>> witness;
  double min_eigenvalue = 0.0;
  double delta = 0.0;  ///< declared constant, used as the displacement bound
};

/// Sandwich d - Δ <= K <= d on every pair, then conditional negative
/// definiteness of K.
QuasiTreeVerdict validate_quasitree_kernel(const QuasiTreeKernelInput& input, double tol = 1e-12);

struct GrowthReport {
  NormReport norms;
  std::vector<double> sphere_max;  ///< max ‖b(s)‖_E on each scanned sphere (index = radius)
  double fitted_c = 0.0;           ///< largest c with sphere_max[n] >= √(c·n) + 2 for all scanned n >= 1
  bool unbounded = false;
};

/// Growth of ‖b(s)‖_E = √K(s,e) + 2 over spheres of the scanned set; the
/// verdict is "unbounded on the scanned range" iff fitted_c > 1e-9.
GrowthReport orbit_growth_report(const DisplacementKernel& k, const std::vector<ElementIndex>& subset = {});

}  // namespace affl1
