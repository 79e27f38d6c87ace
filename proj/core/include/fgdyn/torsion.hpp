#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fgdyn/evaluate.hpp"
#include "fgdyn/formal_group.hpp"

namespace fgdyn {

struct TorsionRoot {
  PointTuple point;
  Valuation valuation;
  /// f'(root) has a certified valuation.
  bool simple = false;
  /// f(root) vanishes modulo this valuation.
  Rational certified{0};
};

/// A disc that held roots which could not be isolated or lifted.
struct CandidateFailure {
  ExtScalar center;
  /// Disc radius as a valuation: v(x - center) >= radius.
  Rational radius{0};
  int roots = 0;
  std::string reason;
};

struct RootSearch {
  std::vector<TorsionRoot> roots;
  std::vector<CandidateFailure> failures;
  /// Roots of the truncated polynomial over the algebraic closure with
  /// valuation at least 1/e, e the ramification index of the extension.
  int disc_count = 0;
};

/// Roots of positive valuation in ext of the one-variable series f, read as
/// its truncated polynomial. Discs are refined one uniformizer digit at a
/// time, counting roots through Taylor shifts; a disc holding a single root
/// is finished by Newton iteration, started at c once v(f(c)) > 2 v(f'(c))
/// or at the residue the Taylor shift of the disc predicts.
RootSearch positive_valuation_roots(const MultiSeries& f, const ExtensionPtr& ext);

struct TorsionLevelSet {
  std::shared_ptr<const FormalGroupLaw> group;
  int level = 1;
  ExtensionPtr extension;
  std::vector<TorsionRoot> roots;
  bool multiplicity_free = false;
  /// p^{hn}; absent for infinite height.
  std::optional<mpz_class> expected;
  bool complete = false;
  std::vector<CandidateFailure> failures;
  std::string verdict;
};

/// Roots of [p^n]_F in ext for a one-dimensional law.
TorsionLevelSet torsion_probe_dim1(const FormalGroupLaw& group, int level, const ExtensionPtr& ext);

struct IntersectionReport {
  TorsionLevelSet first;
  TorsionLevelSet second;
  /// Indices into first.roots that also occur among second.roots.
  std::vector<std::size_t> shared;
  bool identical_laws = false;
  bool consistent = false;
  std::string verdict;
};

IntersectionReport intersection_probe(const FormalGroupLaw& f, const FormalGroupLaw& g, int level,
                                      const ExtensionPtr& ext);

/// perm[i] = j when u(root_i) = root_j at certified precision; nullopt when
/// some image is not among the roots.
std::optional<std::vector<std::size_t>> root_permutation(const TupleSeries& u, const std::vector<TorsionRoot>& roots);

}  // namespace fgdyn
