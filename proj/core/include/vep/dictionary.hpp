#pragma once

#include <vector>

#include "vep/analytic.hpp"
#include "vep/functionals.hpp"

namespace vep {

/// Finite dictionary of admissible test pairs: boundary-compatible bump,
/// rotational, plateau and trigonometric velocity profiles, constant and
/// modulated tensor profiles, and mixed pairs, each at a ladder of scales
/// lambda = 1, 1/2, ... so the admissibility gate tau Ktilde <= 1 can always
/// be met.  The zero pair is always entry 0.
class TestDictionary {
 public:
  TestDictionary(const Mesh& mesh, const MaterialParams& params, int size = 24,
                 int levels = 4);

  int spatial_entries() const { return spatial_entries_; }
  int levels() const { return levels_; }

  const std::vector<TestPair>& entries() const { return entries_; }

  /// Pairs usable at time-step tau: finite P(dev Psi) and tau Ktilde <= 1.
  std::vector<const TestPair*> admissible(const FunctionalEvaluator& eval,
                                          double tau) const;

  /// Pairs excluded for infeasible Psi (diagnostic).
  int infeasible_count() const;

 private:
  int spatial_entries_ = 0;
  int levels_ = 0;
  std::vector<TestPair> entries_;
};

}  // namespace vep
