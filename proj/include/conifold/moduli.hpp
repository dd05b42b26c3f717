#pragma once

#include <string>
#include <vector>

#include "conifold/topology.hpp"
#include "conifold/weights.hpp"

namespace conifold {

/// Exceptional multiplicities a stable special Lagrangian cone must realise
/// on the weight window [0, 2]:
///   gamma = 0 : 1            (constants)
///   gamma = 1 : 2m           (linear growth; ambient translations)
///   gamma = 2 : m^2 - 1 - sym_dim   (quadratic growth beyond the cone's
///                                    own symmetries)
/// and nothing else in [0, 2].
std::vector<WeightEntry> expected_stable_multiplicities(int m, int sym_dim);

struct MultiplicityCheck {
  double gamma = 0.0;
  int expected = 0;
  int found = 0;
};

struct StabilityVerdict {
  bool stable = false;
  std::vector<MultiplicityCheck> checks;   // gamma = 0, 1, 2
  std::vector<WeightEntry> extra_weights;  // other exceptional weights in [0,2]
  std::string detail;                      // empty when stable
};

/// Decides stability of a cone end from its link spectrum.  Requires a
/// non-sphere link (end.link_is_sphere false) and spectrum cutoff >= 2m
/// (the eigenvalue matching gamma = 2); fails with CutoffInsufficient
/// otherwise.
StabilityVerdict stability_check(const ConeEnd& end, int m);

/// Moduli slice of special Lagrangian cones through a fixed one, inside the
/// space cut out by the special-unitary ambient motions: m^2 + 2m - 1 - sym_dim.
int slice_dim(int m, int sym_dim);

/// Variant before the special-unitary reduction (Lagrangian deformations,
/// informational): m^2 + 2m - sym_dim.
int lagrangian_slice_dim(int m, int sym_dim);

/// Cokernel dimension of the stable-case deformation operator over all CS
/// ends: sum_i (m^2 + 2m - sym_dim_i).
long obstruction_dim_stable(int m, const std::vector<int>& sym_dims);

struct BreakdownTerm {
  std::string label;
  long value = 0;
};

/// Dimension report for one moduli computation.  `breakdown` always sums to
/// `dim_moduli`.  When `obstruction_is_bound` is set the obstruction value is
/// only an upper bound and smoothness of the moduli space is not guaranteed.
struct ModuliReport {
  CaseTag case_tag = CaseTag::Compact;
  std::string regime;
  long dim_moduli = 0;
  long obstruction_dim = 0;
  bool obstruction_is_bound = false;
  bool smooth_guaranteed = false;
  std::vector<BreakdownTerm> breakdown;
  std::vector<StabilityVerdict> cs_verdicts;  // one per CS end
  std::vector<NextWeight> cs_next_weight;     // first weight above 2, per CS end
  std::vector<std::string> warnings;
};

/// Compact case: smooth of dimension b1(L).
ModuliReport moduli_dim_compact(const ConifoldTopology& t);

/// AC case.  Rates componentwise in (2-m, 0) (decay regime, dimension b1_c)
/// or in (0, 2) non-exceptional (growth regime, dimension b1 + ker - 1).
/// Mixed regimes are rejected.
ModuliReport moduli_dim_AC(const ConifoldTopology& t,
                           const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates);

/// CS case, rates mu_j > 2 non-exceptional.  In the stable regime (every
/// cone stable and no exceptional weight in (2, mu_j]) the moduli space is
/// smooth of dimension b1_c - s + 1.  Outside it the same count is reported
/// with the obstruction upper bound flagged.  require_stable turns a
/// non-stable scenario into an error.
ModuliReport moduli_dim_CS(const ConifoldTopology& t,
                           const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates,
                           bool require_stable = false);

/// CS/AC case, CS rates mu > 2 and AC rates either all in (2-m, 0)
/// (dimension b1_c - s) or all in (0, 2) non-exceptional (dimension
/// b1_c_bullet - s + sum_i d_i, with d_i the exceptional count of AC end i
/// over [0, lambda_i]).  s = 0 reproduces the AC formulas term by term;
/// l >= 1 is required.
ModuliReport moduli_dim_CSAC(const ConifoldTopology& t,
                             const std::vector<ConeEnd>& ends,
                             const std::vector<double>& rates,
                             bool require_stable = false);

/// Re-derives every reported dimension along an independent route (index
/// jumps from a reference rate, block identities, stable-cokernel matching)
/// and returns the names of the identities verified.  Any mismatch raises
/// InternalInconsistency.
std::vector<std::string> cross_check(const ModuliReport& report,
                                     const ConifoldTopology& t,
                                     const std::vector<ConeEnd>& ends,
                                     const std::vector<double>& rates);

}  // namespace conifold
