#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conifold/spectrum.hpp"

namespace conifold {

enum class EndKind { CS, AC };  // conically singular / asymptotically conical

const char* end_kind_name(EndKind k);

// One cone end of a conifold: the link spectrum plus the data the dimension
// formulas consume.  `rate` is the geometric convergence rate of the end
// (mu > 2 for CS, lambda < 2 for AC); analytic weight vectors are passed to
// the operations separately.
struct ConeEnd {
  EndKind kind = EndKind::AC;
  Spectrum spectrum;
  double rate = 0.0;
  int sym_dim = 0;  // dimension of the symmetry group of the cone
  bool link_is_sphere = false;
};

void validate_end(const ConeEnd& end, int m);

/// Homogeneity roots.  A function r^g s on the cone over a link with
/// Laplace eigenpair (e, s) is harmonic exactly when g(g + m - 2) = e.
/// For e >= 0 the two roots satisfy g_plus >= 0 and g_minus <= 2 - m.
struct RootPair {
  double plus;
  double minus;
};
RootPair roots_for_eigenvalue(double e, int m);

/// Half-open/closed interval of weights; endpoints are included only when
/// the corresponding flag is set.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool include_lo = true;
  bool include_hi = true;

  static Window closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Window open(double lo, double hi) { return {lo, hi, false, false}; }
  bool contains(double g) const;
};

/// Smallest spectrum cutoff that makes a weight window fully decidable:
/// every eigenvalue with a root in the window satisfies e <= this bound.
double required_cutoff(const Window& window, int m);

struct WeightEntry {
  double gamma = 0.0;
  int multiplicity = 0;
};

struct EndWeights {
  std::vector<WeightEntry> weights;  // sorted ascending by gamma
  bool complete = false;             // spectrum cutoff covers the window
  double covered_hi = 0.0;  // largest gamma >= 0 the cutoff can certify
};

/// Exceptional weights of a set of ends over a common window.  A weight g is
/// exceptional for an end when g(g + m - 2) is a link eigenvalue; its
/// multiplicity is that eigenvalue's multiplicity.
struct ExceptionalWeightSet {
  int m = 0;
  Window window;
  std::vector<EndWeights> per_end;
  bool complete = false;  // all ends complete over the window
};

/// strict = fail with CutoffInsufficient when some end's spectrum does not
/// cover the window; otherwise the per-end `complete` flags record it.
ExceptionalWeightSet exceptional_set(const std::vector<ConeEnd>& ends, int m,
                                     const Window& window, bool strict = true);

/// Sum of per-end multiplicities at the components of `rates` (0 where the
/// component is not exceptional).  Matching uses an absolute tolerance on
/// gamma of tol * max(1, |gamma|).
int total_multiplicity(const ExceptionalWeightSet& set,
                       const std::vector<double>& rates, double tol = 1e-9);

struct NearestWeight {
  double gamma = 0.0;
  double distance = 0.0;
  int end = 0;
};

struct ExceptionalQuery {
  bool exceptional = false;
  std::optional<NearestWeight> nearest;  // ties broken toward larger gamma
};

/// Is any component of `rates` within tol of an exceptional weight of the
/// corresponding end?  Also reports the nearest weight over all ends.
ExceptionalQuery is_exceptional(const std::vector<ConeEnd>& ends, int m,
                                const std::vector<double>& rates, double tol);

/// Default non-exceptional check tolerance for spectra of a given source.
double default_rate_tol(SpectrumSource source, double mesh_tol = 1e-8);

enum class CaseTag { Compact, AC, CS, CSAC };

const char* case_tag_name(CaseTag t);

/// Kernel/cokernel dimensions of the Laplacian between weighted Sobolev
/// spaces, per the classical Fredholm clauses.
///
///   compact:                       ker 1, coker 1
///   AC,  all rates in (2-m, 0):    iso
///   AC,  all rates > 2-m:          surjective; ker = sum of exceptional
///                                  multiplicities in (2-m, rate_j) per end
///   AC,  all rates < 0:            injective; coker by the jump rule
///   CS,  all rates in (2-m, 0):    ker 1, coker 1
///   CS,  all rates > 0:            injective; coker = s + sum over
///                                  exceptional weights in (0, rate_j)
///   CSAC, all rates in (2-m, 0):   iso
///   CSAC, CS rates > 0, AC < 0:    injective; coker = s + CS-end sum as above
///
/// Rate vectors outside these clauses are rejected (clause mismatch), as are
/// exceptional rates.
struct FredholmData {
  int kernel_dim = 0;
  int cokernel_dim = 0;
  int index = 0;
  std::string clause;
};

FredholmData fredholm_data(CaseTag tag, int m, const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates);

/// Index change of the weighted Laplacian when the rate vector moves from
/// `from` to `to` (both non-exceptional, componentwise).  Crossing an
/// exceptional weight upward adds its multiplicity on an AC component and
/// subtracts it on a CS component.
int index_jump(const std::vector<ConeEnd>& ends, int m,
               const std::vector<double>& from, const std::vector<double>& to);

/// Smallest exceptional weight of `end` strictly above `threshold`, when the
/// cutoff reaches far enough to certify it.  `certified_up_to` is the largest
/// weight the cutoff can decide either way.
struct NextWeight {
  std::optional<double> gamma;
  double certified_up_to = 0.0;
};
NextWeight first_weight_above(const ConeEnd& end, int m, double threshold);

}  // namespace conifold
