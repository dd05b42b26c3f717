#include "conifold/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace conifold {

std::vector<WeightEntry> expected_stable_multiplicities(int m, int sym_dim) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  if (sym_dim < 0 || sym_dim > m * m - 1)
    fail(ErrorKind::InvalidInput,
         "cone symmetry dimension must lie in [0, m^2 - 1]");
  return {{0.0, 1}, {1.0, 2 * m}, {2.0, m * m - 1 - sym_dim}};
}

StabilityVerdict stability_check(const ConeEnd& end, int m) {
  if (end.link_is_sphere)
    fail(ErrorKind::InvalidInput,
         "stability is defined for cones whose link is not a sphere");
  const auto expected = expected_stable_multiplicities(m, end.sym_dim);
  if (end.spectrum.cutoff < 2.0 * m - 1e-12 * m)
    fail(ErrorKind::CutoffInsufficient,
         "stability needs the spectrum up to 2m = " + std::to_string(2 * m) +
             "; cutoff is " + std::to_string(end.spectrum.cutoff));

  const ExceptionalWeightSet set =
      exceptional_set({end}, m, Window::closed(0.0, 2.0), true);

  StabilityVerdict v;
  std::ostringstream why;
  for (const auto& exp : expected) {
    MultiplicityCheck chk;
    chk.gamma = exp.gamma;
    chk.expected = exp.multiplicity;
    chk.found = total_multiplicity(set, {exp.gamma},
                                   default_rate_tol(end.spectrum.source));
    if (chk.found != chk.expected)
      why << " [gamma " << exp.gamma << ": found " << chk.found
          << ", stable pattern needs " << chk.expected << "]";
    v.checks.push_back(chk);
  }
  for (const auto& w : set.per_end[0].weights) {
    const bool at_pattern = std::any_of(
        expected.begin(), expected.end(), [&](const WeightEntry& e) {
          return std::abs(w.gamma - e.gamma) <=
                 default_rate_tol(end.spectrum.source);
        });
    if (!at_pattern) {
      v.extra_weights.push_back(w);
      why << " [unexpected exceptional weight " << w.gamma
          << " with multiplicity " << w.multiplicity << "]";
    }
  }
  v.stable = v.extra_weights.empty() &&
             std::all_of(v.checks.begin(), v.checks.end(),
                         [](const MultiplicityCheck& c) {
                           return c.found == c.expected;
                         });
  if (!v.stable) v.detail = "not stable:" + why.str();
  return v;
}

int slice_dim(int m, int sym_dim) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  if (sym_dim < 0 || sym_dim > m * m - 1)
    fail(ErrorKind::InvalidInput,
         "cone symmetry dimension must lie in [0, m^2 - 1]");
  return m * m + 2 * m - 1 - sym_dim;
}

int lagrangian_slice_dim(int m, int sym_dim) {
  return slice_dim(m, sym_dim) + 1;
}

long obstruction_dim_stable(int m, const std::vector<int>& sym_dims) {
  long d = 0;
  for (int s : sym_dims) d += lagrangian_slice_dim(m, s);
  return d;
}

namespace {

void check_rate_exceptional(const ConeEnd& end, int m, double rate, int idx) {
  const double tol = default_rate_tol(end.spectrum.source);
  const ExceptionalQuery q = is_exceptional({end}, m, {rate}, tol);
  if (q.exceptional) {
    std::ostringstream msg;
    msg << "rate " << rate << " on end " << idx
        << " is exceptional (weight " << q.nearest->gamma << ")";
    fail(ErrorKind::ExceptionalRate, msg.str());
  }
}

int weights_in(const ConeEnd& end, int m, const Window& w) {
  const ExceptionalWeightSet set = exceptional_set({end}, m, w, true);
  int total = 0;
  for (const auto& entry : set.per_end[0].weights) total += entry.multiplicity;
  return total;
}

struct CsAnalysis {
  std::vector<StabilityVerdict> verdicts;
  std::vector<NextWeight> next_weight;
  std::vector<int> sym_dims;
  bool stable_branch = true;
  std::string why_not;
};

// Shared CS-end analysis: stability verdicts, the 2+epsilon regime check
// (no exceptional weight in (2, mu]), and the first weight above 2.
CsAnalysis analyse_cs_ends(const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates, int m) {
  CsAnalysis a;
  std::ostringstream why;
  for (size_t j = 0; j < ends.size(); ++j) {
    if (ends[j].kind != EndKind::CS) continue;
    const double mu = rates[j];
    if (!(mu > 2.0))
      fail(ErrorKind::InvalidInput,
           "CS rate must be > 2; end " + std::to_string(j) + " has " +
               std::to_string(mu));
    check_rate_exceptional(ends[j], m, mu, int(j));
    a.sym_dims.push_back(ends[j].sym_dim);
    StabilityVerdict v;
    if (ends[j].link_is_sphere) {
      // the cone over a round sphere is a plane; the stability pattern is
      // defined for genuinely singular cones only
      v.stable = false;
      v.detail = "link is a round sphere, outside the stability pattern";
    } else {
      v = stability_check(ends[j], m);
    }
    if (!v.stable) {
      a.stable_branch = false;
      why << " [end " << j << " " << v.detail << "]";
    }
    const int crossed =
        weights_in(ends[j], m, Window{2.0, mu, false, true});
    if (crossed > 0) {
      a.stable_branch = false;
      why << " [end " << j << ": rate " << mu << " crosses " << crossed
          << " exceptional dimension(s) above weight 2]";
    }
    a.next_weight.push_back(first_weight_above(ends[j], m, 2.0));
    a.verdicts.push_back(std::move(v));
  }
  a.why_not = why.str();
  return a;
}

void check_counts(const ConifoldTopology& t, const std::vector<ConeEnd>& ends,
                  const std::vector<double>& rates) {
  require_consistent(t);
  if (rates.size() != ends.size())
    fail(ErrorKind::InvalidInput, "one rate per end required");
  int s = 0, l = 0;
  for (const auto& e : ends) (e.kind == EndKind::CS ? s : l) += 1;
  if (s != t.s || l != t.l)
    fail(ErrorKind::InvalidInput,
         "end kinds disagree with the topology's (s, l) counts");
}

}  // namespace

ModuliReport moduli_dim_compact(const ConifoldTopology& t) {
  if (t.s + t.l != 0)
    fail(ErrorKind::InvalidInput, "compact case admits no ends");
  require_consistent(t);
  ModuliReport r;
  r.case_tag = CaseTag::Compact;
  r.regime = "compact";
  r.dim_moduli = t.b1;
  r.breakdown = {{"h1_block", t.b1}};
  r.smooth_guaranteed = true;
  return r;
}

ModuliReport moduli_dim_AC(const ConifoldTopology& t,
                           const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates) {
  check_counts(t, ends, rates);
  if (t.s != 0 || t.l == 0)
    fail(ErrorKind::InvalidInput, "AC case requires AC ends only");
  const double gap_lo = double(2 - t.m);
  const bool decay = std::all_of(rates.begin(), rates.end(), [&](double r) {
    return r > gap_lo && r < 0.0;
  });
  const bool growth = std::all_of(rates.begin(), rates.end(), [](double r) {
    return r > 0.0 && r < 2.0;
  });
  ModuliReport r;
  r.case_tag = CaseTag::AC;
  r.smooth_guaranteed = true;
  if (decay) {
    r.regime = "decay";
    r.dim_moduli = t.b1_c;
    r.breakdown = {{"h_tilde_block", long(t.b1_c) - t.l + 1},
                   {"e_block", long(t.l) - 1}};
  } else if (growth) {
    long ker = 0;
    for (size_t j = 0; j < ends.size(); ++j) {
      check_rate_exceptional(ends[j], t.m, rates[j], int(j));
      ker += weights_in(ends[j], t.m, Window::open(gap_lo, rates[j]));
    }
    r.regime = "growth";
    r.dim_moduli = long(t.b1) + ker - 1;
    r.breakdown = {{"h_bullet_block", long(t.b1)}, {"index_block", ker - 1}};
  } else {
    fail(ErrorKind::InvalidInput,
         "AC rates must lie componentwise in (2-m, 0) or in (0, 2)");
  }
  return r;
}

ModuliReport moduli_dim_CS(const ConifoldTopology& t,
                           const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates,
                           bool require_stable) {
  check_counts(t, ends, rates);
  if (t.l != 0 || t.s == 0)
    fail(ErrorKind::InvalidInput, "CS case requires CS ends only");
  for (const auto& e : ends)
    if (e.kind != EndKind::CS)
      fail(ErrorKind::InvalidInput, "CS case requires CS ends only");

  CsAnalysis cs = analyse_cs_ends(ends, rates, t.m);
  if (require_stable && !cs.stable_branch)
    fail(ErrorKind::StabilityViolation,
         "stable branch requested but" + cs.why_not);

  ModuliReport r;
  r.case_tag = CaseTag::CS;
  r.regime = cs.stable_branch ? "stable" : "general";
  r.dim_moduli = tilde_hc1_dim(t);
  r.breakdown = {{"ker_rho_block", r.dim_moduli}};
  r.cs_verdicts = std::move(cs.verdicts);
  r.cs_next_weight = std::move(cs.next_weight);
  if (cs.stable_branch) {
    r.smooth_guaranteed = true;
  } else {
    const FredholmData fd = fredholm_data(CaseTag::CS, t.m, ends, rates);
    const long matched = obstruction_dim_stable(t.m, cs.sym_dims);
    r.obstruction_dim = std::max(0L, long(fd.cokernel_dim) - matched);
    r.obstruction_is_bound = true;
    r.warnings.push_back(
        "outside the stable regime: obstruction dimension is an upper bound "
        "and smoothness is not guaranteed (" + cs.why_not + " )");
  }
  return r;
}

ModuliReport moduli_dim_CSAC(const ConifoldTopology& t,
                             const std::vector<ConeEnd>& ends,
                             const std::vector<double>& rates,
                             bool require_stable) {
  check_counts(t, ends, rates);
  if (t.l == 0)
    fail(ErrorKind::InvalidInput,
         "CS/AC case requires at least one AC end (use the CS case instead)");

  const double gap_lo = double(2 - t.m);
  std::vector<size_t> ac_idx;
  for (size_t j = 0; j < ends.size(); ++j)
    if (ends[j].kind == EndKind::AC) ac_idx.push_back(j);

  bool decay = true, growth = true;
  for (size_t j : ac_idx) {
    if (!(rates[j] > gap_lo && rates[j] < 0.0)) decay = false;
    if (!(rates[j] > 0.0 && rates[j] < 2.0)) growth = false;
  }
  if (!decay && !growth)
    fail(ErrorKind::InvalidInput,
         "AC rates must lie componentwise in (2-m, 0) or in (0, 2)");

  CsAnalysis cs = analyse_cs_ends(ends, rates, t.m);
  if (require_stable && !cs.stable_branch)
    fail(ErrorKind::StabilityViolation,
         "stable branch requested but" + cs.why_not);

  ModuliReport r;
  r.case_tag = CaseTag::CSAC;
  r.cs_verdicts = std::move(cs.verdicts);
  r.cs_next_weight = std::move(cs.next_weight);

  if (decay) {
    r.regime = "decay";
    const long h = long(t.b1_c) - (t.s + t.l) + 1;
    const long eb = long(t.l) - 1;
    if (h + eb != long(t.b1_c) - t.s)
      fail(ErrorKind::InternalInconsistency,
           "mixed-case block identity failed");
    r.dim_moduli = long(t.b1_c) - t.s;
    r.breakdown = {{"h_tilde_block", h}, {"e_block", eb}};
  } else {
    r.regime = "growth";
    long d_sum = 0;
    for (size_t j : ac_idx) {
      check_rate_exceptional(ends[j], t.m, rates[j], int(j));
      d_sum += weights_in(ends[j], t.m, Window::closed(0.0, rates[j]));
    }
    const long h = tilde_h0bullet_dim(t);
    r.dim_moduli = h + d_sum - 1;
    r.breakdown = {{"h_bullet_block", h}, {"index_block", d_sum - 1}};
  }

  if (cs.stable_branch) {
    r.smooth_guaranteed = true;
  } else {
    // cokernel of the reference problem (CS rates as given, AC rates in the
    // gap) minus the end-deformation dimensions it matches in the stable case
    long coker = t.s;
    for (size_t j = 0; j < ends.size(); ++j)
      if (ends[j].kind == EndKind::CS)
        coker += weights_in(ends[j], t.m, Window::open(0.0, rates[j]));
    const long matched = obstruction_dim_stable(t.m, cs.sym_dims);
    r.obstruction_dim = std::max(0L, coker - matched);
    r.obstruction_is_bound = true;
    r.warnings.push_back(
        "outside the stable regime: obstruction dimension is an upper bound "
        "and smoothness is not guaranteed (" + cs.why_not + " )");
  }
  return r;
}

std::vector<std::string> cross_check(const ModuliReport& report,
                                     const ConifoldTopology& t,
                                     const std::vector<ConeEnd>& ends,
                                     const std::vector<double>& rates) {
  std::vector<std::string> verified;
  auto expect = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::InternalInconsistency, "cross-check failed: " + what);
  };

  long sum = 0;
  for (const auto& term : report.breakdown) sum += term.value;
  expect(sum == report.dim_moduli, "breakdown terms must sum to the dimension");
  verified.push_back("breakdown-sums-to-dimension");

  if (report.case_tag == CaseTag::Compact) return verified;

  if (report.regime == "decay" &&
      (report.case_tag == CaseTag::AC || report.case_tag == CaseTag::CSAC)) {
    expect(report.dim_moduli == long(t.b1_c) - t.s,
           "decay-regime dimension must be b1_c - s");
    verified.push_back("decay-dimension-identity");
  }

  if (report.regime == "growth" &&
      (report.case_tag == CaseTag::AC || report.case_tag == CaseTag::CSAC)) {
    // independent route: reference rates in the empty-weight interval and
    // the index jump from there
    const double ref = t.m == 3 ? -0.5 : 0.5 * double(3 - t.m);
    std::vector<double> from = rates;
    for (size_t j = 0; j < ends.size(); ++j)
      if (ends[j].kind == EndKind::AC) from[j] = ref;
    const int jump = index_jump(ends, t.m, from, rates);
    expect(report.dim_moduli == tilde_h0bullet_dim(t) + jump - 1,
           "growth-regime dimension must match the index jump route");
    verified.push_back("growth-dimension-via-index-jump");
  }

  if (report.case_tag == CaseTag::CS || report.case_tag == CaseTag::CSAC) {
    std::vector<int> sym_dims;
    for (const auto& e : ends)
      if (e.kind == EndKind::CS) sym_dims.push_back(e.sym_dim);
    for (int sd : sym_dims)
      expect(lagrangian_slice_dim(t.m, sd) == slice_dim(t.m, sd) + 1,
             "slice dimensions must differ by the constants direction");
    if (!sym_dims.empty()) verified.push_back("slice-plus-constants");

    if (report.smooth_guaranteed && !sym_dims.empty()) {
      // in the stable 2+epsilon regime the reference cokernel is exactly
      // matched by the cone deformations
      long coker = t.s;
      for (size_t j = 0; j < ends.size(); ++j)
        if (ends[j].kind == EndKind::CS)
          coker += [&] {
            const ExceptionalWeightSet set = exceptional_set(
                {ends[j]}, t.m, Window::open(0.0, rates[j]), true);
            int total = 0;
            for (const auto& w : set.per_end[0].weights)
              total += w.multiplicity;
            return long(total);
          }();
      expect(coker == obstruction_dim_stable(t.m, sym_dims),
             "stable cokernel must match the end-deformation dimension");
      verified.push_back("stable-cokernel-matches-obstruction");
    }
  }
  return verified;
}

}  // namespace conifold
