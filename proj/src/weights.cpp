#include "conifold/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conifold {

const char* end_kind_name(EndKind k) {
  return k == EndKind::CS ? "CS" : "AC";
}

const char* case_tag_name(CaseTag t) {
  switch (t) {
    case CaseTag::Compact: return "compact";
    case CaseTag::AC: return "AC";
    case CaseTag::CS: return "CS";
    case CaseTag::CSAC: return "CSAC";
  }
  return "unknown";
}

void validate_end(const ConeEnd& end, int m) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  if (end.sym_dim < 0 || end.sym_dim > m * m - 1)
    fail(ErrorKind::InvalidInput,
         "cone symmetry dimension must lie in [0, m^2 - 1]");
  if (end.kind == EndKind::CS && !(end.rate > 2.0))
    fail(ErrorKind::InvalidInput, "CS convergence rate must be > 2");
  if (end.kind == EndKind::AC && !(end.rate < 2.0))
    fail(ErrorKind::InvalidInput, "AC convergence rate must be < 2");
}

RootPair roots_for_eigenvalue(double e, int m) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  const double p = double(2 - m);
  const double disc = p * p + 4.0 * e;
  if (disc < 0.0)
    fail(ErrorKind::InvalidInput,
         "eigenvalue below the homogeneity discriminant");
  const double root = std::sqrt(disc);
  return {(p + root) / 2.0, (p - root) / 2.0};
}

namespace {

double weight_eigenvalue(double g, int m) { return g * (g + double(m - 2)); }

double slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

}  // namespace

bool Window::contains(double g) const {
  const bool above =
      include_lo ? (g >= lo - slack(lo)) : (g > lo + slack(lo));
  const bool below =
      include_hi ? (g <= hi + slack(hi)) : (g < hi - slack(hi));
  return above && below;
}

double required_cutoff(const Window& window, int m) {
  if (window.lo > window.hi)
    fail(ErrorKind::InvalidInput, "weight window is empty");
  return std::max({0.0, weight_eigenvalue(window.lo, m),
                   weight_eigenvalue(window.hi, m)});
}

namespace {

EndWeights end_weights(const Spectrum& spectrum, int m, const Window& window) {
  EndWeights ew;
  const double needed = required_cutoff(window, m);
  ew.complete = spectrum.cutoff >= needed - slack(needed);
  ew.covered_hi = roots_for_eigenvalue(spectrum.cutoff, m).plus;
  for (const auto& entry : spectrum.entries) {
    const RootPair r = roots_for_eigenvalue(entry.eigenvalue, m);
    for (double g : {r.minus, r.plus})
      if (window.contains(g)) ew.weights.push_back({g, entry.multiplicity});
  }
  std::sort(ew.weights.begin(), ew.weights.end(),
            [](const WeightEntry& a, const WeightEntry& b) {
              return a.gamma < b.gamma;
            });
  return ew;
}

int weight_count(const EndWeights& ew) {
  int total = 0;
  for (const auto& w : ew.weights) total += w.multiplicity;
  return total;
}

}  // namespace

ExceptionalWeightSet exceptional_set(const std::vector<ConeEnd>& ends, int m,
                                     const Window& window, bool strict) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  ExceptionalWeightSet set;
  set.m = m;
  set.window = window;
  set.complete = true;
  for (size_t j = 0; j < ends.size(); ++j) {
    EndWeights ew = end_weights(ends[j].spectrum, m, window);
    if (!ew.complete) {
      set.complete = false;
      if (strict) {
        std::ostringstream msg;
        msg << "end " << j << ": spectrum cutoff " << ends[j].spectrum.cutoff
            << " does not cover weight window [" << window.lo << ", "
            << window.hi << "] (needs " << required_cutoff(window, m) << ")";
        fail(ErrorKind::CutoffInsufficient, msg.str());
      }
    }
    set.per_end.push_back(std::move(ew));
  }
  return set;
}

int total_multiplicity(const ExceptionalWeightSet& set,
                       const std::vector<double>& rates, double tol) {
  if (rates.size() != set.per_end.size())
    fail(ErrorKind::InvalidInput, "one rate per end required");
  if (!set.complete)
    fail(ErrorKind::CutoffInsufficient,
         "multiplicity query on an incomplete weight set");
  int total = 0;
  for (size_t j = 0; j < rates.size(); ++j)
    for (const auto& w : set.per_end[j].weights)
      if (std::abs(w.gamma - rates[j]) <= tol * std::max(1.0, std::abs(w.gamma)))
        total += w.multiplicity;
  return total;
}

ExceptionalQuery is_exceptional(const std::vector<ConeEnd>& ends, int m,
                                const std::vector<double>& rates, double tol) {
  if (rates.size() != ends.size())
    fail(ErrorKind::InvalidInput, "one rate per end required");
  ExceptionalQuery q;
  for (size_t j = 0; j < ends.size(); ++j) {
    const Spectrum& sp = ends[j].spectrum;
    const double needed =
        required_cutoff(Window::closed(rates[j], rates[j]), m);
    if (sp.cutoff < needed - slack(needed)) {
      std::ostringstream msg;
      msg << "end " << j << ": cutoff " << sp.cutoff
          << " cannot certify rate " << rates[j] << " (needs " << needed
          << ")";
      fail(ErrorKind::CutoffInsufficient, msg.str());
    }
    for (const auto& entry : sp.entries) {
      const RootPair r = roots_for_eigenvalue(entry.eigenvalue, m);
      for (double g : {r.minus, r.plus}) {
        const double dist = std::abs(g - rates[j]);
        if (!q.nearest || dist < q.nearest->distance - slack(dist) ||
            (std::abs(dist - q.nearest->distance) <= slack(dist) &&
             g > q.nearest->gamma)) {
          q.nearest = NearestWeight{g, dist, int(j)};
        }
        if (dist <= tol * std::max(1.0, std::abs(g))) q.exceptional = true;
      }
    }
  }
  return q;
}

double default_rate_tol(SpectrumSource source, double mesh_tol) {
  if (source == SpectrumSource::Mesh) return std::max(1e-6, mesh_tol);
  return 1e-9;
}

namespace {

void require_nonexceptional(const std::vector<ConeEnd>& ends, int m,
                            const std::vector<double>& rates,
                            const char* what) {
  for (size_t j = 0; j < ends.size(); ++j) {
    const double tol = default_rate_tol(ends[j].spectrum.source);
    ExceptionalQuery q = is_exceptional({ends[j]}, m, {rates[j]}, tol);
    if (q.exceptional) {
      std::ostringstream msg;
      msg << what << ": rate " << rates[j] << " on end " << j
          << " is exceptional (weight " << q.nearest->gamma << ")";
      fail(ErrorKind::ExceptionalRate, msg.str());
    }
  }
}

// Sum over ends of exceptional multiplicities in the open interval
// (lo_j, hi_j); empty intervals contribute 0.
int open_interval_count(const std::vector<ConeEnd>& ends, int m,
                        const std::vector<double>& lo,
                        const std::vector<double>& hi) {
  int total = 0;
  for (size_t j = 0; j < ends.size(); ++j) {
    if (!(lo[j] < hi[j])) continue;
    ExceptionalWeightSet set =
        exceptional_set({ends[j]}, m, Window::open(lo[j], hi[j]), true);
    total += weight_count(set.per_end[0]);
  }
  return total;
}

}  // namespace

FredholmData fredholm_data(CaseTag tag, int m, const std::vector<ConeEnd>& ends,
                           const std::vector<double>& rates) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  if (rates.size() != ends.size())
    fail(ErrorKind::InvalidInput, "one rate per end required");
  const double gap_lo = double(2 - m);
  int s = 0, l = 0;
  for (const auto& e : ends) (e.kind == EndKind::CS ? s : l) += 1;

  auto in_gap = [&](double r) { return r > gap_lo && r < 0.0; };

  FredholmData out;
  switch (tag) {
    case CaseTag::Compact: {
      if (!ends.empty())
        fail(ErrorKind::InvalidInput, "compact case admits no ends");
      out.kernel_dim = 1;
      out.cokernel_dim = 1;
      out.clause = "compact";
      break;
    }
    case CaseTag::AC: {
      if (s != 0 || l == 0)
        fail(ErrorKind::InvalidInput, "AC case requires AC ends only");
      require_nonexceptional(ends, m, rates, "AC rates");
      const bool all_gap = std::all_of(rates.begin(), rates.end(), in_gap);
      const bool all_above = std::all_of(rates.begin(), rates.end(),
                                         [&](double r) { return r > gap_lo; });
      const bool all_below = std::all_of(rates.begin(), rates.end(),
                                         [](double r) { return r < 0.0; });
      if (all_gap) {
        out.clause = "ac-isomorphism";
      } else if (all_above) {
        std::vector<double> lo(ends.size(), gap_lo);
        out.kernel_dim = open_interval_count(ends, m, lo, rates);
        out.clause = "ac-surjective";
      } else if (all_below) {
        std::vector<double> hi(ends.size(), 0.0);
        out.cokernel_dim = open_interval_count(ends, m, rates, hi);
        out.clause = "ac-injective";
      } else {
        fail(ErrorKind::InvalidInput,
             "AC rates mix growth above 0 with decay below 2-m: no clause "
             "applies");
      }
      break;
    }
    case CaseTag::CS: {
      if (l != 0 || s == 0)
        fail(ErrorKind::InvalidInput, "CS case requires CS ends only");
      require_nonexceptional(ends, m, rates, "CS rates");
      const bool all_gap = std::all_of(rates.begin(), rates.end(), in_gap);
      const bool all_pos = std::all_of(rates.begin(), rates.end(),
                                       [](double r) { return r > 0.0; });
      if (all_gap) {
        out.kernel_dim = 1;
        out.cokernel_dim = 1;
        out.clause = "cs-constants";
      } else if (all_pos) {
        std::vector<double> lo(ends.size(), 0.0);
        out.cokernel_dim = s + open_interval_count(ends, m, lo, rates);
        out.clause = "cs-injective";
      } else {
        fail(ErrorKind::InvalidInput,
             "CS rates must lie in (2-m, 0) or all be positive: no clause "
             "applies");
      }
      break;
    }
    case CaseTag::CSAC: {
      if (s == 0 || l == 0)
        fail(ErrorKind::InvalidInput, "CS/AC case requires ends of both kinds");
      require_nonexceptional(ends, m, rates, "CS/AC rates");
      bool all_gap = true, cs_pos = true, ac_neg = true;
      for (size_t j = 0; j < ends.size(); ++j) {
        if (!in_gap(rates[j])) all_gap = false;
        if (ends[j].kind == EndKind::CS && !(rates[j] > 0.0)) cs_pos = false;
        if (ends[j].kind == EndKind::AC && !(rates[j] < 0.0)) ac_neg = false;
      }
      if (all_gap) {
        out.clause = "csac-isomorphism";
      } else if (cs_pos && ac_neg) {
        int sum = 0;
        for (size_t j = 0; j < ends.size(); ++j) {
          if (ends[j].kind != EndKind::CS) continue;
          sum += open_interval_count({ends[j]}, m, {0.0}, {rates[j]});
        }
        out.cokernel_dim = s + sum;
        out.clause = "csac-injective";
      } else {
        fail(ErrorKind::InvalidInput,
             "CS/AC rates must lie in (2-m, 0), or be positive on CS ends "
             "and negative on AC ends: no clause applies");
      }
      break;
    }
  }
  out.index = out.kernel_dim - out.cokernel_dim;
  return out;
}

int index_jump(const std::vector<ConeEnd>& ends, int m,
               const std::vector<double>& from,
               const std::vector<double>& to) {
  if (from.size() != ends.size() || to.size() != ends.size())
    fail(ErrorKind::InvalidInput, "one rate per end required");
  require_nonexceptional(ends, m, from, "jump start rates");
  require_nonexceptional(ends, m, to, "jump end rates");
  int jump = 0;
  for (size_t j = 0; j < ends.size(); ++j) {
    const double lo = std::min(from[j], to[j]), hi = std::max(from[j], to[j]);
    const int count = open_interval_count({ends[j]}, m, {lo}, {hi});
    const int direction = to[j] > from[j] ? 1 : -1;
    const int orientation = ends[j].kind == EndKind::AC ? 1 : -1;
    jump += direction * orientation * count;
  }
  return jump;
}

NextWeight first_weight_above(const ConeEnd& end, int m, double threshold) {
  NextWeight out;
  out.certified_up_to = roots_for_eigenvalue(end.spectrum.cutoff, m).plus;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& entry : end.spectrum.entries) {
    const double g = roots_for_eigenvalue(entry.eigenvalue, m).plus;
    if (g > threshold + slack(threshold)) best = std::min(best, g);
  }
  if (std::isfinite(best) && best <= out.certified_up_to + slack(best))
    out.gamma = best;
  return out;
}

}  // namespace conifold
