#include "conifold/topology.hpp"

#include <sstream>

namespace conifold {

ConifoldTopology cone_topology(int m, int link_b1) {
  // A cone viewed as a two-ended conifold over one link: the restriction
  // maps to the link are isomorphisms, compactly-supported H^1 is the top
  // link Betti number (1 for a connected oriented link), and imposing
  // compact support near the vertex alone kills everything.
  ConifoldTopology t;
  t.m = m;
  t.s = 1;
  t.l = 1;
  t.link_b1 = {link_b1, link_b1};
  t.b1 = link_b1;
  t.b1_c = 1;
  t.b1_c_bullet = 0;
  return t;
}

std::vector<TopologyViolation> validate(const ConifoldTopology& t) {
  std::vector<TopologyViolation> out;
  auto flag = [&](const std::string& check, const std::string& detail) {
    out.push_back({check, detail});
  };
  auto str = [](auto v) { return std::to_string(v); };

  if (t.m < 3) flag("dimension", "m must be >= 3, got " + str(t.m));
  if (t.s < 0 || t.l < 0) flag("end-counts", "negative end count");
  const int e = t.s + t.l;
  if (int(t.link_b1.size()) != e)
    flag("link-betti-count",
         "expected " + str(e) + " link Betti numbers, got " +
             str(t.link_b1.size()));
  for (int b : t.link_b1)
    if (b < 0) flag("link-betti-sign", "negative link Betti number");
  if (t.b1 < 0 || t.b1_c < 0) flag("betti-sign", "negative Betti number");

  if (e == 0) {
    if (t.b1_c != t.b1)
      flag("compact-duality",
           "a compact conifold has b1_c = b1; got b1_c = " + str(t.b1_c) +
               ", b1 = " + str(t.b1));
    if (t.b1_c_bullet && *t.b1_c_bullet != t.b1)
      flag("compact-duality", "b1_c_bullet must equal b1 when there are no ends");
    return out;
  }

  // exactness bounds from the long sequence of the pair (L, ends)
  if (t.b1_c < e - 1)
    flag("hc1-image",
         "b1_c = " + str(t.b1_c) + " < e - 1 = " + str(e - 1) +
             ": compact-support H^1 cannot be that small");
  if (t.b1 < t.b1_c - e + 1)
    flag("hc1-into-h1",
         "image of compact-support H^1 has dim " + str(t.b1_c - e + 1) +
             " but b1 = " + str(t.b1));

  if (t.b1_c_bullet) {
    const int bb = *t.b1_c_bullet;
    if (bb < 0) flag("betti-sign", "negative b1_c_bullet");
    if (t.s == 0) {
      if (bb != t.b1)
        flag("bullet-no-cs",
             "with no CS ends the CS-supported variant equals b1");
    } else {
      if (bb < t.s - 1)
        flag("h0bullet-image",
             "b1_c_bullet = " + str(bb) + " < s - 1 = " + str(t.s - 1));
      if (t.b1 < bb - t.s + 1)
        flag("h0bullet-into-h1",
             "image of CS-supported H^1 has dim " + str(bb - t.s + 1) +
                 " but b1 = " + str(t.b1));
      if (bb < t.b1_c - t.l)
        flag("bullet-vs-full",
             "b1_c_bullet = " + str(bb) + " < b1_c - l = " +
                 str(t.b1_c - t.l) +
                 ": relaxing support on AC ends cannot lose classes");
    }
  }
  return out;
}

void require_consistent(const ConifoldTopology& t) {
  auto violations = validate(t);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "inconsistent topology:";
  for (const auto& v : violations) msg << " [" << v.check << "] " << v.detail;
  fail(ErrorKind::InconsistentTopology, msg.str());
}

int tilde_hc1_dim(const ConifoldTopology& t) {
  const int e = t.s + t.l;
  if (e < 1)
    fail(ErrorKind::InvalidInput,
         "compact-support image dimension needs at least one end");
  require_consistent(t);
  return t.b1_c - e + 1;
}

int tilde_h0bullet_dim(const ConifoldTopology& t) {
  require_consistent(t);
  if (t.s == 0) return t.b1_c_bullet.value_or(t.b1);
  if (!t.b1_c_bullet)
    fail(ErrorKind::InvalidInput,
         "b1_c_bullet is required when CS ends are present");
  return *t.b1_c_bullet - t.s + 1;
}

const char* decomp_case_name(DecompCase c) {
  switch (c) {
    case DecompCase::Compact: return "compact";
    case DecompCase::AC_decay: return "ac-decay";
    case DecompCase::AC_growth: return "ac-growth";
    case DecompCase::CS_growth: return "cs-growth";
    case DecompCase::CSAC_mixed: return "csac-mixed";
    case DecompCase::CSAC_growth: return "csac-growth";
  }
  return "unknown";
}

CohomologyBlocks decomposition_block_dims(const ConifoldTopology& t,
                                          DecompCase c) {
  require_consistent(t);
  CohomologyBlocks b;
  b.decomposition = c;
  const int e = t.s + t.l;
  switch (c) {
    case DecompCase::Compact:
      if (e != 0) fail(ErrorKind::InvalidInput, "compact case admits no ends");
      b.h_block = t.b1;
      b.h_label = "h1";
      b.e_label = "none";
      break;
    case DecompCase::AC_decay:
      if (t.s != 0 || t.l == 0)
        fail(ErrorKind::InvalidInput, "AC case requires AC ends only");
      b.h_block = tilde_hc1_dim(t);
      b.e_block = t.l - 1;
      b.h_label = "h_tilde_c1";
      b.e_label = "d_e_infinity";
      break;
    case DecompCase::AC_growth:
      if (t.s != 0 || t.l == 0)
        fail(ErrorKind::InvalidInput, "AC case requires AC ends only");
      b.h_block = t.b1;
      b.h_label = "h1";
      b.e_label = "none";
      break;
    case DecompCase::CS_growth:
      if (t.l != 0 || t.s == 0)
        fail(ErrorKind::InvalidInput, "CS case requires CS ends only");
      b.h_block = tilde_hc1_dim(t);  // = Ker(H^1(L) -> H^1 of the links)
      b.e_block = t.s - 1;
      b.h_label = "ker_rho";
      b.e_label = "d_e0";
      break;
    case DecompCase::CSAC_mixed: {
      if (t.l == 0)
        fail(ErrorKind::InvalidInput, "mixed case requires an AC end");
      b.h_block = tilde_hc1_dim(t);  // b1_c - (s + l) + 1
      b.e_block = t.l - 1;
      b.h_label = "h_tilde_c1";
      b.e_label = "d_e_prime";
      b.ker_rho_dim = long(t.b1_c) - t.s;
      if (*b.ker_rho_dim != b.h_block + b.e_block)
        fail(ErrorKind::InternalInconsistency,
             "mixed-case block identity failed: (b1_c - e + 1) + (l - 1) != "
             "b1_c - s");
      break;
    }
    case DecompCase::CSAC_growth:
      if (t.l == 0)
        fail(ErrorKind::InvalidInput, "mixed case requires an AC end");
      b.h_block = tilde_h0bullet_dim(t);
      b.e_block = std::max(t.s - 1, 0);
      b.h_label = "h_tilde_0bullet";
      b.e_label = "d_e0_mod_overlap";
      break;
  }
  return b;
}

}  // namespace conifold
