#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conifold/weights.hpp"

namespace conifold {

// Betti-number data for a connected conifold L of dimension m with s
// conically singular ends and l asymptotically conical ends.  b1 and b1_c
// are user inputs (ordinary and compactly-supported first Betti numbers);
// b1_c_bullet is the variant with the compact-support condition imposed on
// the CS ends only, needed when any AC rate lies in (0, 2).
struct ConifoldTopology {
  int m = 3;
  int s = 0;
  int l = 0;
  std::vector<int> link_b1;  // one per end, CS ends first
  int b1 = 0;
  int b1_c = 0;
  std::optional<int> b1_c_bullet;
};

// Convenience constructor for a single cone (s = 1, l = 1 conifold with the
// same link on both ends): b1_c equals the top link Betti number (1 for a
// connected oriented link) and the CS-restricted variant vanishes.
ConifoldTopology cone_topology(int m, int link_b1);

struct TopologyViolation {
  std::string check;
  std::string detail;
};

// Exactness bounds the inputs must satisfy, e.g. b1_c >= e - 1 and
// b1 >= b1_c - e + 1.  Empty result = consistent.
std::vector<TopologyViolation> validate(const ConifoldTopology& t);

// Throwing wrapper around validate().
void require_consistent(const ConifoldTopology& t);

/// dim of the image of compactly-supported 1-cohomology inside H^1(L):
/// b1_c - e + 1 for a connected L with e = s + l >= 1 ends.
int tilde_hc1_dim(const ConifoldTopology& t);

/// Same construction with supports compact near the CS ends only:
/// b1_c_bullet - s + 1 for s >= 1, and plain b1_c_bullet when s = 0
/// (the sequence degenerates; there is no constants correction).
int tilde_h0bullet_dim(const ConifoldTopology& t);

enum class DecompCase {
  Compact,
  AC_decay,    // all AC rates < 0
  AC_growth,   // all AC rates in (0, 2)
  CS_growth,   // CS rates > 0
  CSAC_mixed,  // CS rates > 0, AC rates < 0
  CSAC_growth, // CS rates > 0, AC rates in (0, 2)
};

const char* decomp_case_name(DecompCase c);

// Finite-dimensional blocks of the closed-1-form decomposition for each
// rate regime: a topological block (image of a cohomology group) and the
// differential of an explicit space of end-adapted functions.
struct CohomologyBlocks {
  DecompCase decomposition;
  long h_block = 0;      // topological block
  long e_block = 0;      // d(E)-type block
  std::string h_label;
  std::string e_label;
  // CSAC_mixed only: dim Ker(H^1_{.,c}(L) -> H^1 of the CS link union),
  // which must equal h_block + e_block.
  std::optional<long> ker_rho_dim;
};

CohomologyBlocks decomposition_block_dims(const ConifoldTopology& t,
                                          DecompCase c);

}  // namespace conifold
