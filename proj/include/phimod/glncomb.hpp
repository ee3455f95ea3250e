#pragma once
// GL_n-side bookkeeping: length-one constituent labels, the sets attached to
// parabolic filtrations, extension dimensions and their exact-sequence identities.

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "phimod/combinat.hpp"

namespace phimod {

struct Constituent {
  Subset I = 0;  // |I| = i
  int i = 0;     // 1 <= i <= n-1
  int sigma = 0;
  auto operator<=>(const Constituent&) const = default;
  std::string to_string() const;
};

// (w({1..i}), i, sigma).
Constituent constituent_of(const Perm& w, int i, int sigma);
// Ordered by i, then I lexicographically, then sigma; count (2^n - 2) d_K.
std::vector<Constituent> constituents_pi1(int n, int d_K);
// Constituents occurring in the induction attached to the filtration of shape.
std::vector<Constituent> s_FP(const ParabolicShape& shape, int d_K);
long long s_FP_count_formula(const ParabolicShape& shape, int d_K);

enum class ExtKind {
  alg,                    // Ext^1(pi_alg, pi_alg)
  ps,                     // Ext^1(pi_alg, PS_1)
  aut_pi1,                // Ext^1(pi_alg, pi_1)
  aut_parabolic,          // Ext^1(pi_alg, pi_{F_P})           needs shape
  aut_pi1_sigma,          // sigma-analytic version of aut_pi1
  aut_parabolic_sigma,    // sigma-analytic version of aut_parabolic, needs shape
  gal_full,               // Ext^1(D, D)
  gal_g,                  // de Rham deformations
  gal_w,                  // trianguline deformations along one refinement
  gal_zero,               // deformations with trivial Hodge-Tate-Sen and eigenvalue data
  gal_bar,                // gal_full / gal_zero
  gal_gprime,             // de Rham up to twist by a character of K^x
  gal_parabolic,          // deformations along a parabolic filtration, needs shape
  gal_sigma,              // de Rham away from sigma
  gal_parabolic_sigma,    // parabolic and de Rham away from sigma, needs shape
  gal_iota,               // deformations of D_1 compatible with iota_D
  gal_alpha,              // deformations of D_1 compatible with one alpha_i
  gal_alpha_cap,          // intersection for two distinct alpha maps
  gal_alpha_sum,          // sum for two distinct alpha maps
  gal_FG_cap,             // deformations along both corank-one filtrations
  gal_F,                  // deformations along the top-sub corank-one filtration
  gal_C1D1,               // Ext^1(C_1, D_1)
  ker_tD,                 // kernel of the amalgamation map
};

std::string ext_kind_name(ExtKind k);
std::optional<ExtKind> parse_ext_kind(const std::string& name);
std::vector<ExtKind> all_ext_kinds();
bool ext_kind_needs_shape(ExtKind k);
long long ext_dim(ExtKind kind, int n, int d_K, const ParabolicShape* shape = nullptr);

struct IdentityCheck {
  std::string name;
  std::string formula;
  long long lhs = 0, rhs = 0;
  bool pass() const { return lhs == rhs; }
};

// Every additivity identity for (n, d_K); shape-dependent identities are run
// for the given shape, or for every ordered partition of n when absent.
std::vector<IdentityCheck> exact_sequence_checks(int n, int d_K, const ParabolicShape* shape = nullptr);

struct SocleDiagram {
  int n = 0, d_K = 0;
  long long layer1 = 1;                // copies of pi_alg in the socle
  std::vector<Constituent> layer2;     // each with multiplicity one
  long long layer3 = 0;                // copies of pi_alg on top
};

SocleDiagram socle_pi_min(int n, int d_K);

}  // namespace phimod
