#pragma once
// Presented models of the two amalgamation diagrams and the map t_D between them.
//
// A model has one linear map mu_w: Hom(T(K), E) -> target per w in S_n (in
// all_perms order). The automorphic model realizes Ext^1(pi_alg, pi_1) with the
// maps zeta_w; the Galois models realize the de Rham-reduced deformation space
// with the maps kappa_w. t_D is the unique map with t_D mu^aut_w = mu^gal_w.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phimod/charspace.hpp"
#include "phimod/filphi.hpp"
#include "phimod/glncomb.hpp"

namespace phimod {

struct PresentedModel {
  std::string kind;  // "aut", "gal", "gal-linear"
  int n = 0, d_K = 0;
  std::size_t target_dim = 0;
  std::vector<std::string> labels;  // one per target coordinate
  std::vector<Perm> perms;          // all_perms(n)
  std::vector<Matrix> mu;           // target_dim x char_dim(n, d_K), aligned with perms
  bool bookkeeping_only = false;    // dimensions only, no maps
  std::string note;

  std::size_t index_of(const Perm& w) const;
  const Matrix& mu_of(const Perm& w) const { return mu.at(index_of(w)); }
  Vec apply(const Perm& w, const Vec& psi) const { return mu_of(w).apply(psi); }
  Matrix assembled() const;  // [mu_w1 | mu_w2 | ...]
  Subspace span() const;     // sum of the images
  Subspace relations() const;
};

PresentedModel build_aut_model(int n, int d_K);
Vec zeta_w(const PresentedModel& aut, const Perm& w, const Vec& psi);

// Galois side computed directly in b_H per embedding: kappa_w(psi) has smooth
// part (w^{-1} psi)_sm and, at sigma, the element of the Borel of the Hodge flag
// acting by psi_{an,k,sigma} on T_{w,k} ∩ H_{n-k+1}. Any n, d_K, regular weights.
PresentedModel build_linear_gal_model(const FilteredPhiModule& d);

// Fixed integer matrices of the rank-3, K = Q_p pairing; columns are the
// coordinates (X1, X2, k, t) of the model of Ext^1(C_1, D_1), rows the
// rank-2 Galois target.
struct PairingMatrices {
  Matrix a1_minus, a2_minus, a1_plus, a2_plus;
  bool operator==(const PairingMatrices& o) const = default;
};
const PairingMatrices& frozen_pairing();

// Coordinates (x1, x2) of iota = x1 alpha_1 + x2 alpha_2 after moving D_1 and
// C_1 to their torus-canonical forms (where alpha_1 = E_22, alpha_2 = E_11).
std::pair<Scalar, Scalar> iota_coordinates(const FilteredPhiModule& d1, const FilteredPhiModule& c1, const Matrix& iota_map);

struct SurrogatePairing {
  Scalar x1, x2;
  Matrix iminus, iplus;  // 5 x 4
  Subspace image_minus, image_plus, kernel_minus, kernel_plus;
};
// Throws InvariantViolation naming the failed condition when x1 x2 = 0.
SurrogatePairing surrogate_pairing(const Scalar& x1, const Scalar& x2, const PairingMatrices& a = frozen_pairing());
SurrogatePairing surrogate_pairing(const FilteredPhiModule& d1, const FilteredPhiModule& c1, const Matrix& iota_map,
                                   const PairingMatrices& a = frozen_pairing());

// The rank-3 relation space and quotient for a pairing: V = gal(D_1) + Hom(K^x,E)
// + gal(C_1) + Hom(K^x,E), dim 14.
struct RelationSpace {
  std::size_t v_dim = 0;
  Subspace relations;
  std::size_t target_dim = 0;
};
RelationSpace relation_space(const SurrogatePairing& s);

// de Rham directions of the rank-2 Galois target: mu_id of smooth characters.
Subspace de_rham_subspace_rank2();
Vec diagonal_twist_rank2(const Vec& psi_factor);  // mu_id of psi o det

struct SurrogateCheck {
  std::string name;  // role-based constraint name
  bool pass = false;
  std::string detail;
};
struct ValidationReport {
  std::vector<SurrogateCheck> checks;
  std::size_t grid_points = 0;
  bool ok() const;
  std::optional<std::string> first_failure() const;
};
// Re-verifies every rank and containment constraint on a grid of (x1 : x2).
ValidationReport validate_surrogate(const PairingMatrices& a = frozen_pairing(), std::size_t grid_points = 50);
std::vector<std::pair<Scalar, Scalar>> surrogate_grid(std::size_t points);

// Recursive Galois model: rank one is Hom(K^x, E); rank two for every d_K;
// rank three for d_K = 1 through the pairing. Other sizes are bookkeeping-only.
PresentedModel build_gal_model(const FilteredPhiModule& d, const PairingMatrices& a = frozen_pairing());

struct TDModel {
  PresentedModel aut, gal;
  Matrix tD;  // gal.target_dim x aut.target_dim
  Subspace ker;
  std::size_t relations_checked = 0;
};
enum class GalBackend { recursive, linear };
TDModel t_D(const PresentedModel& aut, const PresentedModel& gal);
TDModel t_D(const FilteredPhiModule& d, GalBackend backend = GalBackend::recursive,
            const PairingMatrices& a = frozen_pairing());
// dim(ker ∩ image mu^aut_w) for every w.
std::vector<std::size_t> kernel_meets_images(const TDModel& td);

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);
std::string kernel_canonical_text(const TDModel& td);

// Intertwining instances mu_{w1}(psi) = mu_{w2}(u psi), u = w2 w1^{-1} in W_P,
// psi over a basis of Hom_{P,g'}; every standard shape of size n.
struct IntertwiningTally {
  std::size_t checked = 0, failed = 0;
  std::string first_failure;
};
IntertwiningTally check_intertwining(const PresentedModel& m);

struct RecoveryEntry {
  Scalar a;
  std::size_t ker_dim = 0;
  std::string canonical;
  std::uint64_t hash = 0;
};
struct RecoveryReport {
  std::vector<RecoveryEntry> entries;  // distinct samples, in input order
  std::vector<std::string> warnings;
  std::vector<std::pair<Scalar, Scalar>> collisions;
  bool injective = true;
  // For each sample, the samples whose kernel matches it (only itself when injective).
  std::vector<std::vector<Scalar>> round_trip;
};
RecoveryReport hodge_recovery(const Vec& alphas, const std::vector<int>& h, const Vec& samples, long p,
                              bool parallel = false, const PairingMatrices& a = frozen_pairing());

struct IntertwiningResult {
  bool holds = false;
  Vec twisted;             // d1_class minus the twist by psi
  std::optional<Vec> m;    // a preimage under iminus when holds
};
IntertwiningResult higher_intertwining_check(const SurrogatePairing& s, const Vec& d1_class, const Vec& psi_factor);

}  // namespace phimod
