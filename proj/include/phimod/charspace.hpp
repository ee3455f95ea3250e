#pragma once
// Coordinates on Hom(T(K), E) for the diagonal torus T of GL_n over K.
// Factor i contributes one smooth direction and d_K analytic ones; the flat
// layout is factor-major: [sm_i, an_{i,0}, ..., an_{i,d_K-1}] for i = 0..n-1.

#include "phimod/combinat.hpp"
#include "phimod/exactlin.hpp"

namespace phimod {

struct CharVector {
  int n = 0, d_K = 0;
  Vec c_sm;                  // n entries
  std::vector<Vec> c_an;     // n rows of d_K entries

  CharVector() = default;
  CharVector(int n_, int d_K_);
  static CharVector from_flat(int n, int d_K, const Vec& flat);
  Vec flat() const;
  bool operator==(const CharVector& o) const = default;
};

inline std::size_t char_dim(int n, int d_K) { return static_cast<std::size_t>(n * (1 + d_K)); }
inline std::size_t sm_index(int d_K, int i) { return static_cast<std::size_t>(i * (1 + d_K)); }
inline std::size_t an_index(int d_K, int i, int sigma) { return static_cast<std::size_t>(i * (1 + d_K) + 1 + sigma); }

Subspace subspace_sm(int n, int d_K);
Subspace subspace_sigma(int n, int d_K, int sigma);
Subspace subspace_gprime(int n, int d_K);
Subspace subspace_Pgprime(const ParabolicShape& shape, int d_K);

// Left action: component j of w.psi is component w^{-1}(j) of psi, so that
// (w.psi)(a) = psi(a_{w(1)}, ..., a_{w(n)}) and (w1 w2).psi = w1.(w2.psi).
CharVector weyl_act(const Perm& w, const CharVector& psi);
Vec weyl_act(const Perm& w, int d_K, const Vec& flat);
Matrix weyl_matrix(const Perm& w, int d_K);

// Projection onto subspace_gprime along {c_sm = 0, analytic parts summing to
// zero for each embedding}: analytic entries are replaced by their mean.
Vec gprime_projection(int n, int d_K, const Vec& flat);

// The diagonal embedding Hom(K^x, E) -> Hom(T(K), E), psi |-> psi o det.
Vec diagonal_character(int n, const Vec& factor);

}  // namespace phimod
