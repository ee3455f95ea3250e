#include "phimod/charspace.hpp"

#include <stdexcept>

namespace phimod {

CharVector::CharVector(int n_, int d_K_)
    : n(n_), d_K(d_K_), c_sm(static_cast<std::size_t>(n_)), c_an(static_cast<std::size_t>(n_), Vec(static_cast<std::size_t>(d_K_))) {}

CharVector CharVector::from_flat(int n, int d_K, const Vec& flat) {
  if (flat.size() != char_dim(n, d_K)) throw DimensionError("character vector has wrong length");
  CharVector c(n, d_K);
  for (int i = 0; i < n; ++i) {
    c.c_sm[static_cast<std::size_t>(i)] = flat[sm_index(d_K, i)];
    for (int s = 0; s < d_K; ++s) c.c_an[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = flat[an_index(d_K, i, s)];
  }
  return c;
}

Vec CharVector::flat() const {
  Vec v(char_dim(n, d_K));
  for (int i = 0; i < n; ++i) {
    v[sm_index(d_K, i)] = c_sm[static_cast<std::size_t>(i)];
    for (int s = 0; s < d_K; ++s) v[an_index(d_K, i, s)] = c_an[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
  }
  return v;
}

Subspace subspace_sm(int n, int d_K) {
  std::vector<Vec> vs;
  for (int i = 0; i < n; ++i) vs.push_back(unit_vec(char_dim(n, d_K), sm_index(d_K, i)));
  return Subspace::span(char_dim(n, d_K), vs);
}

Subspace subspace_sigma(int n, int d_K, int sigma) {
  if (sigma < 0 || sigma >= d_K) throw std::out_of_range("embedding index out of range");
  std::vector<Vec> vs;
  for (int i = 0; i < n; ++i) {
    vs.push_back(unit_vec(char_dim(n, d_K), sm_index(d_K, i)));
    vs.push_back(unit_vec(char_dim(n, d_K), an_index(d_K, i, sigma)));
  }
  return Subspace::span(char_dim(n, d_K), vs);
}

Subspace subspace_Pgprime(const ParabolicShape& shape, int d_K) {
  const int n = shape.n();
  if (n <= 0) throw std::invalid_argument("empty shape");
  std::vector<Vec> vs;
  for (int i = 0; i < n; ++i) vs.push_back(unit_vec(char_dim(n, d_K), sm_index(d_K, i)));
  for (Subset b : shape.blocks())
    for (int s = 0; s < d_K; ++s) {
      Vec v(char_dim(n, d_K));
      for (int i = 0; i < n; ++i)
        if (b & (1u << i)) v[an_index(d_K, i, s)] = 1;
      vs.push_back(std::move(v));
    }
  return Subspace::span(char_dim(n, d_K), vs);
}

Subspace subspace_gprime(int n, int d_K) { return subspace_Pgprime(ParabolicShape(std::vector<int>{n}), d_K); }

Vec weyl_act(const Perm& w, int d_K, const Vec& flat) {
  const int n = w.size();
  if (flat.size() != char_dim(n, d_K)) throw DimensionError("weyl_act: length mismatch");
  Perm wi = w.inverse();
  Vec out(flat.size());
  for (int j = 0; j < n; ++j)
    for (int c = 0; c <= d_K; ++c)
      out[static_cast<std::size_t>(j * (1 + d_K) + c)] = flat[static_cast<std::size_t>(wi(j) * (1 + d_K) + c)];
  return out;
}

CharVector weyl_act(const Perm& w, const CharVector& psi) {
  return CharVector::from_flat(psi.n, psi.d_K, weyl_act(w, psi.d_K, psi.flat()));
}

Matrix weyl_matrix(const Perm& w, int d_K) {
  const std::size_t N = char_dim(w.size(), d_K);
  Matrix m(N, N);
  for (std::size_t b = 0; b < N; ++b) {
    Vec c = weyl_act(w, d_K, unit_vec(N, b));
    for (std::size_t a = 0; a < N; ++a) m(a, b) = c[a];
  }
  return m;
}

Vec gprime_projection(int n, int d_K, const Vec& flat) {
  Vec out = flat;
  for (int s = 0; s < d_K; ++s) {
    Scalar mean = 0;
    for (int i = 0; i < n; ++i) mean += flat[an_index(d_K, i, s)];
    mean /= n;
    for (int i = 0; i < n; ++i) out[an_index(d_K, i, s)] = mean;
  }
  return out;
}

Vec diagonal_character(int n, const Vec& factor) {
  Vec out;
  for (int i = 0; i < n; ++i) out.insert(out.end(), factor.begin(), factor.end());
  return out;
}

}  // namespace phimod
