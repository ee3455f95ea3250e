#include "phimod/filphi.hpp"

#include <algorithm>
#include <set>

namespace phimod {

namespace {

std::vector<std::size_t> members(Subset r, int n) {
  std::vector<std::size_t> out;
  for (int i = 0; i < n; ++i)
    if (r & (1u << i)) out.push_back(static_cast<std::size_t>(i));
  return out;
}

// Rows of the coordinate projection E^n -> E^{|idx|}.
Matrix coordinate_projection(std::size_t n, const std::vector<std::size_t>& idx) {
  Matrix m(idx.size(), n);
  for (std::size_t k = 0; k < idx.size(); ++k) m(k, idx[k]) = 1;
  return m;
}

Subspace coordinate_span(std::size_t n, const std::vector<std::size_t>& idx) {
  std::vector<Vec> vs;
  for (auto i : idx) vs.push_back(unit_vec(n, i));
  return Subspace::span(n, vs);
}

// vec(X) |-> vec(A X) for X of shape r x c, row-major.
Matrix left_mult(const Matrix& a, std::size_t r, std::size_t c) {
  Matrix m(a.rows() * c, r * c);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t rr = 0; rr < r; ++rr)
      if (sgn(a(i, rr)) != 0)
        for (std::size_t cc = 0; cc < c; ++cc) m(i * c + cc, rr * c + cc) = a(i, rr);
  return m;
}

// vec(X) |-> vec(X B) for X of shape r x c, row-major.
Matrix right_mult(const Matrix& b, std::size_t r, std::size_t c) {
  Matrix m(r * b.cols(), r * c);
  for (std::size_t rr = 0; rr < r; ++rr)
    for (std::size_t cc = 0; cc < c; ++cc)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(cc, j)) != 0) m(rr * b.cols() + j, rr * c + cc) = b(cc, j);
  return m;
}

Subspace scale_coordinates(const Subspace& s, const Vec& t) {
  Matrix b = s.basis();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) *= t[j];
  return s.dim() ? Subspace::span_rows(b) : s;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// g_k spans H_k ∩ span(e_1..e_{n-k+1}), leading coefficient 1 at coordinate 1.
std::vector<Vec> canonical_generators(const Flag& h) {
  const std::size_t n = h.ambient_dim();
  std::vector<Vec> g;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i + k <= n; ++i) idx.push_back(i);
    Subspace line = subspace_intersect(h.step(k), coordinate_span(n, idx));
    if (line.dim() != 1 || line.pivots()[0] != 0)
      throw NoncriticalRequired("Hodge flag is not in general position with the eigenflags");
    g.push_back(line.basis().row(0));
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------- Filtration

Filtration::Filtration(std::size_t n, std::vector<std::pair<int, Subspace>> steps) : n_(n), steps_(std::move(steps)) {
  if (steps_.empty()) throw InvariantViolation("filtration has no steps");
  for (std::size_t t = 0; t < steps_.size(); ++t) {
    const auto& [j, s] = steps_[t];
    if (s.ambient_dim() != n) throw InvariantViolation("filtration step has wrong ambient dimension");
    if (s.dim() == 0) throw InvariantViolation("filtration lists a zero step");
    if (t == 0 && s.dim() != n) throw InvariantViolation("filtration is not exhaustive: lowest step is not the whole space");
    if (t > 0) {
      if (steps_[t - 1].first >= j) throw InvariantViolation("filtration jumps are not strictly increasing");
      if (!steps_[t - 1].second.contains(s) || steps_[t - 1].second.dim() == s.dim())
        throw InvariantViolation("filtration is not strictly decreasing");
    }
  }
}

Filtration Filtration::single_jump(std::size_t n, int jump) { return Filtration(n, {{jump, Subspace::full(n)}}); }

Subspace Filtration::at(int k) const {
  for (const auto& [j, s] : steps_)
    if (j >= k) return s;
  return Subspace::zero(n_);
}

std::vector<int> Filtration::jumps() const {
  std::vector<int> out;
  for (std::size_t t = 0; t < steps_.size(); ++t) {
    std::size_t next = t + 1 < steps_.size() ? steps_[t + 1].second.dim() : 0;
    for (std::size_t k = next; k < steps_[t].second.dim(); ++k) out.push_back(steps_[t].first);
  }
  return out;
}

std::vector<int> Filtration::jump_values() const {
  std::vector<int> out;
  for (const auto& st : steps_) out.push_back(st.first);
  return out;
}

// ---------------------------------------------------------------- module

FilteredPhiModule FilteredPhiModule::make(int n, int d_K, long p, Vec alphas, std::vector<Filtration> fil) {
  FilteredPhiModule m;
  m.n = n;
  m.d_K = d_K;
  m.p = p;
  m.alphas = std::move(alphas);
  m.fil = std::move(fil);
  for (const auto& f : m.fil) {
    std::vector<int> w;
    for (int j : f.jumps()) w.push_back(-j);
    std::sort(w.rbegin(), w.rend());
    m.weights.push_back(std::move(w));
  }
  m.validate();
  return m;
}

Matrix FilteredPhiModule::frobenius(int sigma) const {
  if (sigma < 0 || sigma >= d_K) throw std::out_of_range("embedding index out of range");
  return sigma + 1 < d_K ? Matrix::identity(static_cast<std::size_t>(n)) : Matrix::diagonal(alphas);
}

bool FilteredPhiModule::regular(int sigma) const {
  const auto& w = weights.at(static_cast<std::size_t>(sigma));
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i - 1] == w[i]) return false;
  return true;
}

Flag FilteredPhiModule::hodge_flag(int sigma) const {
  if (!regular(sigma)) throw UnsupportedError("Hodge flag needs regular weights at embedding " + std::to_string(sigma));
  const auto& w = weights[static_cast<std::size_t>(sigma)];
  std::vector<Subspace> steps;
  for (int k = 1; k <= n; ++k) steps.push_back(fil[static_cast<std::size_t>(sigma)].at(-w[static_cast<std::size_t>(n - k)]));
  return Flag(std::move(steps));
}

void FilteredPhiModule::validate() const {
  if (n < 1) throw InvariantViolation("n: rank must be positive");
  if (d_K < 1) throw InvariantViolation("d_K: degree must be positive");
  if (!is_prime(p)) throw InvariantViolation("p: " + std::to_string(p) + " is not prime");
  if (alphas.size() != static_cast<std::size_t>(n)) throw InvariantViolation("alphas: expected n entries");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (sgn(alphas[i]) == 0) throw InvariantViolation("alphas[" + std::to_string(i) + "]: must be nonzero");
    for (std::size_t j = 0; j < i; ++j)
      if (alphas[i] == alphas[j]) throw InvariantViolation("alphas: entries must be distinct");
  }
  if (fil.size() != static_cast<std::size_t>(d_K)) throw InvariantViolation("filtration: expected d_K components");
  if (weights.size() != static_cast<std::size_t>(d_K)) throw InvariantViolation("weights: expected d_K components");
  for (std::size_t s = 0; s < fil.size(); ++s) {
    if (fil[s].ambient_dim() != static_cast<std::size_t>(n))
      throw InvariantViolation("filtration[" + std::to_string(s) + "]: wrong ambient dimension");
    std::vector<int> w;
    for (int j : fil[s].jumps()) w.push_back(-j);
    std::sort(w.rbegin(), w.rend());
    if (w != weights[s])
      throw InvariantViolation("weights[" + std::to_string(s) + "]: jump multiset is not {-h}");
  }
}

Flag eigenflag(int n, const Perm& w) {
  Perm wi = w.inverse();
  std::vector<Subspace> steps;
  std::vector<std::size_t> idx;
  for (int k = 0; k < n; ++k) {
    idx.push_back(static_cast<std::size_t>(wi(k)));
    steps.push_back(coordinate_span(static_cast<std::size_t>(n), idx));
  }
  return Flag(std::move(steps));
}

long p_valuation(const Scalar& x, long p) {
  if (sgn(x) == 0) throw std::domain_error("valuation of zero");
  mpz_class num = x.get_num(), den = x.get_den(), pp = p, rest;
  long a = static_cast<long>(mpz_remove(rest.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
  long b = static_cast<long>(mpz_remove(rest.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
  return a - b;
}

bool genericity_check(const FilteredPhiModule& m) {
  mpz_class pd;
  mpz_pow_ui(pd.get_mpz_t(), mpz_class(m.p).get_mpz_t(), static_cast<unsigned long>(m.d_K));
  const Scalar up(pd), down(1, pd);
  for (std::size_t i = 0; i < m.alphas.size(); ++i)
    for (std::size_t j = 0; j < m.alphas.size(); ++j) {
      if (i == j) continue;
      Scalar r = m.alphas[i] / m.alphas[j];
      if (r == 1 || r == up || r == down) return false;
    }
  return true;
}

AdmissibilityReport weak_admissibility_report(const FilteredPhiModule& m) {
  if (!genericity_check(m)) throw UnsupportedError("weak admissibility needs a generic module");
  AdmissibilityReport rep;
  const std::size_t n = static_cast<std::size_t>(m.n);
  for (Subset s = 1; s < (1u << m.n); ++s) {
    auto idx = members(s, m.n);
    Subspace span = coordinate_span(n, idx);
    long tN = 0, tH = 0;
    for (auto i : idx) tN += p_valuation(m.alphas[i], m.p);
    for (const auto& f : m.fil) {
      // induced jumps: jump j_t with multiplicity dim(S_t ∩ span) - dim(S_{t+1} ∩ span)
      const auto& st = f.steps();
      std::vector<std::size_t> dims;
      for (const auto& x : st) dims.push_back(subspace_intersect(x.second, span).dim());
      for (std::size_t t = 0; t < st.size(); ++t) {
        std::size_t next = t + 1 < st.size() ? dims[t + 1] : 0;
        tH += static_cast<long>(dims[t] - next) * st[t].first;
      }
    }
    if (s == (1u << m.n) - 1) {
      rep.t_N = tN;
      rep.t_H = tH;
      if (tN != tH && !rep.violating_subset) {
        rep.violating_subset = s;
        rep.reason = "t_N(M)=" + std::to_string(tN) + " differs from t_H(M)=" + std::to_string(tH);
      }
    } else if (tN < tH && !rep.violating_subset) {
      rep.violating_subset = s;
      rep.reason = "subobject " + subset_to_string(s) + " has t_N=" + std::to_string(tN) + " < t_H=" + std::to_string(tH);
    }
  }
  rep.admissible = !rep.violating_subset.has_value();
  return rep;
}

bool weak_admissibility(const FilteredPhiModule& m) { return weak_admissibility_report(m).admissible; }

std::vector<int> graded_weights(const FilteredPhiModule& m, const Perm& w, int sigma) {
  Flag t = eigenflag(m.n, w);
  const auto& st = m.fil.at(static_cast<std::size_t>(sigma)).steps();
  std::vector<std::vector<std::size_t>> dims(st.size(), std::vector<std::size_t>(static_cast<std::size_t>(m.n) + 1, 0));
  for (std::size_t s = 0; s < st.size(); ++s)
    for (int k = 1; k <= m.n; ++k) dims[s][static_cast<std::size_t>(k)] = subspace_intersect(st[s].second, t.step(static_cast<std::size_t>(k))).dim();
  std::vector<int> out;
  for (int k = 1; k <= m.n; ++k) {
    int best = 0;
    bool found = false;
    for (std::size_t s = 0; s < st.size(); ++s)
      if (dims[s][static_cast<std::size_t>(k)] > dims[s][static_cast<std::size_t>(k - 1)]) {
        best = st[s].first;  // jumps ascend, so the last hit is the largest
        found = true;
      }
    if (!found) throw InvariantViolation("graded piece without a filtration jump");
    out.push_back(-best);
  }
  return out;
}

bool noncritical(const FilteredPhiModule& m, const Perm& w) {
  for (int s = 0; s < m.d_K; ++s)
    if (graded_weights(m, w, s) != m.weights[static_cast<std::size_t>(s)]) return false;
  return true;
}

bool noncritical_all(const FilteredPhiModule& m) {
  for (const auto& w : all_perms(m.n))
    if (!noncritical(m, w)) return false;
  return true;
}

SubQuotient sub_quotient(const FilteredPhiModule& m, Subset r) {
  const std::size_t n = static_cast<std::size_t>(m.n);
  if (r == 0 || (r & ~initial_segment(m.n))) throw std::invalid_argument("invalid index subset " + subset_to_string(r));
  auto idx = members(r, m.n);
  Matrix proj = coordinate_projection(n, idx);
  Subspace span = coordinate_span(n, idx);
  Vec a;
  for (auto i : idx) a.push_back(m.alphas[i]);
  std::vector<Filtration> fs, fq;
  for (const auto& f : m.fil) {
    fs.push_back(transform_filtration(f, idx.size(), [&](const Subspace& s) {
      return map_subspace(proj, subspace_intersect(s, span));
    }));
    fq.push_back(transform_filtration(f, idx.size(), [&](const Subspace& s) { return map_subspace(proj, s); }));
  }
  const int k = static_cast<int>(idx.size());
  return {FilteredPhiModule::make(k, m.d_K, m.p, a, std::move(fs)), FilteredPhiModule::make(k, m.d_K, m.p, a, std::move(fq))};
}

FilteredPhiModule top_sub(const FilteredPhiModule& d) { return sub_quotient(d, initial_segment(d.n - 1)).sub; }
FilteredPhiModule bottom_quotient(const FilteredPhiModule& d) { return sub_quotient(d, initial_segment(d.n - 1)).quotient; }
FilteredPhiModule last_quotient(const FilteredPhiModule& d) { return sub_quotient(d, 1u << (d.n - 1)).quotient; }

FilteredPhiModule torus_rescale(const FilteredPhiModule& m, const Vec& t) {
  if (t.size() != static_cast<std::size_t>(m.n)) throw DimensionError("torus element has wrong size");
  for (const auto& x : t)
    if (sgn(x) == 0) throw std::invalid_argument("torus entries must be nonzero");
  std::vector<Filtration> f;
  for (const auto& fl : m.fil)
    f.push_back(transform_filtration(fl, static_cast<std::size_t>(m.n), [&](const Subspace& s) { return scale_coordinates(s, t); }));
  return FilteredPhiModule::make(m.n, m.d_K, m.p, m.alphas, std::move(f));
}

HodgeParameter hodge_parameter_at(const FilteredPhiModule& m, int anchor) {
  const std::size_t n = static_cast<std::size_t>(m.n);
  for (int s = 0; s < m.d_K; ++s)
    if (m.regular(s)) {
      Flag h = m.hodge_flag(s);
      for (const auto& w : all_perms(m.n))
        if (!general_position(h, eigenflag(m.n, w)))
          throw NoncriticalRequired("module is critical at embedding " + std::to_string(s) + " for refinement " + w.to_string());
    }
  HodgeParameter hp;
  hp.anchor = anchor;
  hp.torus = Vec(n, Scalar(1));
  if (anchor >= 0) {
    if (!m.regular(anchor)) throw UnsupportedError("anchor embedding must have regular weights");
    auto g = canonical_generators(m.hodge_flag(anchor));
    for (std::size_t c = 1; c < n; ++c) {
      const Vec& gk = g[n - c - 1];  // g_k with n-k+1 = c+1
      if (sgn(gk[c]) == 0) throw NoncriticalRequired("Hodge flag is not in general position with the eigenflags");
      hp.torus[c] = gk[0] / gk[c];
    }
  }
  FilteredPhiModule t = torus_rescale(m, hp.torus);
  for (int s = 0; s < m.d_K; ++s) {
    if (t.regular(s)) {
      auto g = canonical_generators(t.hodge_flag(s));
      hp.rows.push_back(Matrix::from_rows(g, n));
    } else {
      std::vector<Matrix> parts;
      for (const auto& st : t.fil[static_cast<std::size_t>(s)].steps()) parts.push_back(st.second.basis());
      hp.rows.push_back(Matrix::vstack(parts));
    }
  }
  return hp;
}

HodgeParameter hodge_parameter(const FilteredPhiModule& m) {
  int anchor = -1;
  for (int s = 0; s < m.d_K && anchor < 0; ++s)
    if (m.regular(s)) anchor = s;
  return hodge_parameter_at(m, anchor);
}

Scalar extract_a3(const FilteredPhiModule& m, int sigma) {
  if (m.n != 3) throw UnsupportedError("extract_a3 needs rank 3");
  if (sigma < 0 || sigma >= m.d_K) throw std::out_of_range("embedding index out of range");
  if (!m.regular(sigma)) throw UnsupportedError("extract_a3 needs regular weights at the chosen embedding");
  auto hp = hodge_parameter_at(m, sigma);
  Scalar a = hp.rows[static_cast<std::size_t>(sigma)](0, 1);
  if (a == 0 || a == 1) throw NoncriticalRequired("Hodge parameter outside E minus {0,1}");
  return a;
}

FilteredPhiModule build_from_flags(const Vec& alphas, const std::vector<std::vector<int>>& weights,
                                   const std::vector<Matrix>& rows, long p, BuildOptions opts) {
  const int n = static_cast<int>(alphas.size());
  const int d = static_cast<int>(weights.size());
  if (d < 1 || rows.size() != weights.size()) throw std::invalid_argument("need weights and flag rows for every embedding");
  std::vector<Filtration> fil;
  for (int s = 0; s < d; ++s) {
    const auto& h = weights[static_cast<std::size_t>(s)];
    const auto& g = rows[static_cast<std::size_t>(s)];
    if (h.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("weights: expected n entries per embedding");
    for (std::size_t i = 1; i < h.size(); ++i)
      if (h[i - 1] < h[i]) throw std::invalid_argument("weights must be non-increasing");
    if (g.rows() != static_cast<std::size_t>(n) || g.cols() != static_cast<std::size_t>(n) || rank(g) != static_cast<std::size_t>(n))
      throw std::invalid_argument("flag rows must form an invertible n x n matrix");
    std::set<int> values;
    for (int x : h) values.insert(-x);
    std::vector<std::pair<int, Subspace>> steps;
    for (int j : values) {
      std::size_t m = 0;
      for (int x : h)
        if (-x >= j) ++m;
      steps.emplace_back(j, Subspace::span_rows(g.block(0, 0, m, static_cast<std::size_t>(n))));
    }
    fil.emplace_back(static_cast<std::size_t>(n), std::move(steps));
  }
  auto m = FilteredPhiModule::make(n, d, p, alphas, std::move(fil));
  if (opts.require_noncritical && !noncritical_all(m)) throw NoncriticalRequired("constructed module is critical");
  if (opts.require_admissible) {
    auto rep = weak_admissibility_report(m);
    if (!rep.admissible) throw InvariantViolation("constructed module is not weakly admissible: " + rep.reason);
  }
  return m;
}

Matrix parameter_rows(const Scalar& a) { return Matrix{{1, a, 1}, {1, 1, 0}, {1, 0, 0}}; }

FilteredPhiModule build_from_parameter(const Vec& alphas, const std::vector<std::vector<int>>& weights, const Vec& a,
                                       long p, BuildOptions opts) {
  if (alphas.size() != 3) throw UnsupportedError("the one-parameter construction is for rank 3");
  if (a.size() != weights.size()) throw std::invalid_argument("need one Hodge parameter per embedding");
  std::vector<Matrix> rows;
  for (std::size_t s = 0; s < a.size(); ++s) {
    bool regular = weights[s].size() == 3 && weights[s][0] > weights[s][1] && weights[s][1] > weights[s][2];
    if (regular && opts.require_noncritical && (a[s] == 0 || a[s] == 1))
      throw NoncriticalRequired("Hodge parameter " + to_string(a[s]) + " gives a critical module");
    rows.push_back(parameter_rows(regular ? a[s] : Scalar(2)));
  }
  return build_from_flags(alphas, weights, rows, p, opts);
}

// ---------------------------------------------------------------- Hom

Subspace fil0_hom(const Filtration& src, const Filtration& dst) {
  const std::size_t nm = src.ambient_dim(), nn = dst.ambient_dim();
  std::set<int> ks;
  for (int j : src.jump_values()) ks.insert(j);
  for (int j : dst.jump_values()) ks.insert(j);
  std::vector<Vec> cons;
  for (int k : ks) {
    Subspace s = src.at(k);
    if (s.dim() == 0) continue;
    Matrix ann = dst.at(k).annihilator();
    for (std::size_t b = 0; b < s.dim(); ++b)
      for (std::size_t a = 0; a < ann.rows(); ++a) {
        Vec c(nn * nm);
        for (std::size_t r = 0; r < nn; ++r)
          for (std::size_t q = 0; q < nm; ++q) c[r * nm + q] = ann(a, r) * s.basis()(b, q);
        cons.push_back(std::move(c));
      }
  }
  if (cons.empty()) return Subspace::full(nn * nm);
  return kernel(Matrix::from_rows(cons, nn * nm));
}

Subspace hom_filtered(const FilteredPhiModule& m, const FilteredPhiModule& nmod) {
  if (m.d_K != nmod.d_K) throw std::invalid_argument("hom_filtered: degree mismatch");
  const std::size_t rM = static_cast<std::size_t>(m.n), rN = static_cast<std::size_t>(nmod.n), B = rM * rN;
  const std::size_t d = static_cast<std::size_t>(m.d_K);
  std::vector<Matrix> rows;
  for (std::size_t j = 0; j < d; ++j) {
    // f_{j+1} phi^M_j - phi^N_j f_j = 0
    Matrix c(B, B * d);
    std::size_t jn = (j + 1) % d;
    Matrix a = right_mult(m.frobenius(static_cast<int>(j)), rN, rM);
    Matrix b = left_mult(nmod.frobenius(static_cast<int>(j)), rN, rM);
    Matrix blk_next = c.block(0, jn * B, B, B) + a;
    c.set_block(0, jn * B, blk_next);
    Matrix blk_here = c.block(0, j * B, B, B) - b;
    c.set_block(0, j * B, blk_here);
    rows.push_back(c);
    Matrix ann = fil0_hom(m.fil[j], nmod.fil[j]).annihilator();
    Matrix f(ann.rows(), B * d);
    f.set_block(0, j * B, ann);
    rows.push_back(f);
  }
  Subspace all = kernel(Matrix::vstack(rows));
  std::vector<Vec> first;
  for (const auto& v : all.basis_vectors()) first.emplace_back(v.begin(), v.begin() + static_cast<long>(B));
  return Subspace::span(B, first);
}

Matrix iota(const FilteredPhiModule& d) {
  if (d.n < 2) throw std::invalid_argument("iota needs rank at least 2");
  return Matrix::identity(static_cast<std::size_t>(d.n - 1));
}

std::vector<std::optional<Matrix>> alpha_maps(const FilteredPhiModule& d1, const FilteredPhiModule& c1) {
  if (d1.n != c1.n || d1.alphas != c1.alphas) throw std::invalid_argument("alpha_maps: D_1 and C_1 must share eigenvalues");
  const int m = d1.n;
  std::vector<std::optional<Matrix>> out;
  for (int i = 0; i < m; ++i) {
    Subset r = initial_segment(m) & ~(1u << i);
    if (r == 0) {
      out.emplace_back(std::nullopt);
      continue;
    }
    auto a = sub_quotient(d1, r).quotient;
    auto b = sub_quotient(c1, r).sub;
    if (a.weights != b.weights) {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::optional<HodgeParameter> ha, hb;
    try {
      ha = hodge_parameter(a);
      hb = hodge_parameter(b);
    } catch (const NoncriticalRequired&) {
      out.emplace_back(std::nullopt);
      continue;
    }
    if (!(*ha == *hb)) {
      out.emplace_back(std::nullopt);
      continue;
    }
    Matrix alpha(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    auto idx = members(r, m);
    for (std::size_t k = 0; k < idx.size(); ++k) alpha(idx[k], idx[k]) = ha->torus[k] / hb->torus[k];
    out.emplace_back(std::move(alpha));
  }
  return out;
}

// ---------------------------------------------------------------- Ext^1

Cocycle operator+(const Cocycle& a, const Cocycle& b) {
  Cocycle c;
  for (std::size_t s = 0; s < a.u.size(); ++s) {
    c.u.push_back(a.u[s] + b.u[s]);
    c.v.push_back(a.v[s] + b.v[s]);
  }
  return c;
}

Cocycle operator*(const Scalar& x, const Cocycle& a) {
  Cocycle c;
  for (std::size_t s = 0; s < a.u.size(); ++s) {
    c.u.push_back(x * a.u[s]);
    c.v.push_back(x * a.v[s]);
  }
  return c;
}

Cocycle pushforward(const Cocycle& c, const Matrix& g) {
  Cocycle r;
  for (std::size_t s = 0; s < c.u.size(); ++s) {
    r.u.push_back(g * c.u[s]);
    r.v.push_back(g * c.v[s]);
  }
  return r;
}

Cocycle pullback(const Cocycle& c, const Matrix& f) {
  Cocycle r;
  for (std::size_t s = 0; s < c.u.size(); ++s) {
    r.u.push_back(c.u[s] * f);
    r.v.push_back(c.v[s] * f);
  }
  return r;
}

Ext1Filtered::Ext1Filtered(FilteredPhiModule m, FilteredPhiModule n) : m_(std::move(m)), n_(std::move(n)) {
  if (m_.d_K != n_.d_K) throw std::invalid_argument("ext1_filtered: degree mismatch");
  const std::size_t rM = static_cast<std::size_t>(m_.n), rN = static_cast<std::size_t>(n_.n), B = rM * rN;
  const std::size_t d = static_cast<std::size_t>(m_.d_K);
  std::vector<Vec> gens;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t e = 0; e < B; ++e) {
      std::vector<Matrix> c(d, Matrix(rN, rM));
      c[j] = Matrix::unflatten(unit_vec(B, e), rN, rM);
      gens.push_back(flatten(coboundary(c)));
    }
  for (std::size_t j = 0; j < d; ++j)
    for (const auto& f : fil0_hom(m_.fil[j], n_.fil[j]).basis_vectors()) {
      Vec v(2 * B * d);
      for (std::size_t e = 0; e < B; ++e) v[B * d + j * B + e] = f[e];
      gens.push_back(std::move(v));
    }
  q_ = Quotient(Subspace::span(2 * B * d, gens));
}

Cocycle Ext1Filtered::coboundary(const std::vector<Matrix>& c) const {
  const std::size_t d = c.size();
  Cocycle r;
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t jn = (j + 1) % d;
    r.u.push_back(n_.frobenius(static_cast<int>(j)) * c[j] - c[jn] * m_.frobenius(static_cast<int>(j)));
    r.v.push_back(c[j]);
  }
  return r;
}

Vec Ext1Filtered::flatten(const Cocycle& c) const {
  const std::size_t d = static_cast<std::size_t>(m_.d_K);
  if (c.u.size() != d || c.v.size() != d) throw DimensionError("cocycle has wrong number of components");
  std::vector<Vec> parts;
  for (const auto& x : c.u) parts.push_back(x.flatten());
  for (const auto& x : c.v) parts.push_back(x.flatten());
  Vec v = concat(parts);
  if (v.size() != 2 * d * static_cast<std::size_t>(m_.n * n_.n)) throw DimensionError("cocycle has wrong shape");
  return v;
}

Cocycle Ext1Filtered::unflatten(const Vec& v) const {
  const std::size_t rM = static_cast<std::size_t>(m_.n), rN = static_cast<std::size_t>(n_.n), B = rM * rN;
  const std::size_t d = static_cast<std::size_t>(m_.d_K);
  Cocycle c;
  for (std::size_t j = 0; j < d; ++j)
    c.u.push_back(Matrix::unflatten(Vec(v.begin() + static_cast<long>(j * B), v.begin() + static_cast<long>((j + 1) * B)), rN, rM));
  for (std::size_t j = 0; j < d; ++j)
    c.v.push_back(Matrix::unflatten(
        Vec(v.begin() + static_cast<long>((d + j) * B), v.begin() + static_cast<long>((d + j + 1) * B)), rN, rM));
  return c;
}

Vec Ext1Filtered::class_of(const Cocycle& c) const { return q_.project(flatten(c)); }

Cocycle Ext1Filtered::representative(const Vec& coords) const { return unflatten(q_.lift(coords)); }

Cocycle Ext1Filtered::zero() const { return unflatten(Vec(q_.ambient_dim())); }

std::optional<Cocycle> Ext1Filtered::split_phi_representative(const Cocycle& c) const {
  const std::size_t rM = static_cast<std::size_t>(m_.n), rN = static_cast<std::size_t>(n_.n), B = rM * rN;
  const std::size_t d = static_cast<std::size_t>(m_.d_K);
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t e = 0; e < B; ++e) {
      std::vector<Matrix> x(d, Matrix(rN, rM));
      x[j] = Matrix::unflatten(unit_vec(B, e), rN, rM);
      Vec f = flatten(coboundary(x));
      cols.emplace_back(f.begin(), f.begin() + static_cast<long>(B * d));
    }
  Matrix a = Matrix::from_columns(cols, B * d);
  Vec u = flatten(c);
  Vec minus_u;
  for (std::size_t k = 0; k < B * d; ++k) minus_u.push_back(-u[k]);
  auto sol = solve(a, minus_u);
  if (!sol) return std::nullopt;
  std::vector<Matrix> x;
  for (std::size_t j = 0; j < d; ++j)
    x.push_back(Matrix::unflatten(Vec(sol->begin() + static_cast<long>(j * B), sol->begin() + static_cast<long>((j + 1) * B)), rN, rM));
  return c + coboundary(x);
}

Cocycle extension_class(const FilteredPhiModule& d) {
  if (d.n < 2) throw std::invalid_argument("extension_class needs rank at least 2");
  auto l = last_quotient(d);
  const std::size_t n = static_cast<std::size_t>(d.n);
  Cocycle c;
  for (int s = 0; s < d.d_K; ++s) {
    int jl = l.fil[static_cast<std::size_t>(s)].steps().back().first;
    Subspace top = d.fil[static_cast<std::size_t>(s)].at(jl);
    std::optional<Vec> x;
    for (const auto& b : top.basis_vectors())
      if (sgn(b[n - 1]) != 0) {
        x = (1 / b[n - 1]) * b;
        break;
      }
    if (!x) throw InvariantViolation("filtration step does not surject onto the last quotient");
    Matrix v(n - 1, 1);
    for (std::size_t i = 0; i + 1 < n; ++i) v(i, 0) = -(*x)[i];
    c.u.emplace_back(n - 1, 1);
    c.v.push_back(std::move(v));
  }
  return c;
}

FilteredPhiModule extension_module(const FilteredPhiModule& d1, const FilteredPhiModule& l, const Cocycle& c) {
  if (l.n != 1 || d1.d_K != l.d_K) throw std::invalid_argument("extension_module: need a rank-one quotient");
  const std::size_t n = static_cast<std::size_t>(d1.n) + 1;
  Vec alphas = d1.alphas;
  alphas.push_back(l.alphas[0]);
  std::vector<Filtration> fil;
  for (int s = 0; s < d1.d_K; ++s) {
    const auto& u = c.u.at(static_cast<std::size_t>(s));
    const auto& v = c.v.at(static_cast<std::size_t>(s));
    if (!u.is_zero()) throw std::invalid_argument("extension_module needs a representative with u = 0");
    const auto& f1 = d1.fil[static_cast<std::size_t>(s)];
    const auto& fl = l.fil[static_cast<std::size_t>(s)];
    std::set<int> ks;
    for (int j : f1.jump_values()) ks.insert(j);
    for (int j : fl.jump_values()) ks.insert(j);
    std::vector<std::pair<int, Subspace>> raw;
    for (int k : ks) {
      std::vector<Vec> gens;
      for (const auto& b : f1.at(k).basis_vectors()) {
        Vec g = b;
        g.push_back(0);
        gens.push_back(std::move(g));
      }
      if (fl.at(k).dim() == 1) {
        Vec g(n);
        for (std::size_t i = 0; i + 1 < n; ++i) g[i] = -v(i, 0);
        g[n - 1] = 1;
        gens.push_back(std::move(g));
      }
      raw.emplace_back(k, Subspace::span(n, gens));
    }
    std::vector<std::pair<int, Subspace>> kept;
    for (std::size_t t = 0; t < raw.size(); ++t)
      if (raw[t].second.dim() > 0 && (t + 1 == raw.size() || !(raw[t].second == raw[t + 1].second))) kept.push_back(raw[t]);
    fil.emplace_back(n, std::move(kept));
  }
  return FilteredPhiModule::make(static_cast<int>(n), d1.d_K, d1.p, alphas, std::move(fil));
}

Cocycle cup_pushforward(const Cocycle& c, const Matrix& iota_map) { return pushforward(c, iota_map); }

FilteredPhiModule reconstruct_from_iota(const FilteredPhiModule& d1, const FilteredPhiModule& c1,
                                        const FilteredPhiModule& l, const Matrix& iota_map) {
  Ext1Filtered e1(l, d1), e2(l, c1);
  std::vector<Vec> cols;
  for (std::size_t k = 0; k < e1.dim(); ++k)
    cols.push_back(e2.class_of(cup_pushforward(e1.representative(unit_vec(e1.dim(), k)), iota_map)));
  Subspace ker = kernel(Matrix::from_columns(cols, e2.dim()));
  if (ker.dim() != 1)
    throw UnsupportedError("kernel of the pushforward along iota has dimension " + std::to_string(ker.dim()) + ", not 1");
  auto split = e1.split_phi_representative(e1.representative(ker.basis().row(0)));
  if (!split) throw InvariantViolation("extension class has no phi-split representative");
  return extension_module(d1, l, *split);
}

FilteredPhiModule cow_functor(const FilteredPhiModule& d, int sigma, const std::optional<std::vector<int>>& target) {
  if (sigma < 0 || sigma >= d.d_K) throw std::out_of_range("embedding index out of range");
  if (target && target->size() != static_cast<std::size_t>(d.d_K)) throw std::invalid_argument("target weights need one entry per embedding");
  std::vector<Filtration> fil = d.fil;
  for (int t = 0; t < d.d_K; ++t) {
    if (t == sigma) continue;
    int h = target ? (*target)[static_cast<std::size_t>(t)] : d.weights[static_cast<std::size_t>(t)].back();
    fil[static_cast<std::size_t>(t)] = Filtration::single_jump(static_cast<std::size_t>(d.n), -h);
  }
  return FilteredPhiModule::make(d.n, d.d_K, d.p, d.alphas, std::move(fil));
}

IsoResult isomorphic(const FilteredPhiModule& a, const FilteredPhiModule& b) {
  if (a.n != b.n || a.d_K != b.d_K) return {false, "rank or degree differ"};
  if (a.alphas != b.alphas) return {false, "Frobenius eigenvalues differ"};
  if (a.weights != b.weights) return {false, "weights differ"};
  try {
    if (hodge_parameter(a) == hodge_parameter(b)) return {true, "Hodge flags agree up to the diagonal torus"};
    return {false, "Hodge flags lie in different torus orbits"};
  } catch (const NoncriticalRequired& e) {
    return {false, std::string("canonical form unavailable: ") + e.what()};
  }
}

}  // namespace phimod
