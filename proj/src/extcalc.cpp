#include "phimod/extcalc.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace phimod {

namespace {

// Selects the listed torus factors: char_dim(|factors|) x char_dim(n).
Matrix factor_selection(int n, int d, const std::vector<int>& factors) {
  const std::size_t w = static_cast<std::size_t>(1 + d);
  Matrix m(factors.size() * w, char_dim(n, d));
  for (std::size_t k = 0; k < factors.size(); ++k)
    for (std::size_t c = 0; c < w; ++c) m(k * w + c, static_cast<std::size_t>(factors[k]) * w + c) = 1;
  return m;
}

std::vector<int> range_of(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

Matrix matrix_of(std::size_t rows, std::size_t cols, const std::function<Vec(const Vec&)>& f) {
  Matrix m(rows, cols);
  for (std::size_t b = 0; b < cols; ++b) {
    Vec c = f(unit_vec(cols, b));
    for (std::size_t a = 0; a < rows; ++a) m(a, b) = c[a];
  }
  return m;
}

std::vector<std::string> character_labels(int n, int d) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back("sm" + std::to_string(i + 1));
    for (int s = 0; s < d; ++s) out.push_back("an" + std::to_string(i + 1) + "." + std::to_string(s));
  }
  return out;
}

// A node of the recursive Galois construction.
struct GalNode {
  int n = 0, d = 0;
  std::size_t target = 0;
  std::vector<std::string> labels;
  std::vector<Matrix> mu;  // all_perms(n) order
  Subspace relations;      // inside V, empty for rank one
  std::size_t v_dim = 0;
};

GalNode rank1_node(int d) {
  GalNode g;
  g.n = 1;
  g.d = d;
  g.target = char_dim(1, d);
  g.labels = character_labels(1, d);
  g.mu = {Matrix::identity(g.target)};
  g.v_dim = g.target;
  g.relations = Subspace::zero(g.target);
  return g;
}

// Rank n node from the rank n-1 nodes of D_1 and C_1 and the pairing maps
// iminus: X -> target(D_1), iplus: X -> target(C_1).
GalNode assemble_node(int n, int d, const GalNode& sd, const GalNode& sc, const Matrix& iminus, const Matrix& iplus) {
  const std::size_t q = static_cast<std::size_t>(1 + d);
  const std::size_t off_q = sd.target, off_c = off_q + q, off_s = off_c + sc.target, vdim = off_s + q;
  std::vector<Vec> rows;
  for (std::size_t m = 0; m < iminus.cols(); ++m) {
    Vec r(vdim);
    for (std::size_t k = 0; k < sd.target; ++k) r[k] = iminus(k, m);
    for (std::size_t k = 0; k < sc.target; ++k) r[off_c + k] = -iplus(k, m);
    rows.push_back(std::move(r));
  }
  // psi o det on both sides, with the rank-one quotients moving by +-psi
  for (std::size_t b = 0; b < q; ++b) {
    Vec psi = unit_vec(q, b);
    Vec diag = diagonal_character(n - 1, psi);
    Vec dd = sd.mu[0].apply(diag), dc = sc.mu[0].apply(diag);
    Vec r(vdim);
    for (std::size_t k = 0; k < sd.target; ++k) r[k] = dd[k];
    for (std::size_t k = 0; k < q; ++k) r[off_q + k] = psi[k];
    for (std::size_t k = 0; k < sc.target; ++k) r[off_c + k] = -dc[k];
    for (std::size_t k = 0; k < q; ++k) r[off_s + k] = -psi[k];
    rows.push_back(std::move(r));
  }
  GalNode g;
  g.n = n;
  g.d = d;
  g.v_dim = vdim;
  g.relations = Subspace::span(vdim, rows);
  Quotient quot(g.relations);
  g.target = quot.dim();
  std::vector<std::string> vlabels;
  for (const auto& l : sd.labels) vlabels.push_back("D1." + l);
  for (const auto& l : character_labels(1, d)) vlabels.push_back("q." + l);
  for (const auto& l : sc.labels) vlabels.push_back("C1." + l);
  for (const auto& l : character_labels(1, d)) vlabels.push_back("s." + l);
  for (auto f : quot.free_coords()) g.labels.push_back(vlabels[f]);

  const Matrix qm = quot.matrix();
  const std::size_t N = char_dim(n, d);
  const auto perms = all_perms(n);
  const auto sub_perms = all_perms(n - 1);
  std::map<Perm, std::size_t> sub_index;
  for (std::size_t k = 0; k < sub_perms.size(); ++k) sub_index[sub_perms[k]] = k;
  const Matrix sel_first = factor_selection(n, d, range_of(0, n - 1));
  const Matrix sel_rest = factor_selection(n, d, range_of(1, n));
  const Matrix sel_lastf = factor_selection(n, d, {n - 1});
  const Matrix sel_firstf = factor_selection(n, d, {0});

  std::map<Perm, Matrix> routed;
  auto route = [&](const Perm& w) -> Matrix {
    const int last = w(n - 1);
    Matrix v(vdim, N);
    if (last == n - 1) {
      std::vector<int> img;
      for (int k = 0; k + 1 < n; ++k) img.push_back(w(k));
      v.set_block(0, 0, sd.mu[sub_index.at(Perm(img))] * sel_first);
      v.set_block(off_q, 0, sel_lastf);
    } else if (last == 0) {
      std::vector<int> img;
      for (int k = 0; k + 1 < n; ++k) img.push_back(w(k) - 1);
      v.set_block(off_c, 0, sc.mu[sub_index.at(Perm(img))] * sel_rest);
      v.set_block(off_s, 0, sel_firstf);
    } else {
      throw std::logic_error("route called on a middle permutation");
    }
    return qm * v;
  };
  for (const auto& w : perms)
    if (w(n - 1) == n - 1 || w(n - 1) == 0) routed.emplace(w, route(w));

  for (const auto& w : perms) {
    auto it = routed.find(w);
    if (it != routed.end()) {
      g.mu.push_back(it->second);
      continue;
    }
    // Split psi into block-constant pieces psi^(j) = (psi_j - psi_{j+1}) 1_{[1..j]}
    // and psi^(0) = psi_n 1, then move each to a route fixing its parabolic.
    const int i = w(n - 1);
    Matrix total(g.target, N);
    for (int j = 0; j < n; ++j) {
      Matrix piece(N, N);
      const std::size_t wq = static_cast<std::size_t>(1 + d);
      for (int k = 0; k < n; ++k)
        for (std::size_t c = 0; c < wq; ++c) {
          const std::size_t row = static_cast<std::size_t>(k) * wq + c;
          if (j == 0) {
            piece(row, static_cast<std::size_t>(n - 1) * wq + c) = 1;
          } else if (k < j) {
            piece(row, static_cast<std::size_t>(j - 1) * wq + c) += 1;
            piece(row, static_cast<std::size_t>(j) * wq + c) -= 1;
          }
        }
      const int jj = j == 0 ? 1 : j;
      const int tgt = i < jj ? 0 : n - 1;
      Perm wj = transposition(n, i, tgt) * w;
      total = total + routed.at(wj) * piece;
    }
    g.mu.push_back(total);
  }
  return g;
}

GalNode rank2_node(int d) {
  GalNode r1 = rank1_node(d);
  Matrix link(r1.target, static_cast<std::size_t>(d));
  link(0, 0) = 1;
  return assemble_node(2, d, r1, r1, link, link);
}

const GalNode& rank2_node_cached(int d) {
  static std::mutex mtx;
  static std::map<int, GalNode> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, rank2_node(d)).first;
  return it->second;
}

GalNode rank3_node(const SurrogatePairing& s) {
  const GalNode& r2 = rank2_node_cached(1);
  return assemble_node(3, 1, r2, r2, s.iminus, s.iplus);
}

PresentedModel to_model(const GalNode& g, const std::string& kind) {
  PresentedModel m;
  m.kind = kind;
  m.n = g.n;
  m.d_K = g.d;
  m.target_dim = g.target;
  m.labels = g.labels;
  m.perms = all_perms(g.n);
  m.mu = g.mu;
  return m;
}

void require_supported_module(const FilteredPhiModule& d) {
  d.validate();
  if (!genericity_check(d)) throw UnsupportedError("module is not generic");
  for (int s = 0; s < d.d_K; ++s)
    if (!d.regular(s)) throw UnsupportedError("weights at embedding " + std::to_string(s) + " are not regular");
  if (!noncritical_all(d)) throw NoncriticalRequired("module is critical");
}

}  // namespace

// ---------------------------------------------------------------- models

std::size_t PresentedModel::index_of(const Perm& w) const {
  auto it = std::find(perms.begin(), perms.end(), w);
  if (it == perms.end()) throw std::invalid_argument("permutation not in the model: " + w.to_string());
  return static_cast<std::size_t>(it - perms.begin());
}

Matrix PresentedModel::assembled() const {
  if (bookkeeping_only) throw UnsupportedError("bookkeeping-only model has no maps");
  return Matrix::hstack(mu);
}

Subspace PresentedModel::span() const { return image(assembled()); }

Subspace PresentedModel::relations() const { return kernel(assembled()); }

PresentedModel build_aut_model(int n, int d_K) {
  if (n < 1 || d_K < 1) throw std::invalid_argument("build_aut_model needs n >= 1 and d_K >= 1");
  PresentedModel m;
  m.kind = "aut";
  m.n = n;
  m.d_K = d_K;
  m.perms = all_perms(n);
  const auto cons = constituents_pi1(n, d_K);
  for (int k = 0; k < n; ++k) m.labels.push_back("gp.sm" + std::to_string(k + 1));
  for (int s = 0; s < d_K; ++s) m.labels.push_back("gp.an." + std::to_string(s));
  for (const auto& c : cons) m.labels.push_back(c.to_string());
  m.target_dim = m.labels.size();
  const std::size_t N = char_dim(n, d_K);
  for (const auto& w : m.perms) {
    const Perm wi = w.inverse();
    m.mu.push_back(matrix_of(m.target_dim, N, [&](const Vec& psi) {
      Vec out(m.target_dim);
      Vec q = weyl_act(wi, d_K, gprime_projection(n, d_K, psi));
      for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = q[sm_index(d_K, k)];
      for (int s = 0; s < d_K; ++s) out[static_cast<std::size_t>(n + s)] = q[an_index(d_K, 0, s)];
      for (std::size_t c = 0; c < cons.size(); ++c) {
        const auto& con = cons[c];
        if (con.I != wi.image_of(initial_segment(con.i))) continue;
        out[static_cast<std::size_t>(n + d_K) + c] =
            psi[an_index(d_K, con.i - 1, con.sigma)] - psi[an_index(d_K, con.i, con.sigma)];
      }
      return out;
    }));
  }
  return m;
}

Vec zeta_w(const PresentedModel& aut, const Perm& w, const Vec& psi) { return aut.apply(w, psi); }

PresentedModel build_linear_gal_model(const FilteredPhiModule& d) {
  require_supported_module(d);
  const int n = d.n, dk = d.d_K;
  const std::size_t nn = static_cast<std::size_t>(n);
  PresentedModel m;
  m.kind = "gal-linear";
  m.n = n;
  m.d_K = dk;
  m.perms = all_perms(n);
  for (int k = 0; k < n; ++k) m.labels.push_back("sm" + std::to_string(k + 1));
  std::vector<Flag> flags;
  std::vector<Subspace> borels;
  for (int s = 0; s < dk; ++s) {
    Flag h = d.hodge_flag(s);
    std::vector<Vec> cons;
    for (std::size_t k = 1; k < nn; ++k) {
      Matrix ann = h.step(k).annihilator();
      for (const auto& v : h.step(k).basis_vectors())
        for (std::size_t a = 0; a < ann.rows(); ++a) {
          Vec c(nn * nn);
          for (std::size_t r = 0; r < nn; ++r)
            for (std::size_t q = 0; q < nn; ++q) c[r * nn + q] = ann(a, r) * v[q];
          cons.push_back(std::move(c));
        }
    }
    Subspace b = cons.empty() ? Subspace::full(nn * nn) : kernel(Matrix::from_rows(cons, nn * nn));
    for (auto p : b.pivots()) m.labels.push_back("b" + std::to_string(s) + "[" + std::to_string(p / nn + 1) + "," + std::to_string(p % nn + 1) + "]");
    flags.push_back(std::move(h));
    borels.push_back(std::move(b));
  }
  m.target_dim = m.labels.size();
  const std::size_t N = char_dim(n, dk);
  for (const auto& w : m.perms) {
    const Perm wi = w.inverse();
    Matrix mu(m.target_dim, N);
    for (int j = 0; j < n; ++j) mu(static_cast<std::size_t>(wi(j)), sm_index(dk, j)) = 1;
    std::size_t off = nn;
    for (int s = 0; s < dk; ++s) {
      std::vector<Vec> lines;
      std::vector<std::size_t> idx;
      for (int k = 1; k <= n; ++k) {
        idx.push_back(static_cast<std::size_t>(wi(k - 1)));
        std::vector<Vec> es;
        for (auto x : idx) es.push_back(unit_vec(nn, x));
        Subspace l = subspace_intersect(Subspace::span(nn, es), flags[static_cast<std::size_t>(s)].step(nn - static_cast<std::size_t>(k) + 1));
        if (l.dim() != 1) throw NoncriticalRequired("Hodge flag meets an eigenflag non-transversally");
        lines.push_back(l.basis().row(0));
      }
      Matrix lm = Matrix::from_columns(lines, nn);
      Matrix li = *inverse(lm);
      for (int k = 0; k < n; ++k) {
        Matrix pi(nn, nn);
        for (std::size_t r = 0; r < nn; ++r)
          for (std::size_t c = 0; c < nn; ++c) pi(r, c) = lm(r, static_cast<std::size_t>(k)) * li(static_cast<std::size_t>(k), c);
        Vec coords = borels[static_cast<std::size_t>(s)].coordinates(pi.flatten());
        for (std::size_t t = 0; t < coords.size(); ++t) mu(off + t, an_index(dk, k, s)) = coords[t];
      }
      off += borels[static_cast<std::size_t>(s)].dim();
    }
    m.mu.push_back(std::move(mu));
  }
  return m;
}

// ---------------------------------------------------------------- pairing

const PairingMatrices& frozen_pairing() {
  static const PairingMatrices a{
      Matrix{{0, 0, 0, -1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}},
      Matrix{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}},
      Matrix{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, -1}},
      Matrix{{0, 0, 0, -1}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 1}},
  };
  return a;
}

std::pair<Scalar, Scalar> iota_coordinates(const FilteredPhiModule& d1, const FilteredPhiModule& c1, const Matrix& iota_map) {
  if (d1.n != 2 || c1.n != 2) throw UnsupportedError("iota coordinates are defined for rank-two D_1 and C_1");
  if (iota_map.rows() != 2 || iota_map.cols() != 2) throw DimensionError("iota must be 2 x 2");
  const auto td = hodge_parameter(d1).torus, tc = hodge_parameter(c1).torus;
  Matrix canon = Matrix::diagonal(tc) * iota_map * *inverse(Matrix::diagonal(td));
  if (sgn(canon(0, 1)) != 0 || sgn(canon(1, 0)) != 0) throw InvariantViolation("iota is not diagonal in the eigenbasis");
  return {canon(1, 1), canon(0, 0)};
}

SurrogatePairing surrogate_pairing(const Scalar& x1, const Scalar& x2, const PairingMatrices& a) {
  if (sgn(x1) == 0 || sgn(x2) == 0) throw InvariantViolation("nondegenerate-iota: x1 * x2 must be nonzero");
  SurrogatePairing s;
  s.x1 = x1;
  s.x2 = x2;
  s.iminus = x1 * a.a1_minus + x2 * a.a2_minus;
  s.iplus = x1 * a.a1_plus + x2 * a.a2_plus;
  s.image_minus = image(s.iminus);
  s.image_plus = image(s.iplus);
  s.kernel_minus = kernel(s.iminus);
  s.kernel_plus = kernel(s.iplus);
  return s;
}

SurrogatePairing surrogate_pairing(const FilteredPhiModule& d1, const FilteredPhiModule& c1, const Matrix& iota_map,
                                   const PairingMatrices& a) {
  if (d1.d_K != 1) throw UnsupportedError("the pairing model is for K = Q_p");
  auto [x1, x2] = iota_coordinates(d1, c1, iota_map);
  return surrogate_pairing(x1, x2, a);
}

RelationSpace relation_space(const SurrogatePairing& s) {
  GalNode g = rank3_node(s);
  return {g.v_dim, g.relations, g.target};
}

Subspace de_rham_subspace_rank2() {
  const GalNode& r2 = rank2_node_cached(1);
  return Subspace::span(r2.target, {r2.mu[0].apply(unit_vec(4, sm_index(1, 0))), r2.mu[0].apply(unit_vec(4, sm_index(1, 1)))});
}

Vec diagonal_twist_rank2(const Vec& psi_factor) {
  if (psi_factor.size() != 2) throw DimensionError("twist character needs 1 + d_K = 2 entries");
  return rank2_node_cached(1).mu[0].apply(diagonal_character(2, psi_factor));
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const SurrogateCheck& c) { return c.pass; });
}

std::optional<std::string> ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return c.name;
  return std::nullopt;
}

std::vector<std::pair<Scalar, Scalar>> surrogate_grid(std::size_t points) {
  // Normalized representatives (p : q), q > 0, gcd(|p|, q) = 1, p != 0, by height.
  std::vector<std::pair<Scalar, Scalar>> out;
  for (long h = 1; out.size() < points; ++h)
    for (long p = -h; p <= h && out.size() < points; ++p)
      for (long q = 1; q <= h && out.size() < points; ++q) {
        if (p == 0 || std::max(std::labs(p), q) != h || std::gcd(std::labs(p), q) != 1) continue;
        out.emplace_back(Scalar(p), Scalar(q));
      }
  return out;
}

ValidationReport validate_surrogate(const PairingMatrices& a, std::size_t grid_points) {
  const int n = 3, d = 1;
  auto D = [&](ExtKind k) { return static_cast<std::size_t>(ext_dim(k, n, d)); };
  ValidationReport rep;
  const auto grid = surrogate_grid(grid_points);
  rep.grid_points = grid.size();
  const Subspace g = de_rham_subspace_rank2();

  struct Tally {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
      if (pass) detail = why;
      pass = false;
    }
  };
  Tally ker_dim, img_dim, in_image, smooth_agree, rel_dim, separation, scale;
  std::vector<SurrogatePairing> built;
  for (const auto& [x1, x2] : grid) {
    const std::string at = "(" + to_string(x1) + " : " + to_string(x2) + ")";
    SurrogatePairing s = surrogate_pairing(x1, x2, a);
    if (s.kernel_minus.dim() != 1 || s.kernel_plus.dim() != 1)
      ker_dim.fail(at + ": kernel dims " + std::to_string(s.kernel_minus.dim()) + ", " + std::to_string(s.kernel_plus.dim()));
    if (s.image_minus.dim() != D(ExtKind::gal_iota) || s.image_plus.dim() != D(ExtKind::gal_iota))
      img_dim.fail(at + ": image dims " + std::to_string(s.image_minus.dim()) + ", " + std::to_string(s.image_plus.dim()));
    if (!s.image_minus.contains(g) || !s.image_plus.contains(g)) in_image.fail(at + ": de Rham directions not in the image");
    // de Rham extensions of C_1 by D_1: the preimage of the de Rham directions.
    Subspace pre_m = preimage(s.iminus, g), pre_p = preimage(s.iplus, g);
    const std::size_t g_ext = static_cast<std::size_t>(n * (n - 1) / 2 * d);
    if (pre_m.dim() != g_ext || !(pre_m == pre_p)) {
      smooth_agree.fail(at + ": de Rham preimages of dims " + std::to_string(pre_m.dim()) + ", " + std::to_string(pre_p.dim()));
    } else {
      for (const auto& v : pre_m.basis_vectors())
        if (s.iminus.apply(v) != s.iplus.apply(v)) {
          smooth_agree.fail(at + ": smooth parts of the two pushforwards differ");
          break;
        }
    }
    RelationSpace rs = relation_space(s);
    const auto v_expected = static_cast<std::size_t>(2 * (ext_dim(ExtKind::gal_bar, n - 1, d) + 1 + d));
    if (rs.v_dim != v_expected || rs.relations.dim() != D(ExtKind::gal_FG_cap) - D(ExtKind::gal_zero) || rs.target_dim != D(ExtKind::gal_bar))
      rel_dim.fail(at + ": relation dim " + std::to_string(rs.relations.dim()) + ", target " + std::to_string(rs.target_dim));
    SurrogatePairing scaled = surrogate_pairing(Scalar(3) * x1, Scalar(3) * x2, a);
    if (!(scaled.image_minus == s.image_minus) || !(scaled.image_plus == s.image_plus))
      scale.fail(at + ": images change under rescaling of iota");
    built.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < built.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (built[i].image_minus == built[j].image_minus || built[i].image_plus == built[j].image_plus) {
        separation.fail("(" + to_string(built[i].x1) + " : " + to_string(built[i].x2) + ") and (" + to_string(built[j].x1) +
                        " : " + to_string(built[j].x2) + ") share an image");
        i = built.size() - 1;
        break;
      }

  auto add = [&](const std::string& name, const Tally& t, const std::string& ok) {
    rep.checks.push_back({name, t.pass, t.pass ? ok : t.detail});
  };
  add("iota-kernel-dim", ker_dim, "kernels of both pushforwards are lines");
  add("iota-image-dim", img_dim, "images have dimension " + std::to_string(D(ExtKind::gal_iota)));
  add("de-rham-in-image", in_image, "de Rham directions lie in both images");
  add("de-rham-smooth-agreement", smooth_agree, "de Rham extensions have equal smooth parts on both sides");
  add("iota-separation", separation, "images separate non-proportional iota");
  add("iota-scale-invariance", scale, "images depend only on the line of iota");
  add("relation-dim", rel_dim, "relation space has dimension " + std::to_string(D(ExtKind::gal_FG_cap) - D(ExtKind::gal_zero)));

  // Intersection count for the two corank-one filtrations, then the sum.
  {
    const long long lhs = (1 + d) + ext_dim(ExtKind::gal_iota, n, d) + (-1 + (n - 1) * d);
    const long long cap = ext_dim(ExtKind::gal_FG_cap, n, d);
    const long long sum = 2 * ext_dim(ExtKind::gal_F, n, d) - cap;
    const bool pass = lhs == cap && sum == ext_dim(ExtKind::gal_full, n, d);
    rep.checks.push_back({"filtration-intersection-count", pass,
                          "cap " + std::to_string(lhs) + " vs " + std::to_string(cap) + ", sum " + std::to_string(sum) + " vs " +
                              std::to_string(ext_dim(ExtKind::gal_full, n, d))});
  }
  // Boundary regime iota = alpha_i.
  {
    Tally img, cap, sum;
    const std::pair<const Matrix*, const Matrix*> sides[] = {{&a.a1_minus, &a.a2_minus}, {&a.a1_plus, &a.a2_plus}};
    for (const auto& [m1, m2] : sides) {
      Subspace i1 = image(*m1), i2 = image(*m2);
      if (i1.dim() != D(ExtKind::gal_alpha) || i2.dim() != D(ExtKind::gal_alpha))
        img.fail("alpha images of dims " + std::to_string(i1.dim()) + ", " + std::to_string(i2.dim()));
      if (subspace_intersect(i1, i2).dim() != D(ExtKind::gal_alpha_cap))
        cap.fail("alpha intersection of dim " + std::to_string(subspace_intersect(i1, i2).dim()));
      if (subspace_sum(i1, i2).dim() != D(ExtKind::gal_alpha_sum)) sum.fail("alpha sum of dim " + std::to_string(subspace_sum(i1, i2).dim()));
    }
    add("alpha-image-dim", img, "each alpha image has dimension " + std::to_string(D(ExtKind::gal_alpha)));
    add("alpha-intersection-dim", cap, "alpha images meet in dimension " + std::to_string(D(ExtKind::gal_alpha_cap)));
    add("alpha-sum-dim", sum, "alpha images span dimension " + std::to_string(D(ExtKind::gal_alpha_sum)));
  }
  return rep;
}

PresentedModel build_gal_model(const FilteredPhiModule& d, const PairingMatrices& a) {
  require_supported_module(d);
  const int n = d.n, dk = d.d_K;
  if (n == 1) return to_model(rank1_node(dk), "gal");
  if (n == 2) return to_model(rank2_node_cached(dk), "gal");
  if (n == 3 && dk == 1) {
    SurrogatePairing s = surrogate_pairing(top_sub(d), bottom_quotient(d), iota(d), a);
    return to_model(rank3_node(s), "gal");
  }
  PresentedModel m;
  m.kind = "gal";
  m.n = n;
  m.d_K = dk;
  m.target_dim = static_cast<std::size_t>(ext_dim(ExtKind::gal_bar, n, dk));
  m.perms = all_perms(n);
  m.bookkeeping_only = true;
  m.note = "bookkeeping-only: relations are constructed for n <= 2, or n = 3 with d_K = 1";
  return m;
}

// ---------------------------------------------------------------- t_D

TDModel t_D(const PresentedModel& aut, const PresentedModel& gal) {
  if (gal.bookkeeping_only || aut.bookkeeping_only) throw UnsupportedError(gal.note.empty() ? "bookkeeping-only model" : gal.note);
  if (aut.n != gal.n || aut.d_K != gal.d_K) throw std::invalid_argument("t_D: models of different sizes");
  const Matrix A = aut.assembled(), G = gal.assembled();
  Echelon ea = rref(A);  // pivots pick independent columns of A
  if (ea.pivots.size() != aut.target_dim) throw InvariantViolation("automorphic maps do not span the target");
  if (rank(G) != gal.target_dim) throw InvariantViolation("Galois maps do not span the target");
  Matrix B = A.select_columns(ea.pivots);
  auto Binv = inverse(B);
  if (!Binv) throw InvariantViolation("pivot block is singular");
  TDModel td;
  td.tD = G.select_columns(ea.pivots) * *Binv;
  if (!(td.tD * A == G)) throw InvariantViolation("t_D constraint system is inconsistent");
  td.ker = kernel(td.tD);
  td.relations_checked = A.cols();
  td.aut = aut;
  td.gal = gal;
  return td;
}

TDModel t_D(const FilteredPhiModule& d, GalBackend backend, const PairingMatrices& a) {
  PresentedModel gal = backend == GalBackend::linear ? build_linear_gal_model(d) : build_gal_model(d, a);
  return t_D(build_aut_model(d.n, d.d_K), gal);
}

std::vector<std::size_t> kernel_meets_images(const TDModel& td) {
  std::vector<std::size_t> out;
  for (const auto& m : td.aut.mu) out.push_back(subspace_intersect(td.ker, image(m)).dim());
  return out;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string kernel_canonical_text(const TDModel& td) { return td.ker.canonical_text(); }

IntertwiningTally check_intertwining(const PresentedModel& m) {
  IntertwiningTally t;
  if (m.bookkeeping_only) throw UnsupportedError("bookkeeping-only model has no maps");
  for (const auto& shape : compositions(m.n)) {
    Matrix basis = subspace_Pgprime(shape, m.d_K).basis().transpose();  // columns
    for (const auto& u : shape.weyl_group()) {
      Matrix moved = weyl_matrix(u, m.d_K) * basis;
      for (const auto& w1 : m.perms) {
        const Perm w2 = u * w1;
        t.checked += basis.cols();
        if (!(m.mu_of(w1) * basis == m.mu_of(w2) * moved)) {
          ++t.failed;
          if (t.first_failure.empty())
            t.first_failure = "shape " + shape.to_string() + ", w1 = " + w1.to_string() + ", w2 = " + w2.to_string();
        }
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------- recovery

RecoveryReport hodge_recovery(const Vec& alphas, const std::vector<int>& h, const Vec& samples, long p, bool parallel,
                              const PairingMatrices& a) {
  RecoveryReport rep;
  Vec distinct;
  for (const auto& x : samples) {
    if (std::find(distinct.begin(), distinct.end(), x) != distinct.end()) {
      rep.warnings.push_back("duplicate sample " + to_string(x) + " ignored");
      continue;
    }
    distinct.push_back(x);
  }
  rep.entries.resize(distinct.size());
  std::vector<std::string> errors(distinct.size());
  auto work = [&](std::size_t k) {
    try {
      auto d = build_from_parameter(alphas, {h}, {distinct[k]}, p);
      TDModel td = t_D(d, GalBackend::recursive, a);
      auto& e = rep.entries[k];
      e.a = distinct[k];
      e.ker_dim = td.ker.dim();
      e.canonical = kernel_canonical_text(td);
      e.hash = fnv1a64(e.canonical);
    } catch (const std::exception& ex) {
      errors[k] = ex.what();
    }
  };
  if (parallel && distinct.size() > 1) {
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(distinct.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < hw; ++t)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < distinct.size();) work(k);
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t k = 0; k < distinct.size(); ++k) work(k);
  }
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty()) throw std::invalid_argument("sample " + to_string(distinct[k]) + ": " + errors[k]);

  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    std::vector<Scalar> same;
    for (std::size_t j = 0; j < rep.entries.size(); ++j)
      if (rep.entries[j].canonical == rep.entries[i].canonical) {
        same.push_back(rep.entries[j].a);
        if (j < i) rep.collisions.emplace_back(rep.entries[j].a, rep.entries[i].a);
      }
    rep.round_trip.push_back(std::move(same));
  }
  rep.injective = rep.collisions.empty();
  return rep;
}

IntertwiningResult higher_intertwining_check(const SurrogatePairing& s, const Vec& d1_class, const Vec& psi_factor) {
  if (d1_class.size() != s.iminus.rows()) throw DimensionError("class has wrong number of coordinates");
  IntertwiningResult r;
  r.twisted = d1_class - diagonal_twist_rank2(psi_factor);
  r.m = solve(s.iminus, r.twisted);
  r.holds = r.m.has_value();
  return r;
}

}  // namespace phimod
