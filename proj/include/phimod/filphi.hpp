#pragma once
// Filtered phi-modules over an unramified K of degree d_K with rational
// coefficients, presented in a fixed eigenbasis.
//
// Component sigma has basis e_{1,sigma}, ..., e_{n,sigma} with
// e_{i,sigma} = phi^sigma(e_{i,0}); phi maps component sigma to sigma+1 by the
// identity matrix for sigma < d_K-1 and by diag(alphas) from d_K-1 back to 0,
// so phi^{d_K} acts on every component as diag(alphas).
//
// Sign convention: a weight h contributes a jump
// at -h, so Fil^j is everything for j <= -h_1 and the Hodge line is Fil^{-h_n}.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phimod/combinat.hpp"
#include "phimod/exactlin.hpp"

namespace phimod {

struct InvariantViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NoncriticalRequired : std::domain_error {
  using std::domain_error::domain_error;
};

// Decreasing, exhaustive, separated filtration on E^n.
// steps are sorted by strictly increasing jump; Fil^k = steps[t].second for the
// first t with steps[t].first >= k, the full space below steps[0], and 0 above
// the last jump. steps[0] is the full space and subspaces strictly decrease.
class Filtration {
 public:
  Filtration() = default;
  Filtration(std::size_t n, std::vector<std::pair<int, Subspace>> steps);
  static Filtration single_jump(std::size_t n, int jump);

  std::size_t ambient_dim() const { return n_; }
  const std::vector<std::pair<int, Subspace>>& steps() const { return steps_; }
  Subspace at(int k) const;
  // Jump multiset, ascending; jump j_t occurs dim(S_t) - dim(S_{t+1}) times.
  std::vector<int> jumps() const;
  std::vector<int> jump_values() const;
  bool operator==(const Filtration& o) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<int, Subspace>> steps_;
};

// Push a filtration through a coordinate change of the underlying space:
// each step is replaced by f(step) and steps that stop changing are merged.
template <class F>
Filtration transform_filtration(const Filtration& fil, std::size_t new_n, F&& f) {
  std::vector<std::pair<int, Subspace>> raw;
  for (const auto& [j, s] : fil.steps()) raw.emplace_back(j, f(s));
  std::vector<std::pair<int, Subspace>> kept;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    const bool last = t + 1 == raw.size();
    if (raw[t].second.dim() == 0) continue;
    if (last || !(raw[t].second == raw[t + 1].second)) kept.push_back(raw[t]);
  }
  return Filtration(new_n, std::move(kept));
}

struct FilteredPhiModule {
  int n = 0;
  int d_K = 1;
  long p = 5;
  Vec alphas;                              // eigenvalues of phi^{d_K}
  std::vector<std::vector<int>> weights;   // [sigma][i], non-increasing in i
  std::vector<Filtration> fil;             // [sigma]

  // Builds a module, deriving weights from the filtration jumps.
  static FilteredPhiModule make(int n, int d_K, long p, Vec alphas, std::vector<Filtration> fil);

  Matrix frobenius(int sigma) const;  // component sigma -> sigma+1 (mod d_K)
  bool regular(int sigma) const;      // distinct weights at sigma
  Flag hodge_flag(int sigma) const;   // needs regular(sigma)
  // Throws InvariantViolation naming the offending field.
  void validate() const;
};

Flag eigenflag(int n, const Perm& w);  // step k = span(e_{w^{-1}(1)}, ..., e_{w^{-1}(k)})

long p_valuation(const Scalar& x, long p);
bool genericity_check(const FilteredPhiModule& m);

struct AdmissibilityReport {
  bool admissible = false;
  long t_N = 0, t_H = 0;  // for the whole module
  std::optional<Subset> violating_subset;
  std::string reason;
};
// Newton number of an eigen-subset S: sum of v_p(alpha_i); Hodge number: sum
// over sigma of the jumps induced on S. Needs a generic module.
AdmissibilityReport weak_admissibility_report(const FilteredPhiModule& m);
bool weak_admissibility(const FilteredPhiModule& m);

// Weights of the graded pieces of the refinement flag, in order.
std::vector<int> graded_weights(const FilteredPhiModule& m, const Perm& w, int sigma);
bool noncritical(const FilteredPhiModule& m, const Perm& w);
bool noncritical_all(const FilteredPhiModule& m);

struct SubQuotient {
  FilteredPhiModule sub;       // span of e_r with the induced filtration
  FilteredPhiModule quotient;  // M / span of e_{complement of r}
};
SubQuotient sub_quotient(const FilteredPhiModule& m, Subset r);
FilteredPhiModule top_sub(const FilteredPhiModule& d);      // D_1 = D_{1..n-1}
FilteredPhiModule bottom_quotient(const FilteredPhiModule& d);  // C_1 = D^{1..n-1}
FilteredPhiModule last_quotient(const FilteredPhiModule& d);    // rank one, alpha_n, weights h_n

struct HodgeParameter {
  int anchor = -1;           // embedding whose flag fixes the torus, -1 if none
  Vec torus;                 // diagonal rescaling applied to the eigenbasis
  std::vector<Matrix> rows;  // per sigma, see hodge_parameter
  bool operator==(const HodgeParameter& o) const { return rows == o.rows; }
};
// Torus-orbit canonical form. For a regular embedding the rows g_1..g_n satisfy
// H_k = span(g_1..g_k) with g_k spanning H_k ∩ span(e_1..e_{n-k+1}) and first
// coordinate 1; at the anchor also the last nonzero coordinate of every g_k is 1
// (n = 3 gives g_1 = e1+a e2+e3, g_2 = e1+e2). For a non-regular embedding the
// rows are the stacked echelon bases of its filtration steps.
HodgeParameter hodge_parameter(const FilteredPhiModule& m);
HodgeParameter hodge_parameter_at(const FilteredPhiModule& m, int anchor);
Scalar extract_a3(const FilteredPhiModule& m, int sigma);
FilteredPhiModule torus_rescale(const FilteredPhiModule& m, const Vec& t);

struct BuildOptions {
  bool require_noncritical = true;
  bool require_admissible = false;
};
// Filtration from flag rows: H_k = span of the first k rows; weights per sigma.
// A constant weight vector gives the single-jump filtration.
FilteredPhiModule build_from_flags(const Vec& alphas, const std::vector<std::vector<int>>& weights,
                                   const std::vector<Matrix>& rows, long p, BuildOptions opts = {});
Matrix parameter_rows(const Scalar& a);
// n = 3 shortcut: one Hodge parameter a per embedding (ignored where the
// weights are constant).
FilteredPhiModule build_from_parameter(const Vec& alphas, const std::vector<std::vector<int>>& weights,
                                       const Vec& a, long p, BuildOptions opts = {});

// Hom(M, N) of phi-compatible, filtration-preserving maps, as a subspace of the
// row-major n_N x n_M matrices of component 0 (the other components agree).
Subspace hom_filtered(const FilteredPhiModule& m, const FilteredPhiModule& n);
// Filtration-preserving maps at one embedding, same coordinates.
Subspace fil0_hom(const Filtration& src, const Filtration& dst);

Matrix iota(const FilteredPhiModule& d);  // D_1 -> C_1 in eigen-coordinates
// alpha_i for i = 1..rank(D_1); nullopt where (D_1)^r and (C_1)_r are not isomorphic.
std::vector<std::optional<Matrix>> alpha_maps(const FilteredPhiModule& d1, const FilteredPhiModule& c1);

// Yoneda extensions of filtered phi-modules 0 -> N -> X -> M -> 0.
// A cocycle (u, v) describes X = N (+) M with phi = [[phi_N, u], [0, phi_M]] and
// Fil^k X = {(y - v x, x) : y in Fil^k N, x in Fil^k M}; u_sigma maps component
// sigma of M to component sigma+1 of N and v_sigma is sigma-linear.
struct Cocycle {
  std::vector<Matrix> u, v;  // [sigma], each n_N x n_M
};
Cocycle operator+(const Cocycle& a, const Cocycle& b);
Cocycle operator*(const Scalar& s, const Cocycle& a);
// Along phi-compatible filtered maps given in eigen-coordinates.
Cocycle pushforward(const Cocycle& c, const Matrix& g);  // g: N -> N'
Cocycle pullback(const Cocycle& c, const Matrix& f);     // f: M' -> M

class Ext1Filtered {
 public:
  Ext1Filtered(FilteredPhiModule m, FilteredPhiModule n);
  std::size_t dim() const { return q_.dim(); }
  const FilteredPhiModule& source() const { return m_; }  // M
  const FilteredPhiModule& target() const { return n_; }  // N
  Vec class_of(const Cocycle& c) const;
  Cocycle representative(const Vec& coords) const;
  // A representative with u = 0 when one exists.
  std::optional<Cocycle> split_phi_representative(const Cocycle& c) const;
  bool is_zero(const Cocycle& c) const { return is_zero_vec(class_of(c)); }
  Cocycle zero() const;
  // The coboundary of c in Hom_vec(M, N).
  Cocycle coboundary(const std::vector<Matrix>& c) const;

 private:
  static bool is_zero_vec(const Vec& v) { return phimod::is_zero(v); }
  Vec flatten(const Cocycle& c) const;
  Cocycle unflatten(const Vec& v) const;
  FilteredPhiModule m_, n_;
  Quotient q_;
};

// The class of D as an extension of its last rank-one quotient by D_1.
Cocycle extension_class(const FilteredPhiModule& d);
// Inverse: the module whose extension class (with u = 0) is c.
FilteredPhiModule extension_module(const FilteredPhiModule& d1, const FilteredPhiModule& l, const Cocycle& c);
// Pushforward of a class of Ext^1(L, D_1) along iota: D_1 -> C_1.
Cocycle cup_pushforward(const Cocycle& c, const Matrix& iota_map);
// The module determined by (D_1, C_1, L, iota) through the kernel of the
// pushforward; the kernel must be a line (true for K = Q_p).
FilteredPhiModule reconstruct_from_iota(const FilteredPhiModule& d1, const FilteredPhiModule& c1,
                                        const FilteredPhiModule& l, const Matrix& iota_map);

// Collapse the filtration at every tau != sigma to one jump at -target[tau]
// (default: the module's own lowest weight h_{tau,n}).
FilteredPhiModule cow_functor(const FilteredPhiModule& d, int sigma,
                              const std::optional<std::vector<int>>& target = std::nullopt);

struct IsoResult {
  bool iso = false;
  std::string reason;
  explicit operator bool() const { return iso; }
};
IsoResult isomorphic(const FilteredPhiModule& a, const FilteredPhiModule& b);

}  // namespace phimod
