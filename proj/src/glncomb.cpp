#include "phimod/glncomb.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace phimod {

std::string Constituent::to_string() const {
  return "C(" + subset_to_string(I) + ",i=" + std::to_string(i) + ",sigma=" + std::to_string(sigma) + ")";
}

Constituent constituent_of(const Perm& w, int i, int sigma) {
  if (i < 1 || i > w.size() - 1) throw std::out_of_range("constituent index i must satisfy 1 <= i <= n-1");
  return {w.image_of(initial_segment(i)), i, sigma};
}

std::vector<Constituent> constituents_pi1(int n, int d_K) {
  std::vector<Constituent> out;
  for (int i = 1; i < n; ++i)
    for (Subset I : subsets_of_size(n, i))
      for (int s = 0; s < d_K; ++s) out.push_back({I, i, s});
  return out;
}

std::vector<Constituent> s_FP(const ParabolicShape& shape, int d_K) {
  std::vector<Constituent> out;
  const auto& blocks = shape.blocks();
  Subset below = 0;  // B_1 u ... u B_{k-1}
  int N = 0;         // n_1 + ... + n_{k-1}
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int nk = shape.sizes()[k];
    // i strictly inside block k: I = below u J with J a proper nonempty part of B_k
    for (int j = 1; j < nk; ++j)
      for (Subset I : subsets_of_size(shape.n(), N + j))
        if ((I & below) == below && (I & ~(below | blocks[k])) == 0)
          for (int s = 0; s < d_K; ++s) out.push_back({I, N + j, s});
    below |= blocks[k];
    N += nk;
    if (k + 1 < blocks.size())
      for (int s = 0; s < d_K; ++s) out.push_back({below, N, s});
  }
  std::sort(out.begin(), out.end(), [](const Constituent& a, const Constituent& b) {
    return std::tie(a.i, a.I, a.sigma) < std::tie(b.i, b.I, b.sigma);
  });
  return out;
}

long long s_FP_count_formula(const ParabolicShape& shape, int d_K) {
  long long c = shape.r() - 1;
  for (int m : shape.sizes()) c += (1LL << m) - 2;
  return c * d_K;
}

namespace {

const std::map<ExtKind, std::string>& kind_names() {
  static const std::map<ExtKind, std::string> names = {
      {ExtKind::alg, "alg"},
      {ExtKind::ps, "ps"},
      {ExtKind::aut_pi1, "aut_pi1"},
      {ExtKind::aut_parabolic, "aut_parabolic"},
      {ExtKind::aut_pi1_sigma, "aut_pi1_sigma"},
      {ExtKind::aut_parabolic_sigma, "aut_parabolic_sigma"},
      {ExtKind::gal_full, "gal_full"},
      {ExtKind::gal_g, "gal_g"},
      {ExtKind::gal_w, "gal_w"},
      {ExtKind::gal_zero, "gal_zero"},
      {ExtKind::gal_bar, "gal_bar"},
      {ExtKind::gal_gprime, "gal_gprime"},
      {ExtKind::gal_parabolic, "gal_parabolic"},
      {ExtKind::gal_sigma, "gal_sigma"},
      {ExtKind::gal_parabolic_sigma, "gal_parabolic_sigma"},
      {ExtKind::gal_iota, "gal_iota"},
      {ExtKind::gal_alpha, "gal_alpha"},
      {ExtKind::gal_alpha_cap, "gal_alpha_cap"},
      {ExtKind::gal_alpha_sum, "gal_alpha_sum"},
      {ExtKind::gal_FG_cap, "gal_FG_cap"},
      {ExtKind::gal_F, "gal_F"},
      {ExtKind::gal_C1D1, "gal_C1D1"},
      {ExtKind::ker_tD, "ker_tD"},
  };
  return names;
}

long long tri(long long n) { return n * (n - 1) / 2; }

}  // namespace

std::string ext_kind_name(ExtKind k) { return kind_names().at(k); }

std::optional<ExtKind> parse_ext_kind(const std::string& name) {
  for (const auto& [k, s] : kind_names())
    if (s == name) return k;
  return std::nullopt;
}

std::vector<ExtKind> all_ext_kinds() {
  std::vector<ExtKind> out;
  for (const auto& kv : kind_names()) out.push_back(kv.first);
  return out;
}

bool ext_kind_needs_shape(ExtKind k) {
  return k == ExtKind::aut_parabolic || k == ExtKind::aut_parabolic_sigma || k == ExtKind::gal_parabolic ||
         k == ExtKind::gal_parabolic_sigma;
}

long long ext_dim(ExtKind kind, int n_, int d_, const ParabolicShape* shape) {
  if (n_ < 1 || d_ < 1) throw std::invalid_argument("ext_dim needs n >= 1 and d_K >= 1");
  if (ext_kind_needs_shape(kind) && (!shape || shape->n() != n_))
    throw std::invalid_argument("ext kind '" + ext_kind_name(kind) + "' needs a shape of size n");
  const long long n = n_, d = d_;
  const long long pw = 1LL << n;
  long long blocks_pw = 0, r = 0, pdim = 0;
  if (shape) {
    r = shape->r();
    pdim = shape->parabolic_dim();
    for (int m : shape->sizes()) blocks_pw += (1LL << m) - 2;
  }
  switch (kind) {
    case ExtKind::alg: return n + d;
    case ExtKind::ps: return n + n * d;
    case ExtKind::aut_pi1: return n + (pw - 1) * d;
    case ExtKind::aut_parabolic: return n + d * r + d * blocks_pw;
    case ExtKind::aut_pi1_sigma: return n + pw - 1;
    case ExtKind::aut_parabolic_sigma: return n + r + blocks_pw;
    case ExtKind::gal_full: return 1 + n * n * d;
    case ExtKind::gal_g: return 1 + tri(n) * d;
    case ExtKind::gal_w: return 1 + n * (n + 1) / 2 * d;
    case ExtKind::gal_zero: return tri(n) * d + 1 - n;
    case ExtKind::gal_bar: return n * (n + 1) / 2 * d + n;
    case ExtKind::gal_gprime: return 1 + (tri(n) + 1) * d;
    case ExtKind::gal_parabolic: return 1 + d * pdim;
    case ExtKind::gal_sigma: return 1 + tri(n) * (d - 1) + n * n;
    case ExtKind::gal_parabolic_sigma: return 1 + (d - 1) * tri(n) + pdim;
    case ExtKind::gal_iota: return 1 + (n - 1) * (n - 2) * d;
    case ExtKind::gal_alpha: return (n - 1) * (n - 2) * d;
    case ExtKind::gal_alpha_cap: return (n - 1) * (n - 3) * d + d - 1;
    case ExtKind::gal_alpha_sum: return 1 + n * (n - 2) * d;
    case ExtKind::gal_FG_cap: return 1 + (n * n - 2 * n + 2) * d;
    case ExtKind::gal_F: return 1 + (n * n - n + 1) * d;
    case ExtKind::gal_C1D1: return (n - 1) * (n - 1) * d;
    case ExtKind::ker_tD: return (pw - n * (n + 1) / 2 - 1) * d;
  }
  throw std::invalid_argument("unknown ext kind");
}

std::vector<IdentityCheck> exact_sequence_checks(int n, int d_K, const ParabolicShape* shape) {
  std::vector<IdentityCheck> out;
  auto D = [&](ExtKind k, const ParabolicShape* s = nullptr) { return ext_dim(k, n, d_K, s); };
  auto add = [&](std::string name, std::string formula, long long lhs, long long rhs) {
    out.push_back({std::move(name), std::move(formula), lhs, rhs});
  };
  const long long d = d_K;
  const long long c_pi1 = static_cast<long long>(constituents_pi1(n, d_K).size());

  add("constituent-count", "|constituents of pi_1| = (2^n-2)d_K", c_pi1, ((1LL << n) - 2) * d);
  add("pi1-extension-split", "alg + (2^n-2)d_K = aut_pi1", D(ExtKind::alg) + c_pi1, D(ExtKind::aut_pi1));
  add("ps-extension-split", "alg + (n-1)d_K = ps", D(ExtKind::alg) + (n - 1) * d, D(ExtKind::ps));
  add("sigma-pi1-split", "(n+1) + (2^n-2) = aut_pi1_sigma", n + 1 + (1LL << n) - 2, D(ExtKind::aut_pi1_sigma));
  {
    ParabolicShape F(std::vector<int>{n - 1, 1}), G(std::vector<int>{1, n - 1});
    if (n >= 2)
      add("corank-one-filtration-sum", "aut_parabolic(n-1,1) + aut_parabolic(1,n-1) - alg = aut_pi1",
          D(ExtKind::aut_parabolic, &F) + D(ExtKind::aut_parabolic, &G) - D(ExtKind::alg), D(ExtKind::aut_pi1));
  }
  add("galois-F-G-additivity", "2 gal_F - gal_FG_cap = gal_full", 2 * D(ExtKind::gal_F) - D(ExtKind::gal_FG_cap),
      D(ExtKind::gal_full));
  add("galois-F-G-decomposition", "(1+d_K) + gal_iota + ((n-1)d_K - 1) = gal_FG_cap",
      1 + d + D(ExtKind::gal_iota) + (n - 1) * d - 1, D(ExtKind::gal_FG_cap));
  add("kernel-ledger", "aut_pi1 - gal_bar = ker_tD", D(ExtKind::aut_pi1) - D(ExtKind::gal_bar), D(ExtKind::ker_tD));
  add("kernel-per-embedding", "d_K (2^n - n(n+1)/2 - 1) = ker_tD", d * ((1LL << n) - n * (n + 1) / 2 - 1),
      D(ExtKind::ker_tD));
  add("bar-quotient", "gal_full - gal_zero = gal_bar", D(ExtKind::gal_full) - D(ExtKind::gal_zero), D(ExtKind::gal_bar));
  add("trianguline-over-zero", "gal_w - (n + n d_K) = gal_zero", D(ExtKind::gal_w) - (n + n * d), D(ExtKind::gal_zero));
  add("de-rham-over-zero", "gal_g - n = gal_zero", D(ExtKind::gal_g) - n, D(ExtKind::gal_zero));
  add("twist-directions", "gal_gprime - gal_g = d_K", D(ExtKind::gal_gprime) - D(ExtKind::gal_g), d);
  add("sigma-full-shape", "gal_parabolic_sigma(n) = gal_sigma",
      [&] {
        ParabolicShape whole(std::vector<int>{n});
        return D(ExtKind::gal_parabolic_sigma, &whole);
      }(),
      D(ExtKind::gal_sigma));
  add("parabolic-full-shape", "gal_parabolic(n) = gal_full",
      [&] {
        ParabolicShape whole(std::vector<int>{n});
        return D(ExtKind::gal_parabolic, &whole);
      }(),
      D(ExtKind::gal_full));
  add("borel-shape", "gal_parabolic(1,...,1) = gal_w",
      [&] {
        ParabolicShape borel(std::vector<int>(static_cast<std::size_t>(n), 1));
        return D(ExtKind::gal_parabolic, &borel);
      }(),
      D(ExtKind::gal_w));
  if (n >= 2) {
    add("iota-euler-count", "(n-1)^2 d_K - ((n-1)d_K - 1) = gal_iota",
        D(ExtKind::gal_C1D1) - ((n - 1) * d - 1), D(ExtKind::gal_iota));
    add("iota-over-alpha", "gal_iota - gal_alpha = 1", D(ExtKind::gal_iota) - D(ExtKind::gal_alpha), 1);
  }
  if (n >= 3)
    add("alpha-sum-cap", "2 gal_alpha - gal_alpha_cap = gal_alpha_sum",
        2 * D(ExtKind::gal_alpha) - D(ExtKind::gal_alpha_cap), D(ExtKind::gal_alpha_sum));

  std::vector<ParabolicShape> shapes = shape ? std::vector<ParabolicShape>{*shape} : compositions(n);
  for (const auto& P : shapes) {
    const std::string tag = "[" + P.to_string() + "]";
    long long enumerated = static_cast<long long>(s_FP(P, d_K).size());
    add("parabolic-set-count" + tag, "|S_FP| by enumeration = (sum(2^{n_i}-2) + (r-1)) d_K", enumerated,
        s_FP_count_formula(P, d_K));
    add("parabolic-extension-split" + tag, "alg + |S_FP| = aut_parabolic", D(ExtKind::alg) + enumerated,
        D(ExtKind::aut_parabolic, &P));
    add("sigma-parabolic-split" + tag, "(n+1) + |S_FP|/d_K = aut_parabolic_sigma", n + 1 + enumerated / d,
        D(ExtKind::aut_parabolic_sigma, &P));
    long long bar_blocks = 0, bar_blocks_sigma = 0, ker_blocks = 0;
    for (int m : P.sizes()) {
      bar_blocks += ext_dim(ExtKind::gal_bar, m, d_K);
      bar_blocks_sigma += ext_dim(ExtKind::gal_bar, m, 1);
      ker_blocks += ext_dim(ExtKind::ker_tD, m, d_K);
    }
    add("parabolic-bar-blocks" + tag, "gal_parabolic - gal_zero = sum_i gal_bar(n_i)",
        D(ExtKind::gal_parabolic, &P) - D(ExtKind::gal_zero), bar_blocks);
    add("sigma-parabolic-bar-blocks" + tag, "gal_parabolic_sigma - gal_zero = sum_i gal_bar(n_i, d_K=1)",
        D(ExtKind::gal_parabolic_sigma, &P) - D(ExtKind::gal_zero), bar_blocks_sigma);
    add("parabolic-kernel-blocks" + tag, "aut_parabolic - (gal_parabolic - gal_zero) = sum_i ker_tD(n_i)",
        D(ExtKind::aut_parabolic, &P) - (D(ExtKind::gal_parabolic, &P) - D(ExtKind::gal_zero)), ker_blocks);
  }
  return out;
}

SocleDiagram socle_pi_min(int n, int d_K) {
  if (n < 2) throw std::invalid_argument("socle diagram needs n >= 2");
  SocleDiagram s;
  s.n = n;
  s.d_K = d_K;
  s.layer2 = constituents_pi1(n, d_K);
  s.layer3 = ext_dim(ExtKind::ker_tD, n, d_K);
  return s;
}

}  // namespace phimod
