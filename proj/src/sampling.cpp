#include "phimod/sampling.hpp"

#include <numeric>
#include <set>

namespace phimod {

long Sampler::integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

Scalar Sampler::nonzero_rational(long bound) {
  long num = integer(1, bound), den = integer(1, bound);
  if (integer(0, 1)) num = -num;
  Scalar x(num, den);
  x.canonicalize();
  return x;
}

Scalar Sampler::parameter(long bound) {
  for (;;) {
    Scalar x = nonzero_rational(bound);
    if (x != 1) return x;
  }
}

std::vector<std::vector<int>> random_weights(Sampler& s, int n, int d_K, int spread) {
  std::vector<std::vector<int>> out;
  for (int t = 0; t < d_K; ++t) {
    std::set<int> vals;
    while (static_cast<int>(vals.size()) < n) vals.insert(static_cast<int>(s.integer(0, std::max(spread, n - 1))));
    out.emplace_back(vals.rbegin(), vals.rend());
  }
  return out;
}

Vec admissible_alphas(Sampler& s, const std::vector<std::vector<int>>& weights, long p) {
  const std::size_t n = weights.at(0).size();
  for (;;) {
    Vec a;
    for (std::size_t i = 0; i < n; ++i) {
      long v = 0;
      for (const auto& h : weights) v -= h[i];
      long num, den;
      do {
        num = s.integer(1, 12);
        den = s.integer(1, 12);
      } while (num % p == 0 || den % p == 0);
      if (s.integer(0, 1)) num = -num;
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(std::labs(v)));
      Scalar u(num, den);
      u.canonicalize();
      a.push_back(v >= 0 ? Scalar(u * pw) : Scalar(u / pw));
    }
    FilteredPhiModule probe;
    probe.n = static_cast<int>(n);
    probe.d_K = static_cast<int>(weights.size());
    probe.p = p;
    probe.alphas = a;
    std::set<Scalar> distinct(a.begin(), a.end());
    if (distinct.size() == n && genericity_check(probe)) return a;
  }
}

FilteredPhiModule random_module(Sampler& s, int n, int d_K, long p, const std::optional<std::vector<std::vector<int>>>& weights) {
  auto h = weights ? *weights : random_weights(s, n, d_K);
  Vec a = admissible_alphas(s, h, p);
  for (;;) {
    std::vector<Matrix> rows;
    bool ok = true;
    for (int t = 0; t < d_K && ok; ++t) {
      Matrix g(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) = s.integer(-4, 4);
      ok = rank(g) == static_cast<std::size_t>(n);
      rows.push_back(std::move(g));
    }
    if (!ok) continue;
    try {
      return build_from_flags(a, h, rows, p, {.require_noncritical = true, .require_admissible = true});
    } catch (const NoncriticalRequired&) {
    }
  }
}

}  // namespace phimod
