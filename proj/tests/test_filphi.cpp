#include "doctest.h"
#include "oracle.hpp"
#include "phimod/filphi.hpp"
#include "phimod/sampling.hpp"

using namespace phimod;

namespace {

// Module with flag rows H_k = span of the first k rows at a single embedding.
FilteredPhiModule from_rows(const Vec& alphas, const std::vector<int>& h, const Matrix& rows, long p, bool noncrit = true) {
  return build_from_flags(alphas, {h}, {rows}, p, {.require_noncritical = noncrit});
}

// Weak admissibility by brute force: induced jumps counted from dim(Fil^j ∩ S)
// for every eigen-subset S and every jump j.
bool brute_admissible(const FilteredPhiModule& m) {
  const std::size_t n = static_cast<std::size_t>(m.n);
  auto t_H = [&](Subset s) {
    std::vector<Vec> es;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1) es.push_back(unit_vec(n, i));
    Subspace span = Subspace::span(n, es);
    long total = 0;
    for (const auto& f : m.fil) {
      auto jv = f.jumps();
      for (int j = jv.front(); j <= jv.back(); ++j)
        total += j * static_cast<long>(subspace_intersect(f.at(j), span).dim() - subspace_intersect(f.at(j + 1), span).dim());
    }
    return total;
  };
  auto t_N = [&](Subset s) {
    long total = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1) total += p_valuation(m.alphas[i], m.p);
    return total;
  };
  const Subset full = (Subset{1} << n) - 1;
  if (t_N(full) != t_H(full)) return false;
  for (Subset s = 1; s < full; ++s)
    if (t_N(s) < t_H(s)) return false;
  return true;
}

}  // namespace

TEST_CASE("genericity") {
  auto mk = [](Vec a, long p, int d) {
    std::vector<Filtration> fil(static_cast<std::size_t>(d), Filtration::single_jump(a.size(), 0));
    return FilteredPhiModule::make(static_cast<int>(a.size()), d, p, a, fil);
  };
  CHECK(genericity_check(mk({1, 2}, 3, 1)));
  CHECK_FALSE(genericity_check(mk({1, 2}, 2, 1)));
  CHECK_FALSE(genericity_check(mk({1, 3, 12}, 2, 2)));
  CHECK_THROWS_AS(mk({2, 2}, 5, 1), InvariantViolation);
}

TEST_CASE("weak admissibility on small examples") {
  const long p = 5;
  // Rank one: valuation equal to the jump.
  auto r1 = from_rows({Scalar(1, 5)}, {1}, Matrix{{1}}, p);
  CHECK(weak_admissibility(r1));
  auto r1bad = from_rows({Scalar(5)}, {1}, Matrix{{1}}, p);
  CHECK_FALSE(weak_admissibility(r1bad));

  // alpha = (1, 2/p): v_p = (0, -1), generic since the ratio is not p^{+-1}.
  // Hodge line in general position.
  auto gp = from_rows({1, Scalar(2, 5)}, {1, 0}, Matrix{{1, 1}, {1, 0}}, p);
  CHECK(weak_admissibility(gp) == brute_admissible(gp));
  CHECK(weak_admissibility(gp));
  // alpha = (1, 2p) misses the total Newton = Hodge condition under the jump -h convention.
  auto other_sign = from_rows({1, Scalar(10)}, {1, 0}, Matrix{{1, 1}, {1, 0}}, p);
  CHECK_FALSE(weak_admissibility(other_sign));
  CHECK(brute_admissible(other_sign) == false);
  // Hodge line on the eigenline of alpha_2: that line violates t_N >= t_H.
  auto on_line = from_rows({1, Scalar(2, 5)}, {1, 0}, Matrix{{0, 1}, {1, 0}}, p, false);
  auto rep = weak_admissibility_report(on_line);
  CHECK_FALSE(rep.admissible);
  CHECK(brute_admissible(on_line) == false);
  REQUIRE(rep.violating_subset);
  CHECK(*rep.violating_subset == Subset{0b10});
}

TEST_CASE("admissibility agrees with brute force on random modules") {
  Sampler s(31);
  for (int k = 0; k < 30; ++k) {
    auto h = random_weights(s, 3, 1 + k % 2);
    Vec a = admissible_alphas(s, h, 5);
    if (k % 3 == 0) a[0] *= 5;  // break the total condition sometimes
    std::vector<Matrix> rows;
    for (int t = 0; t < 1 + k % 2; ++t) rows.push_back(Matrix{{1, s.integer(-3, 3), 1}, {1, 1, 0}, {1, 0, 0}});
    FilteredPhiModule m;
    try {
      m = build_from_flags(a, h, rows, 5, {.require_noncritical = false});
    } catch (const std::exception&) {
      continue;
    }
    if (!genericity_check(m)) continue;
    CHECK(weak_admissibility(m) == brute_admissible(m));
  }
}

TEST_CASE("non-criticality of the one-parameter family") {
  auto m = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {3}, 7);
  CHECK(noncritical_all(m));
  auto zero = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {0}, 7, {.require_noncritical = false});
  CHECK_FALSE(noncritical_all(zero));
  CHECK_THROWS_AS(build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {1}, 7), NoncriticalRequired);
  // Hodge flag equal to the standard eigenflag: critical for the identity
  // refinement; only the opposite refinement stays transverse.
  auto eig = from_rows({1, 2, 4}, {2, 1, 0}, Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 7, false);
  CHECK_FALSE(noncritical(eig, Perm::identity(3)));
  int transverse = 0;
  for (const auto& w : all_perms(3)) transverse += noncritical(eig, w);
  CHECK(transverse == 1);
  CHECK(noncritical(eig, Perm::parse("3,2,1")));
  // The Hodge flag is transverse to all six eigenflags.
  for (const auto& w : all_perms(3)) CHECK(general_position(m.hodge_flag(0), eigenflag(3, w)));
}

TEST_CASE("the filtration table of the one-parameter family") {
  auto m = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {3}, 7);
  const auto& f = m.fil[0];
  CHECK(f.at(-2) == Subspace::full(3));
  CHECK(f.at(-1) == Subspace::span(3, {{1, 3, 1}, {1, 1, 0}}));
  CHECK(f.at(0) == Subspace::span(3, {{1, 3, 1}}));
  CHECK(f.at(1).dim() == 0);
  CHECK(m.weights[0] == std::vector<int>{2, 1, 0});
}

TEST_CASE("sub and quotient pieces") {
  auto m = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {3}, 7);
  auto full = sub_quotient(m, 0b111);
  CHECK(isomorphic(full.sub, m));
  CHECK(isomorphic(full.quotient, m));
  auto d1 = top_sub(m);
  CHECK(d1.weights[0] == std::vector<int>{2, 1});
  CHECK(d1.fil[0].at(-1) == Subspace::span(2, {{1, 1}}));
  auto c1 = bottom_quotient(m);
  CHECK(c1.weights[0] == std::vector<int>{1, 0});
  CHECK(c1.fil[0].at(0) == Subspace::span(2, {{1, 3}}));
  CHECK_THROWS(sub_quotient(m, 0));
  CHECK_THROWS(sub_quotient(m, 0b1000));
}

TEST_CASE("Hodge parameter extraction") {
  CHECK(extract_a3(build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {5}, 7), 0) == 5);
  CHECK(extract_a3(build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {7}, 5), 0) == 7);
  // Scale the eigenbasis by (2, 3, 5) directly in the flag rows.
  for (Scalar a : {Scalar(3), Scalar(-2, 7), Scalar(11, 4)}) {
    Matrix rows = parameter_rows(a);
    const Vec t{2, 3, 5};
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) rows(r, c) *= t[c];
    auto scaled = from_rows({1, 2, 4}, {2, 1, 0}, rows, 7);
    CHECK(extract_a3(scaled, 0) == a);
    CHECK(extract_a3(torus_rescale(build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {a}, 7), t), 0) == a);
  }
  auto crit = from_rows({1, 2, 4}, {2, 1, 0}, parameter_rows(1), 7, false);
  CHECK_THROWS_AS(hodge_parameter(crit), NoncriticalRequired);
}

TEST_CASE("two embeddings with a collapsed embedding") {
  auto m = build_from_parameter({1, 2, 4}, {{2, 1, 0}, {0, 0, 0}}, {3, 0}, 7);
  CHECK(m.fil[1].steps().size() == 1);
  CHECK(m.fil[1].jumps() == std::vector<int>{0, 0, 0});
  CHECK(extract_a3(m, 0) == 3);
}

TEST_CASE("filtered homomorphisms") {
  Sampler s(41);
  for (int k = 0; k < 10; ++k) {
    auto m = random_module(s, 2 + k % 2, 1 + k % 2, 5);
    CHECK(hom_filtered(m, m).dim() == 1);
    auto d1 = top_sub(m), c1 = bottom_quotient(m);
    auto h = hom_filtered(d1, c1);
    CHECK(h.dim() == (m.n == 3 ? 2u : 1u));
    CHECK(h.contains(iota(m).flatten()));
    CHECK(oracle::rank(iota(m)) == static_cast<std::size_t>(m.n - 1));
    if (m.n == 3) {
      auto al = alpha_maps(d1, c1);
      REQUIRE(al.size() == 2);
      REQUIRE(al[0]);
      REQUIRE(al[1]);
      CHECK(Subspace::span(4, {al[0]->flatten(), al[1]->flatten()}) == h);
    }
  }
  auto m = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {3}, 7);
  CHECK(iota(m) == Matrix::identity(2));
}

TEST_CASE("filtered Ext dimensions") {
  Sampler s(51);
  for (int k = 0; k < 12; ++k) {
    const int n = 2 + k % 2, d = 1 + (k / 2) % 2;
    auto m = random_module(s, n, d, 5);
    Ext1Filtered e(m, m);
    CHECK(e.dim() == static_cast<std::size_t>(1 + n * (n - 1) / 2 * d));
    CHECK(e.is_zero(pushforward(e.zero(), Matrix::identity(static_cast<std::size_t>(n)))));
  }
}

TEST_CASE("pushforward along iota") {
  Sampler s(61);
  for (int k = 0; k < 10; ++k) {
    auto m = random_module(s, 3, 1, 5);
    auto l = last_quotient(m), c1 = bottom_quotient(m), d1 = top_sub(m);
    Ext1Filtered target(l, c1), source(l, d1);
    CHECK(target.is_zero(cup_pushforward(extension_class(m), iota(m))));
    CHECK(target.is_zero(cup_pushforward(extension_class(m), Matrix(2, 2))));
    Vec x(source.dim()), y(source.dim());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = s.integer(-3, 3);
      y[i] = s.integer(-3, 3);
    }
    auto c1x = source.representative(x), c1y = source.representative(y);
    auto al = alpha_maps(d1, c1);
    const Matrix f = *al[0];
    CHECK(target.class_of(cup_pushforward(c1x + c1y, f)) == target.class_of(cup_pushforward(c1x, f)) + target.class_of(cup_pushforward(c1y, f)));
  }
}

TEST_CASE("iota determines the module") {
  Sampler s(71);
  for (int k = 0; k < 8; ++k) {
    auto m = random_module(s, 3, 1, 5);
    auto d1 = top_sub(m), c1 = bottom_quotient(m), l = last_quotient(m);
    CHECK(isomorphic(m, reconstruct_from_iota(d1, c1, l, Scalar(s.nonzero_rational(7)) * iota(m))));
    CHECK_FALSE(isomorphic(m, reconstruct_from_iota(d1, c1, l, iota(m) + *alpha_maps(d1, c1)[1])));
  }
}

TEST_CASE("isomorphism tests") {
  auto a3 = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {3}, 7);
  auto a4 = build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {4}, 7);
  CHECK(isomorphic(a3, torus_rescale(a3, {2, 3, 5})));
  CHECK_FALSE(isomorphic(a3, a4));
  auto other = build_from_parameter({1, 2, 8}, {{2, 1, 0}}, {3}, 7);
  auto r = isomorphic(a3, other);
  CHECK_FALSE(r);
  CHECK_FALSE(r.reason.empty());
  CHECK(isomorphic(a3, cow_functor(a3, 0)));
}

TEST_CASE("weight collapse") {
  auto m = build_from_parameter({1, 2, 4}, {{2, 1, 0}, {5, 3, 0}}, {3, 5}, 7);
  auto c = cow_functor(m, 0);
  CHECK(c.weights[0] == std::vector<int>{2, 1, 0});
  CHECK(c.weights[1] == std::vector<int>{0, 0, 0});
  CHECK(c.fil[0] == m.fil[0]);
  // Collapse commutes with taking the top sub-object.
  // The collapsed weight is the lowest weight of the whole module.
  const std::vector<int> lowest{m.weights[0][2], m.weights[1][2]};
  CHECK(isomorphic(cow_functor(top_sub(m), 0, lowest), top_sub(c)));
  CHECK(noncritical_all(c));
}

TEST_CASE("module validation names the field") {
  std::vector<Filtration> fil{Filtration::single_jump(2, 0)};
  CHECK_THROWS_AS(FilteredPhiModule::make(2, 1, 5, {1}, fil), InvariantViolation);
  CHECK_THROWS_AS(FilteredPhiModule::make(2, 1, 5, {1, 1}, fil), InvariantViolation);
  CHECK_THROWS_AS(FilteredPhiModule::make(2, 2, 5, {1, 2}, fil), InvariantViolation);
}
