#include "doctest.h"
#include "oracle.hpp"
#include "phimod/extcalc.hpp"
#include "phimod/sampling.hpp"

using namespace phimod;

namespace {

FilteredPhiModule family(const Scalar& a) { return build_from_parameter({1, 2, 4}, {{2, 1, 0}}, {a}, 7); }

Subspace line(const Vec& v) { return Subspace::span(v.size(), {v}); }

}  // namespace

TEST_CASE("automorphic model at n = 3") {
  auto aut = build_aut_model(3, 1);
  CHECK(aut.target_dim == 10);
  CHECK(aut.span().dim() == 10);
  Matrix big = aut.assembled();
  CHECK(big.cols() == 36);
  CHECK(oracle::rank(big) == 10);
  CHECK(aut.relations().dim() == 26);
}

TEST_CASE("automorphic target dimension n + (2^n - 1) d_K") {
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 3; ++d) {
      auto aut = build_aut_model(n, d);
      CHECK(aut.span().dim() == static_cast<std::size_t>(n + ((1 << n) - 1) * d));
    }
}

TEST_CASE("smooth characters land in the g' slot") {
  auto aut = build_aut_model(3, 2);
  for (const auto& w : aut.perms)
    for (const auto& psi : subspace_sm(3, 2).basis_vectors()) {
      Vec out = zeta_w(aut, w, psi);
      for (std::size_t k = 3 + 2; k < out.size(); ++k) CHECK(out[k] == 0);
    }
}

TEST_CASE("each zeta_w is injective") {
  auto aut = build_aut_model(3, 1);
  CHECK(is_zero(zeta_w(aut, Perm::identity(3), Vec(6))));
  for (const auto& w : aut.perms) CHECK(oracle::rank(aut.mu_of(w)) == 6);
}

TEST_CASE("intertwining relations in every model") {
  for (int n = 2; n <= 4; ++n)
    for (int d = 1; d <= 2; ++d) {
      auto t = check_intertwining(build_aut_model(n, d));
      INFO(t.first_failure);
      CHECK(t.failed == 0);
      CHECK(t.checked > 0);
    }
  // A block transposition of shape (2,1) identifies the two images.
  auto aut = build_aut_model(3, 1);
  const Perm u = transposition(3, 0, 1);
  for (const auto& psi : subspace_Pgprime(ParabolicShape({2, 1}), 1).basis_vectors())
    CHECK(aut.apply(Perm::identity(3), psi) == aut.apply(u, weyl_act(u, 1, psi)));

  CHECK(check_intertwining(build_gal_model(family(2))).failed == 0);
  CHECK(check_intertwining(build_linear_gal_model(family(2))).failed == 0);
  Sampler s(3);
  CHECK(check_intertwining(build_gal_model(random_module(s, 2, 2, 5))).failed == 0);
  CHECK(check_intertwining(build_linear_gal_model(random_module(s, 4, 1, 5))).failed == 0);
}

TEST_CASE("Galois model sizes") {
  CHECK(build_gal_model(build_from_flags({1, 3}, {{1, 0}}, {Matrix{{1, 1}, {1, 0}}}, 5)).target_dim == 5);
  auto g3 = build_gal_model(family(3));
  CHECK(g3.target_dim == 9);
  CHECK(g3.span().dim() == 9);
  auto r1 = build_gal_model(build_from_flags({Scalar(1, 5)}, {{1}}, {Matrix{{1}}}, 5));
  CHECK(r1.target_dim == 2);
  Sampler s(5);
  auto big = build_gal_model(random_module(s, 3, 2, 5));
  CHECK(big.bookkeeping_only);
  CHECK(big.target_dim == 15);
}

TEST_CASE("relation space of the rank-3 pairing") {
  auto sp = surrogate_pairing(Scalar(1, 3), 1);
  auto rs = relation_space(sp);
  CHECK(rs.v_dim == 14);
  CHECK(rs.relations.dim() == 5);
  CHECK(rs.target_dim == 9);
}

TEST_CASE("pairing separates lines of iota") {
  auto a = surrogate_pairing(1, 1), b = surrogate_pairing(1, 2);
  CHECK_FALSE(a.image_minus == b.image_minus);
  CHECK(surrogate_pairing(2, 2).image_minus == a.image_minus);
  CHECK(a.kernel_minus.dim() == 1);
  CHECK(a.image_minus.dim() == 3);
  CHECK(is_zero(a.iminus.apply(Vec(4))));
  CHECK_THROWS_WITH_AS(surrogate_pairing(0, 1), doctest::Contains("nondegenerate-iota"), InvariantViolation);
}

TEST_CASE("iota coordinates of the one-parameter family") {
  for (Scalar a : {Scalar(2), Scalar(3), Scalar(-5, 2)}) {
    auto m = family(a);
    auto [x1, x2] = iota_coordinates(top_sub(m), bottom_quotient(m), iota(m));
    CHECK(x1 == 1 / a);
    CHECK(x2 == 1);
  }
}

TEST_CASE("pairing constraints hold on the grid") {
  auto rep = validate_surrogate();
  CHECK(rep.grid_points == 50);
  CHECK(rep.ok());
  auto grid = surrogate_grid(50);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) CHECK(grid[i].first * grid[j].second != grid[j].first * grid[i].second);
}

TEST_CASE("the built-in pairing is pinned") {
  const auto& a = frozen_pairing();
  CHECK(a.a1_minus == Matrix{{0, 0, 0, -1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}});
  CHECK(a.a2_minus == Matrix{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK(a.a1_plus == Matrix{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, -1}});
  CHECK(a.a2_plus == Matrix{{0, 0, 0, -1}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 1}});
}

TEST_CASE("t_D at n = 2 is a bijection") {
  Sampler s(7);
  for (int d = 1; d <= 3; ++d) {
    auto td = t_D(random_module(s, 2, d, 5));
    CHECK(td.ker.dim() == 0);
    CHECK(td.gal.target_dim == static_cast<std::size_t>(3 * d + 2));
    CHECK(rank(td.tD) == td.aut.target_dim);
  }
}

TEST_CASE("t_D at n = 3: frozen kernels") {
  // Kernel lines computed once from the linear model and frozen.
  const std::vector<std::pair<Scalar, Vec>> frozen{
      {2, {0, 0, 0, 0, 1, -2, 1, 1, -2, 1}},
      {Scalar(1, 2), {0, 0, 0, 0, 1, Scalar(-1, 2), Scalar(-1, 2), Scalar(-1, 2), Scalar(-1, 2), 1}},
      {3, {0, 0, 0, 0, 1, -3, 2, 2, -3, 1}},
  };
  for (const auto& [a, v] : frozen) {
    auto rec = t_D(family(a), GalBackend::recursive);
    auto lin = t_D(family(a), GalBackend::linear);
    CHECK(rec.ker == line(v));
    CHECK(lin.ker == line(v));
    for (auto x : kernel_meets_images(rec)) CHECK(x == 0);
    // The defining relation holds on every route.
    for (std::size_t k = 0; k < rec.aut.perms.size(); ++k) CHECK(rec.tD * rec.aut.mu[k] == rec.gal.mu[k]);
  }
  CHECK(hash_hex(fnv1a64(kernel_canonical_text(t_D(family(2))))) == "a88db92e84d9cd49");
}

TEST_CASE("t_D agrees between Galois models on random modules") {
  Sampler s(9);
  for (int k = 0; k < 6; ++k) {
    auto m = random_module(s, 3, 1, 5);
    auto rec = t_D(m);
    CHECK(rec.ker.dim() == 1);
    CHECK(rec.ker == t_D(m, GalBackend::linear).ker);
  }
}

TEST_CASE("parabolic kernel decomposition (linear model)") {
  Sampler s(13);
  for (auto [n, d] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 1}}) {
    auto td = t_D(random_module(s, n, d, 5), GalBackend::linear);
    CHECK(static_cast<long long>(td.ker.dim()) == ext_dim(ExtKind::ker_tD, n, d));
    for (const auto& shape : compositions(n)) {
      Subspace sum = Subspace::zero(td.aut.target_dim);
      for (const auto& u : shape.weyl_group()) sum = subspace_sum(sum, image(td.aut.mu_of(u)));
      long long expect = 0;
      for (int ni : shape.sizes()) expect += ext_dim(ExtKind::ker_tD, ni, d);
      INFO("n=" << n << " d=" << d << " shape " << shape.to_string());
      CHECK(static_cast<long long>(subspace_intersect(td.ker, sum).dim()) == expect);
    }
  }
}

TEST_CASE("kernel splits over embeddings") {
  Sampler s(17);
  auto td = t_D(random_module(s, 3, 2, 5), GalBackend::linear);
  CHECK(td.ker.dim() == 2);
  std::vector<Subspace> parts;
  for (int sigma = 0; sigma < 2; ++sigma) {
    Subspace img = Subspace::zero(td.aut.target_dim);
    for (const auto& mu : td.aut.mu) img = subspace_sum(img, map_subspace(mu, subspace_sigma(3, 2, sigma)));
    parts.push_back(subspace_intersect(td.ker, img));
  }
  CHECK(parts[0].dim() + parts[1].dim() == 2);
  CHECK(subspace_sum(parts[0], parts[1]) == td.ker);
}

TEST_CASE("recovery sweep") {
  auto r = hodge_recovery({1, 2, 4}, {2, 1, 0}, {2, 3, 5}, 7);
  CHECK(r.injective);
  CHECK(r.entries.size() == 3);
  CHECK(r.entries[0].canonical != r.entries[1].canonical);
  CHECK(r.entries[1].canonical != r.entries[2].canonical);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.round_trip[i] == std::vector<Scalar>{r.entries[i].a});

  CHECK(hodge_recovery({1, 2, 4}, {2, 1, 0}, {3}, 7).injective);

  auto dup = hodge_recovery({1, 2, 4}, {2, 1, 0}, {2, 2}, 7);
  CHECK(dup.entries.size() == 1);
  REQUIRE(dup.warnings.size() == 1);
  CHECK(dup.warnings[0].find("duplicate sample") != std::string::npos);

  const Vec many{2, 3, 5, 7, Scalar(1, 2), Scalar(-3, 4), 11, -1};
  auto seq = hodge_recovery({1, 2, 4}, {2, 1, 0}, many, 7, false);
  auto par = hodge_recovery({1, 2, 4}, {2, 1, 0}, many, 7, true);
  REQUIRE(seq.entries.size() == par.entries.size());
  for (std::size_t i = 0; i < seq.entries.size(); ++i) CHECK(seq.entries[i].canonical == par.entries[i].canonical);
}

TEST_CASE("higher intertwining") {
  auto sp = surrogate_pairing(Scalar(1, 3), 1);
  auto zero = higher_intertwining_check(sp, Vec(5), Vec(2));
  CHECK(zero.holds);
  REQUIRE(zero.m);
  CHECK(is_zero(sp.iminus.apply(*zero.m)));
  for (const auto& g : de_rham_subspace_rank2().basis_vectors()) CHECK(higher_intertwining_check(sp, g, Vec(2)).holds);
  // A twist by psi o det is absorbed by the matching psi.
  const Vec psi{2, -1};
  CHECK(higher_intertwining_check(sp, diagonal_twist_rank2(psi), psi).holds);
  // Outside the image: a vector not in image(iminus).
  Vec outside;
  for (std::size_t i = 0; i < 5 && outside.empty(); ++i)
    if (!sp.image_minus.contains(unit_vec(5, i))) outside = unit_vec(5, i);
  REQUIRE_FALSE(outside.empty());
  CHECK_FALSE(higher_intertwining_check(sp, outside, Vec(2)).holds);
}
