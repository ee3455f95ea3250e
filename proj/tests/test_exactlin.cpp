#include "doctest.h"
#include "oracle.hpp"
#include "phimod/exactlin.hpp"

using namespace phimod;

namespace {

Vec e(std::size_t n, std::size_t i) { return unit_vec(n, i); }

Subspace random_subspace(std::mt19937_64& g, std::size_t ambient, std::size_t gens) {
  return Subspace::span_rows(Matrix::from_rows(oracle::random_rows(g, gens, ambient), ambient));
}

}  // namespace

TEST_CASE("scalars parse and print as num/den") {
  CHECK(parse_scalar("3/6") == Scalar(1, 2));
  CHECK(parse_scalar("-4") == Scalar(-4));
  CHECK(to_string(parse_scalar("-2/4")) == "-1/2");
  CHECK_THROWS(parse_scalar("1/0"));
  CHECK_THROWS(parse_scalar("x"));
}

TEST_CASE("sum of independent lines") {
  auto u = Subspace::span(3, {e(3, 0)}), v = Subspace::span(3, {e(3, 1)});
  auto s = subspace_sum(u, v);
  CHECK(s.dim() == 2);
  CHECK(s == Subspace::span(3, {e(3, 0), e(3, 1)}));
  CHECK(subspace_sum(u, u) == u);
}

TEST_CASE("intersection of coordinate planes") {
  auto u = Subspace::span(3, {e(3, 0), e(3, 1)}), v = Subspace::span(3, {e(3, 1), e(3, 2)});
  CHECK(subspace_intersect(u, v) == Subspace::span(3, {e(3, 1)}));
  CHECK(subspace_intersect(u, Subspace::full(3)) == u);
  CHECK_THROWS(subspace_intersect(u, Subspace::full(4)));
  CHECK_THROWS(subspace_sum(u, Subspace::full(4)));
}

TEST_CASE("sum dimension agrees with the rank of stacked bases") {
  std::mt19937_64 g(11);
  for (int t = 0; t < 40; ++t) {
    auto u = random_subspace(g, 6, 3), v = random_subspace(g, 6, 4);
    auto rows = oracle::rows_of(u.basis());
    for (auto& r : oracle::rows_of(v.basis())) rows.push_back(r);
    CHECK(subspace_sum(u, v).dim() == oracle::rank(rows));
    CHECK(subspace_sum(u, v).dim() + subspace_intersect(u, v).dim() == u.dim() + v.dim());
  }
}

TEST_CASE("lattice identities on random subspaces") {
  std::mt19937_64 g(12);
  for (int t = 0; t < 30; ++t) {
    auto u = random_subspace(g, 5, 2), v = random_subspace(g, 5, 3);
    CHECK(subspace_intersect(subspace_sum(u, v), u) == u);
    auto small = subspace_intersect(u, v);
    CHECK(subspace_sum(small, v) == v);
    CHECK(subspace_sum(u, v).contains(u));
  }
}

TEST_CASE("canonical bases make equality syntactic") {
  auto a = Subspace::span(3, {{1, 2, 3}, {0, 1, 1}});
  auto b = Subspace::span(3, {{2, 5, 7}, {1, 1, 2}});
  CHECK(a == b);
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(Subspace::span_rows(a.basis()) == a);
  for (std::size_t i = 1; i < a.pivots().size(); ++i) CHECK(a.pivots()[i - 1] < a.pivots()[i]);
}

TEST_CASE("kernel, image and preimage") {
  auto id = Matrix::identity(4);
  CHECK(kernel(id).dim() == 0);
  CHECK(image(id) == Subspace::full(4));
  Matrix z(3, 5);
  CHECK(kernel(z) == Subspace::full(5));
  CHECK(image(z).dim() == 0);

  std::mt19937_64 g(13);
  for (int t = 0; t < 30; ++t) {
    Matrix m = Matrix::from_rows(oracle::random_rows(g, 5, 7, 2), 7);
    const auto r = oracle::rank(m);
    CHECK(rank(m) == r);
    CHECK(kernel(m).dim() + r == 7);
    CHECK(image(m).dim() == r);
    CHECK(preimage(m, image(m)) == Subspace::full(7));
    for (const auto& v : kernel(m).basis_vectors()) CHECK(is_zero(m.apply(v)));
  }
}

TEST_CASE("inverse and solve") {
  Matrix m{{2, 1}, {1, 1}};
  auto inv = inverse(m);
  REQUIRE(inv);
  CHECK(*inv * m == Matrix::identity(2));
  CHECK_FALSE(inverse(Matrix{{1, 2}, {2, 4}}));
  auto x = solve(m, {3, 2});
  REQUIRE(x);
  CHECK(m.apply(*x) == Vec{3, 2});
  CHECK_FALSE(solve(Matrix{{1, 1}, {1, 1}}, {1, 2}));
}

TEST_CASE("quotient projection and lift") {
  Quotient q(Subspace::span(4, {{1, 1, 0, 0}, {0, 0, 1, 1}}));
  CHECK(q.dim() == 2);
  const Vec v{3, 1, 4, 1};
  CHECK(q.project(q.lift(q.project(v))) == q.project(v));
  CHECK(is_zero(q.project({1, 1, 0, 0})));
}

TEST_CASE("general position of flags") {
  auto std_flag = [](int n, bool reversed) {
    std::vector<Subspace> steps;
    std::vector<Vec> acc;
    for (int k = 0; k < n; ++k) {
      acc.push_back(e(static_cast<std::size_t>(n), static_cast<std::size_t>(reversed ? n - 1 - k : k)));
      steps.push_back(Subspace::span(static_cast<std::size_t>(n), acc));
    }
    return Flag(steps);
  };
  CHECK_FALSE(general_position(std_flag(2, false), std_flag(2, false)));
  CHECK(general_position(std_flag(3, false), std_flag(3, true)));
  CHECK(general_position(std_flag(3, true), std_flag(3, false)));
  CHECK_THROWS(Flag({Subspace::span(3, {e(3, 0)}), Subspace::span(3, {e(3, 1), e(3, 2)})}));
}
