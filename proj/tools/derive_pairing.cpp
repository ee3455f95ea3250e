// Recomputes the rank-3 pairing matrices from the linear Galois model.
//
// For a rank-2 module with Hodge line e1+e2, Phi is the map from the recursive
// rank-2 target to the linear one (Phi mu^rec_w = mu^lin_w for both w). A
// class with coordinates (X1, X2, k, t) pushed along iota = x1 alpha_1 + x2 alpha_2
// has smooth part (x2 X1, x1 X2) and Borel part t N, with
//   N^- = [[x2, -x1], [x2, -x1]],  N^+ = [[x2, -x2], [x1, -x1]];
// its preimage under Phi is the corresponding column of the pairing matrix.
// Usage: derive_pairing [--check]

#include <cstring>
#include <iostream>

#include "phimod/extcalc.hpp"
#include "phimod/io.hpp"

using namespace phimod;

namespace {

PairingMatrices derive() {
  Matrix rows = Matrix::from_rows({{1, 1}, {1, 0}}, 2);
  FilteredPhiModule m = build_from_flags({1, 3}, {{1, 0}}, {rows}, 5);
  PresentedModel rec = build_gal_model(m), lin = build_linear_gal_model(m);
  Matrix phi = t_D(rec, lin).tD;
  if (rank(phi) != phi.cols()) throw InvariantViolation("rank-2 comparison map is not injective");
  // Borel coordinates of the linear target come after the two smooth entries.
  Flag h = m.hodge_flag(0);
  Matrix ann = h.step(1).annihilator();
  Vec line = h.step(1).basis_vectors().front();
  Vec con(4);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t q = 0; q < 2; ++q) con[r * 2 + q] = ann(0, r) * line[q];
  Subspace borel = kernel(Matrix::from_rows({con}, 4));

  auto column = [&](const Scalar& x1, const Scalar& x2, std::size_t basis, bool plus) {
    Vec e(4);
    e[basis] = 1;
    const Scalar &X1 = e[0], &X2 = e[1], &t = e[3];
    const Scalar m1 = -x1, m2 = -x2;
    Matrix nu = plus ? Matrix::from_rows({{x2, m2}, {x1, m1}}, 2) : Matrix::from_rows({{x2, m1}, {x2, m1}}, 2);
    Vec target{Scalar(x2 * X1), Scalar(x1 * X2)};
    for (auto& c : borel.coordinates((t * nu).flatten())) target.push_back(c);
    auto y = solve(phi, target);
    if (!y) throw InvariantViolation("pushforward class is outside the rank-2 Galois image");
    return *y;
  };
  auto matrix_for = [&](const Scalar& x1, const Scalar& x2, bool plus) {
    std::vector<Vec> cols;
    for (std::size_t k = 0; k < 4; ++k) cols.push_back(column(x1, x2, k, plus));
    return Matrix::from_columns(cols, phi.cols());
  };
  PairingMatrices a;
  a.a1_minus = matrix_for(1, 0, false);
  a.a2_minus = matrix_for(0, 1, false);
  a.a1_plus = matrix_for(1, 0, true);
  a.a2_plus = matrix_for(0, 1, true);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  const bool check = argc > 1 && std::strcmp(argv[1], "--check") == 0;
  PairingMatrices a = derive();
  std::cout << pairing_to_json(a).dump(2) << "\n";
  if (!check) return 0;
  const bool same = a == frozen_pairing();
  std::cout << (same ? "derived matrices match the built-in pairing\n" : "derived matrices differ from the built-in pairing\n");
  return same ? 0 : 1;
}
