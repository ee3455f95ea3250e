#pragma once
// Exact rational linear algebra: matrices, canonical subspaces, flags.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phimod {

using Scalar = mpq_class;  // always canonical: gcd(num, den) = 1, den > 0
using Vec = std::vector<Scalar>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// "num/den", always with an explicit denominator.
std::string to_string(const Scalar& x);
// Accepts "a", "a/b", "-a/b"; throws std::invalid_argument otherwise.
Scalar parse_scalar(std::string_view text);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows);
  static Matrix diagonal(const Vec& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;
  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Matrix select_columns(const std::vector<std::size_t>& cols) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);

  Vec apply(const Vec& x) const;
  bool is_zero() const;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  friend Matrix operator*(const Scalar& s, const Matrix& m);
  bool operator==(const Matrix& o) const = default;

  static Matrix hstack(const std::vector<Matrix>& parts);
  static Matrix vstack(const std::vector<Matrix>& parts);

  // Flattened row-major entries; used for matrix spaces as vector spaces.
  Vec flatten() const { return data_; }
  static Matrix unflatten(const Vec& v, std::size_t rows, std::size_t cols);

  std::string to_text() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Scalar& s, const Vec& a);
Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
Vec concat(const std::vector<Vec>& parts);

struct Echelon {
  Matrix reduced;                   // nonzero rows only
  std::vector<std::size_t> pivots;  // strictly increasing
};

Echelon rref(Matrix m);
std::size_t rank(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);
// Some solution x of A x = b, or nullopt when inconsistent.
std::optional<Vec> solve(const Matrix& a, const Vec& b);

class Subspace {
 public:
  Subspace() = default;
  static Subspace zero(std::size_t ambient);
  static Subspace full(std::size_t ambient);
  static Subspace span_rows(const Matrix& rows);
  static Subspace span(std::size_t ambient, const std::vector<Vec>& vectors);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  std::vector<Vec> basis_vectors() const;

  bool contains(const Vec& v) const;
  bool contains(const Subspace& u) const;
  // Canonical representative of v modulo this subspace (pivot entries cleared).
  Vec reduce(const Vec& v) const;
  // Coordinates of a member v in the canonical basis: its pivot entries.
  Vec coordinates(const Vec& v) const;
  // Rows spanning the orthogonal complement under the standard pairing.
  Matrix annihilator() const;

  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
  std::string canonical_text() const;

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace subspace_sum(const Subspace& u, const Subspace& v);
Subspace subspace_intersect(const Subspace& u, const Subspace& v);
Subspace kernel(const Matrix& m);  // {x : m x = 0}
Subspace image(const Matrix& m);   // column space
Subspace preimage(const Matrix& m, const Subspace& w);
// Image of a subspace under m (as columns applied to its basis).
Subspace map_subspace(const Matrix& m, const Subspace& u);

// Quotient V / U with canonical coordinates: the non-pivot positions of U's
// echelon basis after reduction.
class Quotient {
 public:
  Quotient() = default;
  explicit Quotient(Subspace sub);
  std::size_t dim() const { return free_.size(); }
  std::size_t ambient_dim() const { return sub_.ambient_dim(); }
  const Subspace& sub() const { return sub_; }
  const std::vector<std::size_t>& free_coords() const { return free_; }
  Vec project(const Vec& v) const;
  Vec lift(const Vec& q) const;  // section: zero on pivot coordinates
  Matrix matrix() const;         // dim × ambient projection matrix

 private:
  Subspace sub_;
  std::vector<std::size_t> free_;
};

class Flag {
 public:
  Flag() = default;
  // steps[i] must have dimension i+1 and contain steps[i-1].
  explicit Flag(std::vector<Subspace> steps);
  std::size_t ambient_dim() const { return n_; }
  const Subspace& step(std::size_t i) const { return steps_.at(i - 1); }  // 1-based
  const std::vector<Subspace>& steps() const { return steps_; }
  bool operator==(const Flag& o) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Subspace> steps_;
};

bool general_position(const Flag& f, const Flag& g);

}  // namespace phimod
