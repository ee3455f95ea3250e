#include "phimod/exactlin.hpp"

#include <algorithm>
#include <sstream>

namespace phimod {

std::string to_string(const Scalar& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not an exact rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits = [](const std::string& t, bool sign_ok) {
    std::size_t k = 0;
    if (sign_ok && !t.empty() && (t[0] == '-' || t[0] == '+')) k = 1;
    if (k == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(k), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw bad();
  Scalar q(n, d);
  q.canonicalize();
  return q;
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DimensionError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vec Matrix::row(std::size_t i) const {
  return Vec(data_.begin() + static_cast<long>(i * cols_), data_.begin() + static_cast<long>((i + 1) * cols_));
}

Vec Matrix::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& cols) const {
  Matrix b(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) b(i, j) = (*this)(i, cols[j]);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw DimensionError("set_block out of range");
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_) throw DimensionError("apply: vector length mismatch");
  Vec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn(x[j]) != 0 && sgn((*this)(i, j)) != 0) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
  Matrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (sgn(o(k, j)) != 0) r(i, j) += a * o(k, j);
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum shape mismatch");
  Matrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.data_) x = -x;
  return r;
}

Matrix operator*(const Scalar& s, const Matrix& m) {
  Matrix r = m;
  for (auto& x : r.data_) x *= s;
  return r;
}

Matrix Matrix::hstack(const std::vector<Matrix>& parts) {
  if (parts.empty()) return {};
  std::size_t r = parts[0].rows_, c = 0;
  for (const auto& p : parts) {
    if (p.rows_ != r) throw DimensionError("hstack row mismatch");
    c += p.cols_;
  }
  Matrix m(r, c);
  std::size_t off = 0;
  for (const auto& p : parts) {
    m.set_block(0, off, p);
    off += p.cols_;
  }
  return m;
}

Matrix Matrix::vstack(const std::vector<Matrix>& parts) {
  if (parts.empty()) return {};
  std::size_t c = parts[0].cols_, r = 0;
  for (const auto& p : parts) {
    if (p.cols_ != c) throw DimensionError("vstack column mismatch");
    r += p.rows_;
  }
  Matrix m(r, c);
  std::size_t off = 0;
  for (const auto& p : parts) {
    m.set_block(off, 0, p);
    off += p.rows_;
  }
  return m;
}

Matrix Matrix::unflatten(const Vec& v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionError("unflatten size mismatch");
  Matrix m(rows, cols);
  m.data_ = v;
  return m;
}

std::string Matrix::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum length mismatch");
  Vec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference length mismatch");
  Vec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

Vec operator*(const Scalar& s, const Vec& a) {
  Vec r(a);
  for (auto& x : r) x *= s;
  return r;
}

Vec zero_vec(std::size_t n) { return Vec(n); }

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v.at(i) = 1;
  return v;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

Vec concat(const std::vector<Vec>& parts) {
  Vec r;
  for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return r;
}

Echelon rref(Matrix m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t sel = R;
    for (std::size_t i = r; i < R; ++i)
      if (sgn(m(i, c)) != 0) {
        sel = i;
        break;
      }
    if (sel == R) continue;
    if (sel != r)
      for (std::size_t j = c; j < C; ++j) std::swap(m(r, j), m(sel, j));
    Scalar inv = 1 / m(r, c);
    for (std::size_t j = c; j < C; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < C; ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return {m.block(0, 0, r, C), std::move(piv)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  auto e = rref(Matrix::hstack({m, Matrix::identity(n)}));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  if (b.size() != a.rows()) throw DimensionError("solve: right-hand side length mismatch");
  Matrix aug = Matrix::hstack({a, Matrix::from_columns({b}, a.rows())});
  auto e = rref(aug);
  Vec x(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x[e.pivots[r]] = e.reduced(r, a.cols());
  }
  return x;
}

Subspace Subspace::zero(std::size_t ambient) {
  Subspace s;
  s.ambient_ = ambient;
  s.basis_ = Matrix(0, ambient);
  return s;
}

Subspace Subspace::full(std::size_t ambient) { return span_rows(Matrix::identity(ambient)); }

Subspace Subspace::span_rows(const Matrix& rows) {
  auto e = rref(rows);
  Subspace s;
  s.ambient_ = rows.cols();
  s.basis_ = std::move(e.reduced);
  s.pivots_ = std::move(e.pivots);
  return s;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<Vec>& vectors) {
  if (vectors.empty()) return zero(ambient);
  return span_rows(Matrix::from_rows(vectors, ambient));
}

std::vector<Vec> Subspace::basis_vectors() const {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < basis_.rows(); ++i) out.push_back(basis_.row(i));
  return out;
}

Vec Subspace::reduce(const Vec& v) const {
  if (v.size() != ambient_) throw DimensionError("reduce: ambient mismatch");
  Vec r = v;
  for (std::size_t k = 0; k < pivots_.size(); ++k) {
    Scalar f = r[pivots_[k]];
    if (sgn(f) == 0) continue;
    for (std::size_t j = pivots_[k]; j < ambient_; ++j)
      if (sgn(basis_(k, j)) != 0) r[j] -= f * basis_(k, j);
  }
  return r;
}

bool Subspace::contains(const Vec& v) const { return is_zero(reduce(v)); }

bool Subspace::contains(const Subspace& u) const {
  if (u.ambient_ != ambient_) throw DimensionError("contains: ambient mismatch");
  for (std::size_t i = 0; i < u.dim(); ++i)
    if (!contains(u.basis_.row(i))) return false;
  return true;
}

Vec Subspace::coordinates(const Vec& v) const {
  if (!contains(v)) throw DimensionError("coordinates: vector not in subspace");
  Vec c(pivots_.size());
  for (std::size_t k = 0; k < pivots_.size(); ++k) c[k] = v[pivots_[k]];
  return c;
}

Matrix Subspace::annihilator() const {
  auto k = kernel(basis_.rows() ? basis_ : Matrix(0, ambient_));
  return k.basis();
}

std::string Subspace::canonical_text() const {
  std::ostringstream os;
  os << "ambient=" << ambient_ << ";dim=" << dim() << ";";
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    os << "[";
    for (std::size_t j = 0; j < ambient_; ++j) os << (j ? "," : "") << to_string(basis_(i, j));
    os << "]";
  }
  return os.str();
}

Subspace subspace_sum(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) throw DimensionError("subspace_sum: ambient mismatch");
  return Subspace::span_rows(Matrix::vstack({u.basis(), v.basis()}));
}

Subspace subspace_intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) throw DimensionError("subspace_intersect: ambient mismatch");
  return kernel(Matrix::vstack({u.annihilator(), v.annihilator()}));
}

Subspace kernel(const Matrix& m) {
  auto e = rref(m);
  const std::size_t C = m.cols();
  std::vector<bool> is_piv(C, false);
  for (auto p : e.pivots) is_piv[p] = true;
  std::vector<Vec> vs;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_piv[f]) continue;
    Vec x(C);
    x[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, f);
    vs.push_back(std::move(x));
  }
  return Subspace::span(C, vs);
}

Subspace image(const Matrix& m) { return Subspace::span_rows(m.transpose()); }

Subspace preimage(const Matrix& m, const Subspace& w) {
  if (w.ambient_dim() != m.rows()) throw DimensionError("preimage: shape mismatch");
  Matrix ann = w.annihilator();
  if (ann.rows() == 0) return Subspace::full(m.cols());
  return kernel(ann * m);
}

Subspace map_subspace(const Matrix& m, const Subspace& u) {
  if (u.ambient_dim() != m.cols()) throw DimensionError("map_subspace: shape mismatch");
  if (u.dim() == 0) return Subspace::zero(m.rows());
  return image(m * u.basis().transpose());
}

Quotient::Quotient(Subspace sub) : sub_(std::move(sub)) {
  std::vector<bool> is_piv(sub_.ambient_dim(), false);
  for (auto p : sub_.pivots()) is_piv[p] = true;
  for (std::size_t j = 0; j < is_piv.size(); ++j)
    if (!is_piv[j]) free_.push_back(j);
}

Vec Quotient::project(const Vec& v) const {
  Vec r = sub_.reduce(v);
  Vec q(free_.size());
  for (std::size_t k = 0; k < free_.size(); ++k) q[k] = r[free_[k]];
  return q;
}

Vec Quotient::lift(const Vec& q) const {
  if (q.size() != free_.size()) throw DimensionError("lift: size mismatch");
  Vec v(sub_.ambient_dim());
  for (std::size_t k = 0; k < free_.size(); ++k) v[free_[k]] = q[k];
  return v;
}

Matrix Quotient::matrix() const {
  Matrix m(dim(), ambient_dim());
  for (std::size_t j = 0; j < ambient_dim(); ++j) {
    Vec c = project(unit_vec(ambient_dim(), j));
    for (std::size_t i = 0; i < dim(); ++i) m(i, j) = c[i];
  }
  return m;
}

Flag::Flag(std::vector<Subspace> steps) : steps_(std::move(steps)) {
  n_ = steps_.empty() ? 0 : steps_[0].ambient_dim();
  if (steps_.size() != n_) throw DimensionError("flag needs exactly n steps");
  for (std::size_t i = 0; i < n_; ++i) {
    if (steps_[i].ambient_dim() != n_ || steps_[i].dim() != i + 1)
      throw DimensionError("flag step " + std::to_string(i + 1) + " has wrong dimension");
    if (i > 0 && !steps_[i].contains(steps_[i - 1])) throw DimensionError("flag steps are not nested");
  }
}

bool general_position(const Flag& f, const Flag& g) {
  const std::size_t n = f.ambient_dim();
  if (g.ambient_dim() != n) throw DimensionError("general_position: ambient mismatch");
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t expect = i + j > n ? i + j - n : 0;
      if (subspace_intersect(f.step(i), g.step(j)).dim() != expect) return false;
    }
  return true;
}

}  // namespace phimod
