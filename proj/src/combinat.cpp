#include "phimod/combinat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace phimod {

Perm::Perm(std::vector<int> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (int x : img_) {
    if (x < 0 || x >= size() || seen[static_cast<std::size_t>(x)]) throw std::invalid_argument("not a permutation");
    seen[static_cast<std::size_t>(x)] = true;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Perm(std::move(v));
}

Perm Perm::parse(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stoi(tok) - 1);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad permutation entry '" + tok + "'");
    }
  }
  return Perm(std::move(v));
}

Perm Perm::inverse() const {
  std::vector<int> v(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) v[static_cast<std::size_t>(img_[i])] = static_cast<int>(i);
  return Perm(std::move(v));
}

Perm Perm::operator*(const Perm& o) const {
  if (o.size() != size()) throw std::invalid_argument("composing permutations of different degree");
  std::vector<int> v(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) v[i] = img_[static_cast<std::size_t>(o.img_[i])];
  return Perm(std::move(v));
}

Subset Perm::image_of(Subset s) const {
  Subset r = 0;
  for (int i = 0; i < size(); ++i)
    if (s & (1u << i)) r |= 1u << img_[static_cast<std::size_t>(i)];
  return r;
}

std::string Perm::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < img_.size(); ++i) s += (i ? "," : "") + std::to_string(img_[i] + 1);
  return s;
}

std::vector<Perm> all_perms(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  std::vector<Perm> out;
  do out.emplace_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

Perm transposition(int n, int a, int b) {
  auto v = Perm::identity(n).images();
  std::swap(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)]);
  return Perm(std::move(v));
}

int popcount(Subset s) { return __builtin_popcount(s); }

Subset initial_segment(int i) { return i >= 32 ? ~0u : ((1u << i) - 1u); }

std::vector<Subset> subsets_of_size(int n, int k) {
  std::vector<Subset> out;
  std::vector<int> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  if (k > n || k < 0) return out;
  while (true) {
    Subset s = 0;
    for (int x : c) s |= 1u << x;
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::string subset_to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (s & (1u << i)) {
      out += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
  return out + "}";
}

ParabolicShape::ParabolicShape(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  int off = 0;
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("parabolic block sizes must be positive");
    blocks_.push_back(initial_segment(off + s) & ~initial_segment(off));
    off += s;
  }
  n_ = off;
}

ParabolicShape::ParabolicShape(int n, std::vector<Subset> blocks) : n_(n), blocks_(std::move(blocks)) {
  Subset seen = 0;
  for (Subset b : blocks_) {
    if (b == 0 || (b & seen) || (b & ~initial_segment(n))) throw std::invalid_argument("blocks must be disjoint and nonempty");
    seen |= b;
    sizes_.push_back(popcount(b));
  }
  if (seen != initial_segment(n)) throw std::invalid_argument("blocks must cover {1..n}");
}

ParabolicShape ParabolicShape::parse(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      sizes.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad shape entry '" + tok + "'");
    }
  }
  return ParabolicShape(std::move(sizes));
}

int ParabolicShape::block_of(int i) const {
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (blocks_[k] & (1u << i)) return static_cast<int>(k);
  throw std::out_of_range("index not in any block");
}

bool ParabolicShape::is_standard() const { return blocks_ == ParabolicShape(sizes_).blocks_; }

std::vector<Perm> ParabolicShape::weyl_group() const {
  std::vector<Perm> out;
  for (const auto& w : all_perms(n_)) {
    bool ok = true;
    for (Subset b : blocks_) ok = ok && w.image_of(b) == b;
    if (ok) out.push_back(w);
  }
  return out;
}

long long ParabolicShape::parabolic_dim() const {
  long long d = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i)
    for (std::size_t j = i; j < sizes_.size(); ++j) d += static_cast<long long>(sizes_[i]) * sizes_[j];
  return d;
}

std::string ParabolicShape::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < sizes_.size(); ++i) s += (i ? "," : "") + std::to_string(sizes_[i]);
  return s + ")";
}

std::vector<ParabolicShape> compositions(int n) {
  std::vector<ParabolicShape> out;
  // bit k of mask set <=> a cut after position k+1
  for (Subset mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> sizes;
    int run = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (mask & (1u << k)) {
        sizes.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    sizes.push_back(run);
    out.emplace_back(std::move(sizes));
  }
  return out;
}

}  // namespace phimod
