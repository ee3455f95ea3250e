#pragma once
// Permutations, subsets and ordered partitions of {1..n}.
// Internally everything is 0-based; text forms are 1-based.

#include <cstdint>
#include <string>
#include <vector>

namespace phimod {

using Subset = std::uint32_t;  // bit k set <=> element k+1 present

class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<int> images);  // images[i] = w(i), validated
  static Perm identity(int n);
  // Parse 1-based one-line notation such as "2,3,1".
  static Perm parse(const std::string& text);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return img_; }

  Perm inverse() const;
  Perm operator*(const Perm& o) const;  // (w1*w2)(i) = w1(w2(i))
  bool operator==(const Perm& o) const = default;
  auto operator<=>(const Perm& o) const = default;

  Subset image_of(Subset s) const;
  std::string to_string() const;  // 1-based one-line notation

 private:
  std::vector<int> img_;
};

// All of S_n in lexicographic order of one-line notation; identity first.
std::vector<Perm> all_perms(int n);
Perm transposition(int n, int a, int b);

int popcount(Subset s);
Subset initial_segment(int i);  // {1..i}
std::vector<Subset> subsets_of_size(int n, int k);  // lexicographic
std::string subset_to_string(Subset s);

// Ordered partition of {1..n} into nonempty blocks.
class ParabolicShape {
 public:
  ParabolicShape() = default;
  // Standard blocks: {1..n1}, {n1+1..n1+n2}, ...
  explicit ParabolicShape(std::vector<int> sizes);
  // Explicit blocks, validated to be disjoint, nonempty and covering.
  ParabolicShape(int n, std::vector<Subset> blocks);
  static ParabolicShape parse(const std::string& text);  // "2,1"

  int n() const { return n_; }
  int r() const { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<Subset>& blocks() const { return blocks_; }
  int block_of(int i) const;
  bool is_standard() const;
  // Block Weyl group W_P: permutations preserving every block.
  std::vector<Perm> weyl_group() const;
  // dim P for the standard parabolic: sum over i <= j of n_i n_j.
  long long parabolic_dim() const;
  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<int> sizes_;
  std::vector<Subset> blocks_;
};

std::vector<ParabolicShape> compositions(int n);

}  // namespace phimod
