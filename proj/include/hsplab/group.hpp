#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsplab/error.hpp"

namespace hsplab {

inline constexpr int kMaxGroupOrder = 120;

// A finite group as an explicit Cayley table over dense element indices
// 0..order-1. Construction validates the full set of group axioms
// (associativity exhaustively), so an instance is always a group. Immutable.
// Every built-in constructor places the identity at index 0.
class GroupTable {
 public:
  enum class Kind { Cyclic, Dihedral, Symmetric, Product, Custom };

  // table is row-major: table[a * order + b] = a * b.
  GroupTable(std::string label, int order, std::vector<int> table,
             Kind kind = Kind::Custom, int param = 0);

  static GroupTable cyclic(int n);
  // Order 2n: indices 0..n-1 are the rotations r^a, n..2n-1 the reflections
  // r^a s.
  static GroupTable dihedral(int n);
  // Permutations of {0..n-1} in lexicographic one-line order; composition is
  // (p * q)(i) = p(q(i)). n <= 5.
  static GroupTable symmetric(int n);
  // Pairs (a, b) with index a * |G2| + b.
  static GroupTable product(const GroupTable& g1, const GroupTable& g2);

  // Grammar: cyclic:<n> | dihedral:<n> | symmetric:<n> |
  // product:<spec>,<spec>.
  static GroupTable parse(std::string_view spec);

  int order() const { return order_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  int inv(int g) const { return inverse_[g]; }
  bool abelian() const { return abelian_; }
  int element_order(int g) const;
  Kind kind() const { return kind_; }
  int kind_param() const { return param_; }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  int order_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  int identity_ = -1;
  bool abelian_ = false;
  Kind kind_;
  int param_;
};

GroupTable build_group(std::string_view spec);

// One-line forms of the permutations of {0..n-1} in the index order used by
// GroupTable::symmetric.
std::vector<std::vector<int>> symmetric_one_line_elements(int n);
int symmetric_index(std::span<const int> one_line);

// A subgroup of a fixed parent table, stored as a sorted element list.
// Construction validates closure and the identity; the parent must outlive
// the subgroup.
class Subgroup {
 public:
  Subgroup(const GroupTable& parent, std::vector<int> elements);

  const GroupTable& parent() const { return *parent_; }
  const std::vector<int>& elements() const { return elements_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int index() const { return parent_->order() / order(); }
  bool contains(int g) const { return member_[g] != 0; }
  bool same_elements(const Subgroup& other) const { return elements_ == other.elements_; }

 private:
  const GroupTable* parent_;
  std::vector<int> elements_;
  std::vector<char> member_;
};

// Smallest subgroup containing the generators; empty list gives {identity}.
Subgroup subgroup_closure(const GroupTable& g, std::span<const int> generators);

// Left cosets xH. reps[0] is the identity; reps are the smallest unassigned
// element index in ascending scan order, so the decomposition is canonical.
struct CosetList {
  Subgroup subgroup;
  std::vector<int> reps;
  std::vector<int> coset_of;  // element index -> coset index
  int index() const { return static_cast<int>(reps.size()); }
};

CosetList left_cosets(const GroupTable& g, const Subgroup& h);

Subgroup conjugate_subgroup(const GroupTable& g, const Subgroup& h, int z);

// All distinct conjugates z H z^{-1}, ordered by first appearance as z runs
// over ascending element indices (so members[0] == H).
struct SubgroupFamily {
  std::vector<Subgroup> members;
  int size() const { return static_cast<int>(members.size()); }
};

SubgroupFamily conjugacy_family(const GroupTable& g, const Subgroup& h);

Subgroup normalizer(const GroupTable& g, const Subgroup& h);

}  // namespace hsplab
