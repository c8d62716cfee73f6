#include "hsplab/group.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

namespace hsplab {

namespace {

int parse_int(std::string_view s, std::size_t& pos) {
  int value = 0;
  const char* begin = s.data() + pos;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr == begin)
    throw Error("group spec: expected an integer in '" + std::string(s) + "'");
  pos += static_cast<std::size_t>(ptr - begin);
  return value;
}

GroupTable parse_at(std::string_view s, std::size_t& pos) {
  auto starts_with = [&](std::string_view kw) {
    if (s.substr(pos, kw.size()) != kw) return false;
    pos += kw.size();
    return true;
  };
  if (starts_with("cyclic:")) return GroupTable::cyclic(parse_int(s, pos));
  if (starts_with("dihedral:")) return GroupTable::dihedral(parse_int(s, pos));
  if (starts_with("symmetric:")) return GroupTable::symmetric(parse_int(s, pos));
  if (starts_with("product:")) {
    GroupTable first = parse_at(s, pos);
    if (pos >= s.size() || s[pos] != ',')
      throw Error("group spec: product needs two comma-separated factors");
    ++pos;
    GroupTable second = parse_at(s, pos);
    return GroupTable::product(first, second);
  }
  throw Error("group spec: unknown constructor in '" + std::string(s) + "'");
}

}  // namespace

GroupTable::GroupTable(std::string label, int order, std::vector<int> table,
                       Kind kind, int param)
    : label_(std::move(label)), order_(order), table_(std::move(table)),
      kind_(kind), param_(param) {
  if (order_ < 1) throw Error("group order must be at least 1");
  if (order_ > kMaxGroupOrder)
    throw Error("group order " + std::to_string(order_) + " exceeds the cap of " +
                std::to_string(kMaxGroupOrder));
  if (table_.size() != static_cast<std::size_t>(order_) * order_)
    throw Error("multiplication table has the wrong size");
  for (int v : table_)
    if (v < 0 || v >= order_) throw Error("multiplication table entry out of range");

  for (int e = 0; e < order_; ++e) {
    bool ok = true;
    for (int g = 0; g < order_ && ok; ++g)
      ok = mul(e, g) == g && mul(g, e) == g;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw Error("multiplication table has no identity");

  inverse_.assign(order_, -1);
  for (int g = 0; g < order_; ++g) {
    for (int h = 0; h < order_; ++h) {
      if (mul(g, h) == identity_ && mul(h, g) == identity_) {
        inverse_[g] = h;
        break;
      }
    }
    if (inverse_[g] < 0)
      throw Error("element " + std::to_string(g) + " has no inverse");
  }

  // Exhaustive associativity; the order cap keeps this at <= 120^3 lookups.
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      for (int c = 0; c < order_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw Error("multiplication table is not associative");

  abelian_ = true;
  for (int a = 0; a < order_ && abelian_; ++a)
    for (int b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) {
        abelian_ = false;
        break;
      }
}

GroupTable GroupTable::cyclic(int n) {
  if (n < 1) throw Error("cyclic: n must be at least 1");
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
  return GroupTable("cyclic:" + std::to_string(n), n, std::move(table), Kind::Cyclic, n);
}

GroupTable GroupTable::dihedral(int n) {
  if (n < 1) throw Error("dihedral: n must be at least 1");
  const int order = 2 * n;
  std::vector<int> table(static_cast<std::size_t>(order) * order);
  auto idx = [n](bool refl, int a) { return (refl ? n : 0) + ((a % n) + n) % n; };
  for (int x = 0; x < order; ++x) {
    const bool xr = x >= n;
    const int a = xr ? x - n : x;
    for (int y = 0; y < order; ++y) {
      const bool yr = y >= n;
      const int b = yr ? y - n : y;
      // r^a s r^b = r^{a-b} s and s s = e give the four sign cases.
      int value;
      if (!xr && !yr) value = idx(false, a + b);
      else if (!xr && yr) value = idx(true, a + b);
      else if (xr && !yr) value = idx(true, a - b);
      else value = idx(false, a - b);
      table[static_cast<std::size_t>(x) * order + y] = value;
    }
  }
  return GroupTable("dihedral:" + std::to_string(n), order, std::move(table),
                    Kind::Dihedral, n);
}

std::vector<std::vector<int>> symmetric_one_line_elements(int n) {
  if (n < 1 || n > 5) throw Error("symmetric: n must be between 1 and 5");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int symmetric_index(std::span<const int> one_line) {
  const int n = static_cast<int>(one_line.size());
  const auto elems = symmetric_one_line_elements(n);
  std::vector<int> key(one_line.begin(), one_line.end());
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (elems[i] == key) return static_cast<int>(i);
  throw Error("not a permutation of 0..n-1");
}

GroupTable GroupTable::symmetric(int n) {
  const auto elems = symmetric_one_line_elements(n);
  const int order = static_cast<int>(elems.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < order; ++i) index[elems[i]] = i;
  std::vector<int> table(static_cast<std::size_t>(order) * order);
  std::vector<int> comp(n);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      for (int i = 0; i < n; ++i) comp[i] = elems[a][elems[b][i]];
      table[static_cast<std::size_t>(a) * order + b] = index.at(comp);
    }
  return GroupTable("symmetric:" + std::to_string(n), order, std::move(table),
                    Kind::Symmetric, n);
}

GroupTable GroupTable::product(const GroupTable& g1, const GroupTable& g2) {
  const long long order = static_cast<long long>(g1.order()) * g2.order();
  if (order > kMaxGroupOrder)
    throw Error("product order " + std::to_string(order) + " exceeds the cap of " +
                std::to_string(kMaxGroupOrder));
  const int n1 = g1.order(), n2 = g2.order(), n = static_cast<int>(order);
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int a1 = 0; a1 < n1; ++a1)
    for (int a2 = 0; a2 < n2; ++a2)
      for (int b1 = 0; b1 < n1; ++b1)
        for (int b2 = 0; b2 < n2; ++b2) {
          const int x = a1 * n2 + a2;
          const int y = b1 * n2 + b2;
          table[static_cast<std::size_t>(x) * n + y] = g1.mul(a1, b1) * n2 + g2.mul(a2, b2);
        }
  return GroupTable("product:" + g1.label() + "," + g2.label(), n, std::move(table),
                    Kind::Product, 0);
}

GroupTable GroupTable::parse(std::string_view spec) {
  std::size_t pos = 0;
  GroupTable g = parse_at(spec, pos);
  if (pos != spec.size())
    throw Error("group spec: trailing characters in '" + std::string(spec) + "'");
  return g;
}

GroupTable build_group(std::string_view spec) { return GroupTable::parse(spec); }

int GroupTable::element_order(int g) const {
  if (g < 0 || g >= order_) throw Error("element index out of range");
  int k = 1;
  int p = g;
  while (p != identity_) {
    p = mul(p, g);
    ++k;
  }
  return k;
}

Subgroup::Subgroup(const GroupTable& parent, std::vector<int> elements)
    : parent_(&parent), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.empty()) throw Error("subgroup must be nonempty");
  member_.assign(parent.order(), 0);
  for (int g : elements_) {
    if (g < 0 || g >= parent.order()) throw Error("subgroup element out of range");
    member_[g] = 1;
  }
  if (!member_[parent.identity()]) throw Error("subgroup must contain the identity");
  // Closure under multiplication implies closure under inverses for a finite
  // subset, so this check certifies the subgroup axioms.
  for (int a : elements_)
    for (int b : elements_)
      if (!member_[parent.mul(a, b)])
        throw Error("element set is not closed under multiplication");
}

Subgroup subgroup_closure(const GroupTable& g, std::span<const int> generators) {
  std::vector<char> in(g.order(), 0);
  std::vector<int> members{g.identity()};
  in[g.identity()] = 1;
  for (int x : generators) {
    if (x < 0 || x >= g.order()) throw Error("generator index out of range");
    if (!in[x]) {
      in[x] = 1;
      members.push_back(x);
    }
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<int> snapshot = members;
    for (int a : snapshot)
      for (int b : snapshot) {
        const int p = g.mul(a, b);
        if (!in[p]) {
          in[p] = 1;
          members.push_back(p);
          grew = true;
        }
      }
  }
  return Subgroup(g, std::move(members));
}

namespace {

void require_same_parent(const GroupTable& g, const Subgroup& h) {
  if (&h.parent() != &g)
    throw Error("subgroup does not belong to this group table");
}

}  // namespace

CosetList left_cosets(const GroupTable& g, const Subgroup& h) {
  require_same_parent(g, h);
  std::vector<int> coset_of(g.order(), -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (coset_of[x] >= 0) continue;
    const int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int s : h.elements()) coset_of[g.mul(x, s)] = c;
  }
  return CosetList{h, std::move(reps), std::move(coset_of)};
}

Subgroup conjugate_subgroup(const GroupTable& g, const Subgroup& h, int z) {
  require_same_parent(g, h);
  if (z < 0 || z >= g.order()) throw Error("element index out of range");
  std::vector<int> conj;
  conj.reserve(h.elements().size());
  const int zi = g.inv(z);
  for (int s : h.elements()) conj.push_back(g.mul(g.mul(z, s), zi));
  return Subgroup(g, std::move(conj));
}

SubgroupFamily conjugacy_family(const GroupTable& g, const Subgroup& h) {
  require_same_parent(g, h);
  SubgroupFamily family;
  for (int z = 0; z < g.order(); ++z) {
    Subgroup c = conjugate_subgroup(g, h, z);
    bool seen = false;
    for (const Subgroup& m : family.members)
      if (m.same_elements(c)) {
        seen = true;
        break;
      }
    if (!seen) family.members.push_back(std::move(c));
  }
  return family;
}

Subgroup normalizer(const GroupTable& g, const Subgroup& h) {
  require_same_parent(g, h);
  std::vector<int> elems;
  for (int z = 0; z < g.order(); ++z)
    if (conjugate_subgroup(g, h, z).same_elements(h)) elems.push_back(z);
  return Subgroup(g, std::move(elems));
}

}  // namespace hsplab
