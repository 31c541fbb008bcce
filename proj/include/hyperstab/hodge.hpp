#ifndef HYPERSTAB_HODGE_HPP
#define HYPERSTAB_HODGE_HPP

#include "hyperstab/arrangement.hpp"
#include "hyperstab/polynomial.hpp"
#include "hyperstab/rational.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hyperstab::hodge {

/// Middle Hodge numbers h^{n-1-q,q}, q = 0..n-1, of a smooth degree d
/// hypersurface in P^n.
struct HodgeVector {
  int n_ambient = 0;
  int d = 0;
  std::vector<Integer> entries;
  friend bool operator==(const HodgeVector&, const HodgeVector&) = default;
};

namespace detail {

// #{a in {0..top}^vars : sum a = target}, by dynamic programming.
inline Integer bounded_compositions(int vars, int top, int target) {
  if (target < 0) return 0;
  std::vector<Integer> ways(target + 1, Integer(0));
  ways[0] = 1;
  for (int v = 0; v < vars; ++v) {
    std::vector<Integer> next(target + 1, Integer(0));
    Integer window = 0;
    for (int s = 0; s <= target; ++s) {
      window += ways[s];
      if (s - top - 1 >= 0) window -= ways[s - top - 1];
      next[s] = window;
    }
    ways = std::move(next);
  }
  return ways[target];
}

}  // namespace detail

inline HodgeVector smooth_middle_hodge(int n, int d) {
  if (n < 2 || d < 2) throw std::invalid_argument("smooth_middle_hodge: need n >= 2, d >= 2");
  HodgeVector h{n, d, {}};
  for (int q = 0; q < n; ++q) {
    Integer c = detail::bounded_compositions(n + 1, d - 2, (q + 1) * d - (n + 1));
    if ((n - 1) % 2 == 0 && 2 * q == n - 1) c += 1;
    h.entries.push_back(c);
  }
  return h;
}

inline std::optional<int> cy_level(int n, int d) {
  if (n < 2 || d < 2) throw std::invalid_argument("cy_level: need n >= 2, d >= 2");
  if ((n + 1) % d != 0) return std::nullopt;
  return (n + 1) / d - 1;
}

/// Normal-crossing monomial block x_1*...*x_k.
struct NC {
  int vars = 0;
};
/// Cone over a smooth degree d hypersurface in P^n.
struct SmoothCone {
  int n = 0;
  int d = 0;
};
using BlockDescriptor = std::variant<NC, SmoothCone>;

inline std::string block_name(const BlockDescriptor& b) {
  if (auto* nc = std::get_if<NC>(&b)) return "NC(" + std::to_string(nc->vars) + ")";
  const auto& s = std::get<SmoothCone>(b);
  return "SmoothCone(" + std::to_string(s.n) + "," + std::to_string(s.d) + ")";
}

struct CoreDescriptor {
  int weight = 0;
  int twist = 0;
  std::string label;
  // middle Hodge numbers of each smooth block, in block order
  std::vector<HodgeVector> smooth_blocks;
};

namespace detail {

inline std::string tate(int k) { return k == 0 ? "Q" : "Q(-" + std::to_string(k) + ")"; }

inline std::string variety_name(int n, int d) {
  const int dim = n - 1;
  if (d == 3 && dim == 1) return "elliptic curve";
  if (d == 4 && dim == 2) return "K3 surface";
  static const char* degrees[] = {"", "", "quadric", "cubic", "quartic", "quintic", "sextic"};
  std::string deg = d <= 6 ? degrees[d] : "degree " + std::to_string(d);
  static const char* dims[] = {"", "curve", "surface", "threefold", "fourfold", "fivefold", "sixfold", "sevenfold"};
  std::string dn = dim <= 7 ? dims[dim] : std::to_string(dim) + "-fold";
  return deg + " " + dn;
}

}  // namespace detail

/// Core of a block sum: weights and twists add, with one extra Tate twist
/// (weight 2) per join.
inline CoreDescriptor core_of_blocks(const std::vector<BlockDescriptor>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("core_of_blocks: no blocks");
  CoreDescriptor c;
  std::vector<std::string> factors;
  for (const auto& b : blocks) {
    if (auto* nc = std::get_if<NC>(&b)) {
      if (nc->vars < 1) throw std::invalid_argument("core_of_blocks: empty NC block");
      continue;
    }
    const auto& s = std::get<SmoothCone>(b);
    if (s.n < 1 || s.d < 2) throw std::invalid_argument("core_of_blocks: bad smooth block");
    if ((s.n + 1) % s.d != 0) throw std::invalid_argument("core_of_blocks: block " + block_name(b) + " is not of CY type");
    const int mb = (s.n + 1) / s.d - 1;
    c.weight += s.n - 1;
    c.twist += mb;
    if (s.n >= 2) c.smooth_blocks.push_back(smooth_middle_hodge(s.n, s.d));
    if (s.n - 1 == 2 * mb) {
      // even-dimensional quadric: Tate class
      continue;
    }
    factors.push_back("Core(H^" + std::to_string(s.n - 1) + "(" + detail::variety_name(s.n, s.d) + "))");
  }
  const int joins = static_cast<int>(blocks.size()) - 1;
  c.weight += 2 * joins;
  c.twist += joins;
  if (factors.empty()) {
    c.label = detail::tate(c.twist);
  } else {
    std::string t;
    for (const auto& f : factors) t += (t.empty() ? "" : " x ") + f;
    c.label = joins == 0 ? t : (factors.size() > 1 ? "(" + t + ")" : t) + "(-" + std::to_string(joins) + ")";
  }
  return c;
}

/// Smallest k with N^k = 0 on the limit of any one-parameter smoothing.
inline int nilpotency_index(int n, int core_weight, int m) {
  if (core_weight < 2 * m || core_weight > n - 1) throw std::invalid_argument("nilpotency_index: weight out of range");
  const int k = (n - 1) - core_weight + 1;
  if (k > n - 2 * m) throw std::logic_error("nilpotency_index: exceeds n - 2m");
  return k;
}

inline bool maximal_degeneration_test(const CoreDescriptor& core, int m) { return core.weight == 2 * m; }

/// Reads F as a sum of NC monomial blocks and smooth cones. Fermat-type
/// blocks (sums of d-th powers) are smooth; single-variable powers x^d are
/// collected into one smooth cone.
inline std::vector<BlockDescriptor> block_descriptors(const Polynomial& F) {
  auto d = F.homogeneous_degree();
  if (!d || *d < 2) throw std::invalid_argument("block_descriptors: homogeneous input of degree >= 2 expected");
  auto ts = ts_components(F);
  if (!ts.unused.empty()) throw std::invalid_argument("block_descriptors: cone over a lower-dimensional hypersurface");
  std::vector<BlockDescriptor> out;
  int powers = 0;
  for (const auto& b : ts.blocks) {
    const int k = static_cast<int>(b.vars.size());
    const auto& terms = b.poly.terms();
    if (terms.size() == 1) {
      const Monomial& m = terms.begin()->first;
      if (k == 1) {
        ++powers;
        continue;
      }
      bool reduced = true;
      for (auto v : b.vars) reduced = reduced && m[v] == 1;
      if (reduced) {
        out.push_back(NC{k});
        continue;
      }
    }
    bool diagonal = static_cast<int>(terms.size()) == k;
    for (const auto& [m, c] : terms) {
      int nz = 0;
      for (auto v : b.vars) nz += m[v] != 0;
      diagonal = diagonal && nz == 1;
    }
    if (diagonal && k >= 2) {
      out.push_back(SmoothCone{k - 1, *d});
      continue;
    }
    throw std::invalid_argument("block_descriptors: block in x" + std::to_string(b.vars.front()) +
                                ".. is neither a normal-crossing monomial nor of Fermat type");
  }
  if (powers == 1) throw std::invalid_argument("block_descriptors: lone power x^d is not reduced");
  if (powers >= 2) out.insert(out.begin(), SmoothCone{powers - 1, *d});
  return out;
}

/// h^i(S, O_S), i = 0..dim S.
struct CohomologyRow {
  std::vector<Integer> values;
  friend bool operator==(const CohomologyRow&, const CohomologyRow&) = default;
};

namespace detail {

using SparseRow = std::map<std::size_t, Rational>;

// Incremental row echelon form over Q.
class SparseEchelon {
 public:
  bool insert(SparseRow row) {
    while (!row.empty()) {
      auto lead = row.rbegin()->first;
      auto it = pivots_.find(lead);
      if (it == pivots_.end()) {
        Rational inv = 1 / row.rbegin()->second;
        for (auto& [c, v] : row) v *= inv;
        pivots_.emplace(lead, std::move(row));
        return true;
      }
      Rational factor = row.rbegin()->second;
      for (const auto& [c, v] : it->second) {
        auto& slot = row[c];
        slot -= factor * v;
        if (slot == 0) row.erase(c);
      }
    }
    return false;
  }
  std::size_t rank() const { return pivots_.size(); }

 private:
  std::map<std::size_t, SparseRow> pivots_;
};

}  // namespace detail

enum class CohomologyMethod { Auto, Nerve, SupportComplex };

namespace detail {

// Ranks of C^j -> C^{j+1} for j = 0..top, where simplices[j] lists the
// j-simplices as sorted vertex vectors.
inline CohomologyRow cochain_cohomology(const std::vector<std::vector<std::vector<std::size_t>>>& simplices, int top) {
  std::vector<std::size_t> rank(top + 1, 0);
  for (int j = 0; j <= top; ++j) {
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < simplices[j].size(); ++i) index.emplace(simplices[j][i], i);
    SparseEchelon ech;
    for (const auto& s : simplices[j + 1]) {
      SparseRow row;
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<std::size_t> face;
        for (std::size_t t = 0; t < s.size(); ++t)
          if (t != drop) face.push_back(s[t]);
        row[index.at(face)] = drop % 2 == 0 ? 1 : -1;
      }
      ech.insert(std::move(row));
    }
    rank[j] = ech.rank();
  }
  CohomologyRow out;
  for (int j = 0; j <= top; ++j) {
    long h = static_cast<long>(simplices[j].size()) - static_cast<long>(rank[j]) - (j > 0 ? static_cast<long>(rank[j - 1]) : 0);
    out.values.push_back(Integer(h));
  }
  return out;
}

// Nerve of the cover by cells, up to dim S + 1. Returns false when more
// than `cap` simplices would be needed.
inline bool nerve_simplices(const Arrangement& S, int top, std::size_t cap,
                            std::vector<std::vector<std::vector<std::size_t>>>& simplices) {
  simplices.assign(top + 2, {});
  const std::size_t k = S.cells.size();
  std::size_t count = 0;
  std::vector<std::size_t> stack;
  std::function<bool(std::size_t, std::uint64_t)> grow = [&](std::size_t start, std::uint64_t vanish) {
    if (++count > cap) return false;
    simplices[stack.size() - 1].push_back(stack);
    if (stack.size() == static_cast<std::size_t>(top) + 2) return true;
    for (std::size_t v = start; v < k; ++v) {
      std::uint64_t u = vanish | S.cells[v];
      if (S.cell_dim(u) < 0) continue;
      stack.push_back(v);
      bool ok = grow(v + 1, u);
      stack.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  for (std::size_t v = 0; v < k; ++v) {
    stack = {v};
    if (!grow(v + 1, S.cells[v])) return false;
  }
  return true;
}

// Simplicial complex on the coordinates whose faces are the coordinate
// sets of points of S; homotopy equivalent to the nerve.
inline std::vector<std::vector<std::vector<std::size_t>>> support_simplices(const Arrangement& S, int top) {
  std::vector<std::set<std::uint64_t>> faces(top + 2);
  for (auto cell : S.cells) {
    const std::uint64_t F = S.full_mask() & ~cell;
    for (std::uint64_t sub = F; sub; sub = (sub - 1) & F) {
      const int size = std::popcount(sub);
      if (size <= top + 2) faces[size - 1].insert(sub);
    }
  }
  std::vector<std::vector<std::vector<std::size_t>>> out(top + 2);
  for (int j = 0; j <= top + 1; ++j)
    for (auto mask : faces[j]) {
      std::vector<std::size_t> v;
      for (std::size_t i = 0; i < S.num_coords; ++i)
        if (mask >> i & 1) v.push_back(i);
      out[j].push_back(std::move(v));
    }
  return out;
}

}  // namespace detail

/// h^i(S, O_S) for i = 0..dim S, as cohomology of the nerve of the cover of
/// S by its cells. Auto falls back to the coordinate support complex when
/// the nerve would exceed 200000 simplices.
inline CohomologyRow arrangement_cohomology(Arrangement S, CohomologyMethod method = CohomologyMethod::Auto) {
  S.normalize();
  if (S.empty()) return {};
  const int top = S.dim();
  std::vector<std::vector<std::vector<std::size_t>>> simplices;
  if (method != CohomologyMethod::SupportComplex) {
    const std::size_t cap = method == CohomologyMethod::Nerve ? SIZE_MAX : 200000;
    if (detail::nerve_simplices(S, top, cap, simplices)) return detail::cochain_cohomology(simplices, top);
  }
  return detail::cochain_cohomology(detail::support_simplices(S, top), top);
}

/// Row of Hodge-Du Bois numbers h^{n-1-m,i}, i = 0..n, of an m-liminal
/// degree d hypersurface in P^n with liminal locus cohomology h0S.
inline std::vector<Integer> hodge_du_bois_row(int n, int d, int m, const CohomologyRow& h0S) {
  auto level = cy_level(n, d);
  if (!level || *level != m) throw std::invalid_argument("hodge_du_bois_row: (n+1)/d != m+1");
  std::vector<Integer> row;
  for (int i = 0; i <= n; ++i) {
    const int j = i - 1 - m;
    Integer v = j >= 0 && j < static_cast<int>(h0S.values.size()) ? h0S.values[j] : Integer(0);
    if (i == n - 1 - m) v += 1;
    if (i == m + 1) v -= 1;
    if (v < 0) throw std::invalid_argument("hodge_du_bois_row: negative entry at i = " + std::to_string(i));
    row.push_back(v);
  }
  return row;
}

/// h^{n-1-m,m} of an m-rational hypersurface of CY type.
inline Integer m_rational_entry(int n, int d, int m) {
  auto level = cy_level(n, d);
  if (level != m) throw std::invalid_argument("m_rational_entry: (n+1)/d != m+1");
  return 1;
}

}  // namespace hyperstab::hodge

#endif  // HYPERSTAB_HODGE_HPP
