#ifndef HYPERSTAB_ARRANGEMENT_HPP
#define HYPERSTAB_ARRANGEMENT_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperstab {

/// A union of projective coordinate subspaces of P^{num_coords-1}. Each cell
/// is stored as the bitmask of the coordinates that vanish on it.
struct Arrangement {
  std::size_t num_coords = 0;
  std::vector<std::uint64_t> cells;

  std::uint64_t full_mask() const {
    return num_coords == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_coords) - 1;
  }
  /// Projective dimension of a cell; -1 when every coordinate vanishes.
  int cell_dim(std::uint64_t vanishing) const {
    return static_cast<int>(num_coords) - std::popcount(vanishing & full_mask()) - 1;
  }
  int dim() const {
    int d = -1;
    for (auto c : cells) d = std::max(d, cell_dim(c));
    return d;
  }
  bool empty() const { return cells.empty(); }

  /// Sorts the cells and rejects duplicates, empty cells and out-of-range bits.
  void normalize() {
    if (num_coords == 0 || num_coords > 64) throw std::invalid_argument("arrangement: 1..64 coordinates");
    for (auto c : cells) {
      if (c & ~full_mask()) throw std::invalid_argument("arrangement: coordinate out of range");
      if (cell_dim(c) < 0) throw std::invalid_argument("arrangement: empty cell");
    }
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
      throw std::invalid_argument("arrangement: duplicate cell");
  }

  /// "{x6=x7=0}" style description of a cell.
  std::string describe(std::uint64_t vanishing) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < num_coords; ++i)
      if (vanishing >> i & 1) {
        if (!first) s += "=";
        s += "x" + std::to_string(i);
        first = false;
      }
    return s + (first ? "}" : "=0}");
  }
};

}  // namespace hyperstab

#endif  // HYPERSTAB_ARRANGEMENT_HPP
