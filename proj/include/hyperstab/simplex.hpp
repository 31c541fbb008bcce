#ifndef HYPERSTAB_SIMPLEX_HPP
#define HYPERSTAB_SIMPLEX_HPP

#include "hyperstab/rational.hpp"

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hyperstab::lp {

enum class Sense { LessEq, Equal, GreaterEq };
enum class Status { Optimal, Infeasible, Unbounded };

/// maximize objective·x  subject to  rows[i]·x (sense) rhs[i],  x >= 0.
struct Problem {
  std::vector<std::vector<Rational>> rows;
  std::vector<Sense> senses;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;

  std::size_t num_vars() const { return objective.size(); }
  void add_row(std::vector<Rational> row, Sense s, Rational b) {
    rows.push_back(std::move(row));
    senses.push_back(s);
    rhs.push_back(std::move(b));
  }
};

struct Result {
  Status status = Status::Infeasible;
  std::vector<Rational> x;  // primal solution (Optimal only)
  Rational value = 0;       // optimal objective (Optimal only)
  /// Infeasible only: a Farkas vector z with z·rows[:,j] <= 0 for every
  /// column j (slack columns included, so z respects the row senses) and
  /// z·rhs > 0.
  std::vector<Rational> farkas;
};

namespace detail {

// Dense tableau simplex with Bland's rule. Columns: structural variables,
// then one slack per inequality row, then one artificial per row.
class Tableau {
 public:
  explicit Tableau(const Problem& p) : n_(p.num_vars()), m_(p.rows.size()) {
    if (p.senses.size() != m_ || p.rhs.size() != m_) throw std::invalid_argument("malformed LP");
    std::size_t slacks = 0;
    for (auto s : p.senses)
      if (s != Sense::Equal) ++slacks;
    slack_begin_ = n_;
    art_begin_ = n_ + slacks;
    cols_ = art_begin_ + m_;
    t_.assign(m_, std::vector<Rational>(cols_ + 1, Rational(0)));
    sign_.assign(m_, 1);
    basis_.resize(m_);
    std::size_t slack = slack_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (p.rows[i].size() != n_) throw std::invalid_argument("LP row length mismatch");
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = p.rows[i][j];
      if (p.senses[i] == Sense::LessEq) t_[i][slack++] = 1;
      if (p.senses[i] == Sense::GreaterEq) t_[i][slack++] = -1;
      t_[i][cols_] = p.rhs[i];
      if (p.rhs[i] < 0) {
        sign_[i] = -1;
        for (auto& v : t_[i]) v = -v;
      }
      t_[i][art_begin_ + i] = 1;
      basis_[i] = art_begin_ + i;
    }
    row_alive_.assign(m_, true);
  }

  Result solve(const Problem& p) {
    // Phase 1: maximize -sum(artificials).
    std::vector<Rational> c1(cols_, Rational(0));
    for (std::size_t j = art_begin_; j < cols_; ++j) c1[j] = -1;
    set_objective(c1);
    run(cols_);
    Result res;
    if (obj_value_ < 0) {
      res.status = Status::Infeasible;
      res.farkas.resize(m_);
      // reduced cost of artificial i is -1 - y_i; the Farkas vector is -y.
      for (std::size_t i = 0; i < m_; ++i) {
        Rational y = Rational(-1) - obj_[art_begin_ + i];
        res.farkas[i] = Rational(-y) * sign_[i];
      }
      return res;
    }
    drive_out_artificials();
    std::vector<Rational> c2(cols_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) c2[j] = p.objective[j];
    set_objective(c2);
    if (!run(art_begin_)) {
      res.status = Status::Unbounded;
      return res;
    }
    res.status = Status::Optimal;
    res.x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (row_alive_[i] && basis_[i] < n_) res.x[basis_[i]] = t_[i][cols_];
    res.value = obj_value_;
    return res;
  }

 private:
  void set_objective(const std::vector<Rational>& c) {
    c_ = c;
    obj_.assign(cols_, Rational(0));
    obj_value_ = 0;
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (!row_alive_[i]) continue;
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= cb * t_[i][j];
      obj_value_ += cb * t_[i][cols_];
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    Rational inv = 1 / t_[r][col];
    for (auto& v : t_[r]) v *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !row_alive_[i] || t_[i][col] == 0) continue;
      Rational f = t_[i][col];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    if (obj_[col] != 0) {
      Rational f = obj_[col];
      for (std::size_t j = 0; j < cols_; ++j)
        if (t_[r][j] != 0) obj_[j] -= f * t_[r][j];
      obj_value_ += f * t_[r][cols_];
    }
    basis_[r] = col;
  }

  // Returns false when unbounded. Columns >= limit may not enter.
  bool run(std::size_t limit) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (obj_[j] > 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive_[i] || t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][cols_] / t_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      std::size_t col = art_begin_;
      for (std::size_t j = 0; j < art_begin_; ++j)
        if (t_[i][j] != 0) {
          col = j;
          break;
        }
      if (col == art_begin_)
        row_alive_[i] = false;  // redundant constraint
      else
        pivot(i, col);
    }
  }

  std::size_t n_, m_, slack_begin_ = 0, art_begin_ = 0, cols_ = 0;
  std::vector<std::vector<Rational>> t_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  std::vector<bool> row_alive_;
  std::vector<Rational> c_, obj_;
  Rational obj_value_;
};

}  // namespace detail

/// Exact two-phase simplex over Q. Bland's rule guarantees termination and
/// makes the result a deterministic function of the input.
inline Result solve(const Problem& p) {
  if (p.objective.size() != p.num_vars()) throw std::invalid_argument("malformed LP");
  detail::Tableau t(p);
  return t.solve(p);
}

}  // namespace hyperstab::lp

#endif  // HYPERSTAB_SIMPLEX_HPP
