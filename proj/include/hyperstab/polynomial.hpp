#ifndef HYPERSTAB_POLYNOMIAL_HPP
#define HYPERSTAB_POLYNOMIAL_HPP

#include "hyperstab/linalg.hpp"
#include "hyperstab/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hyperstab {

/// Exponent vector (e_0, ..., e_n) of a monomial x_0^{e_0} ... x_n^{e_n}.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
    for (int e : exps_)
      if (e < 0) throw std::invalid_argument("negative exponent");
  }
  static Monomial one(std::size_t vars) { return Monomial(std::vector<int>(vars, 0)); }
  static Monomial variable(std::size_t vars, std::size_t i, int power = 1) {
    std::vector<int> e(vars, 0);
    e.at(i) = power;
    return Monomial(std::move(e));
  }

  const std::vector<int>& exponents() const { return exps_; }
  std::size_t num_vars() const { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  int degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.exps_.size() != b.exps_.size()) throw std::invalid_argument("monomial arity mismatch");
    std::vector<int> e(a.exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exps_[i] + b.exps_[i];
    return Monomial(std::move(e));
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<int> exps_;
};

/// Graded lexicographic order, largest first: higher total degree precedes,
/// ties broken by the lexicographically larger exponent vector.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.exponents() > b.exponents();
  }
};

/// Sparse multivariate polynomial over Q in a fixed number of variables.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexDescending>;

  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
    if (num_vars == 0) throw std::invalid_argument("polynomial needs at least one variable");
  }

  static Polynomial constant(std::size_t vars, const Rational& c) {
    Polynomial p(vars);
    p.add_term(Monomial::one(vars), c);
    return p;
  }
  static Polynomial variable(std::size_t vars, std::size_t i) {
    Polynomial p(vars);
    p.add_term(Monomial::variable(vars, i), Rational(1));
    return p;
  }
  static Polynomial monomial(const Monomial& m, const Rational& c = Rational(1)) {
    Polynomial p(m.num_vars());
    p.add_term(m, c);
    return p;
  }

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Monomial& m, const Rational& c) {
    if (m.num_vars() != num_vars_) throw std::invalid_argument("monomial arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Total degree when homogeneous (the zero polynomial is not homogeneous).
  std::optional<int> homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_)
      if (m.degree() != d) return std::nullopt;
    return d;
  }
  bool is_homogeneous() const { return homogeneous_degree().has_value(); }

  int max_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }
  int min_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = (d < 0) ? m.degree() : std::min(d, m.degree());
    return d;
  }

  bool uses_variable(std::size_t i) const {
    for (const auto& [m, c] : terms_)
      if (m[i] > 0) return true;
    return false;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, Rational(-c));
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial r(a.num_vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, Rational(ca * cb));
    return r;
  }
  friend Polynomial operator*(const Rational& s, const Polynomial& p) {
    Polynomial r(p.num_vars_);
    if (s == 0) return r;
    for (const auto& [m, c] : p.terms_) r.terms_.emplace(m, Rational(s * c));
    return r;
  }
  Polynomial operator-() const { return Rational(-1) * *this; }

  Polynomial pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative power");
    Polynomial result = constant(num_vars_, Rational(1)), base = *this;
    while (k > 0) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  Rational evaluate(std::span<const Rational> x) const {
    if (x.size() != num_vars_) throw std::invalid_argument("point dimension mismatch");
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < num_vars_; ++i) {
        if (m[i] == 0) continue;
        Rational p;
        mpz_pow_ui(p.get_num_mpz_t(), x[i].get_num_mpz_t(), static_cast<unsigned long>(m[i]));
        mpz_pow_ui(p.get_den_mpz_t(), x[i].get_den_mpz_t(), static_cast<unsigned long>(m[i]));
        t *= p;
      }
      sum += t;
    }
    return sum;
  }

  Polynomial derivative(std::size_t i) const {
    if (i >= num_vars_) throw std::invalid_argument("variable index out of range");
    Polynomial r(num_vars_);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      std::vector<int> e = m.exponents();
      Rational k = c * e[i];
      --e[i];
      r.add_term(Monomial(std::move(e)), k);
    }
    return r;
  }

  /// Text in the input grammar: coefficients are integers or "(p/q)".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational a = abs(c);
      if (first) {
        if (c < 0) out << "-";
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool is_const = m.degree() == 0;
      bool unit = (a == 1);
      if (!unit || is_const) {
        if (is_integral(a))
          out << a.get_num().get_str();
        else
          out << "(" << a.get_str() << ")";
        if (!is_const) out << "*";
      }
      bool first_factor = true;
      for (std::size_t i = 0; i < num_vars_; ++i) {
        if (m[i] == 0) continue;
        if (!first_factor) out << "*";
        first_factor = false;
        out << "x" << i;
        if (m[i] > 1) out << "^" << m[i];
      }
    }
    return out.str();
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.num_vars_ != num_vars_) throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t num_vars_;
  TermMap terms_;
};

/// A point of affine space (or of projective space, given by homogeneous
/// coordinates).
struct Point {
  std::vector<Rational> coords;
  bool projective = false;

  static Point affine(std::vector<Rational> c) { return Point{std::move(c), false}; }
  static Point proj(std::vector<Rational> c) {
    bool nonzero = std::any_of(c.begin(), c.end(), [](const Rational& x) { return x != 0; });
    if (!nonzero) throw std::invalid_argument("projective point with all coordinates zero");
    return Point{std::move(c), true};
  }
  static Point origin(std::size_t n) { return affine(std::vector<Rational>(n, Rational(0))); }
  std::size_t size() const { return coords.size(); }
};

/// Invertible linear change of coordinates x -> M x.
class LinearChange {
 public:
  explicit LinearChange(Matrix m) : m_(std::move(m)) {
    for (const auto& row : m_)
      if (row.size() != m_.size()) throw std::invalid_argument("linear change must be square");
    if (m_.empty()) throw std::invalid_argument("empty linear change");
    det_ = hyperstab::determinant(m_);
    if (det_ == 0) throw std::invalid_argument("singular linear change");
  }
  static LinearChange identity(std::size_t n) { return LinearChange(identity_matrix(n)); }
  /// Sends x_i to x_{perm[i]}.
  static LinearChange permutation(std::span<const std::size_t> perm) {
    const std::size_t n = perm.size();
    Matrix m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i].at(perm[i]) = 1;
    return LinearChange(std::move(m));
  }

  const Matrix& matrix() const { return m_; }
  const Rational& determinant() const { return det_; }
  std::size_t dim() const { return m_.size(); }
  LinearChange inverse() const { return LinearChange(hyperstab::inverse(m_)); }
  /// (this ∘ other): first apply other's substitution, then this one.
  LinearChange then(const LinearChange& other) const { return LinearChange(multiply(m_, other.m_)); }
  std::vector<Rational> apply(std::span<const Rational> v) const {
    if (v.size() != m_.size()) throw std::invalid_argument("dimension mismatch");
    std::vector<Rational> r(m_.size(), Rational(0));
    for (std::size_t i = 0; i < m_.size(); ++i)
      for (std::size_t j = 0; j < m_.size(); ++j) r[i] += m_[i][j] * v[j];
    return r;
  }

 private:
  Matrix m_;
  Rational det_;
};

namespace detail {

inline Polynomial substitute_forms(const Polynomial& f, const std::vector<Polynomial>& forms,
                                   std::size_t target_vars) {
  std::vector<std::vector<Polynomial>> powers(forms.size());
  auto power = [&](std::size_t i, int k) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(target_vars, Rational(1)));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * forms[i]);
    return cache[static_cast<std::size_t>(k)];
  };
  Polynomial out(target_vars);
  for (const auto& [m, c] : f.terms()) {
    Polynomial t = Polynomial::constant(target_vars, c);
    for (std::size_t i = 0; i < m.num_vars(); ++i)
      if (m[i] > 0) t = t * power(i, m[i]);
    out += t;
  }
  return out;
}

}  // namespace detail

/// f∘g: every x_i is replaced by the linear form sum_j g_ij x_j.
inline Polynomial substitute_linear(const Polynomial& f, const LinearChange& g) {
  const std::size_t n = f.num_vars();
  if (g.dim() != n) throw std::invalid_argument("linear change dimension mismatch");
  std::vector<Polynomial> forms;
  forms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial form(n);
    for (std::size_t j = 0; j < n; ++j) form.add_term(Monomial::variable(n, j), g.matrix()[i][j]);
    forms.push_back(std::move(form));
  }
  return detail::substitute_forms(f, forms, n);
}

/// f(x + p): moves the point p to the origin.
inline Polynomial translate(const Polynomial& f, std::span<const Rational> p) {
  const std::size_t n = f.num_vars();
  if (p.size() != n) throw std::invalid_argument("point dimension mismatch");
  if (std::all_of(p.begin(), p.end(), [](const Rational& x) { return x == 0; })) return f;
  std::vector<Polynomial> forms;
  forms.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    forms.push_back(Polynomial::variable(n, i) + Polynomial::constant(n, p[i]));
  return detail::substitute_forms(f, forms, n);
}

struct Dehomogenized {
  Polynomial poly;
  std::vector<int> old_to_new;  // -1 for the variable set to 1
};

/// Affine chart x_i = 1; remaining variables keep their relative order.
inline Dehomogenized dehomogenize(const Polynomial& f, std::size_t i) {
  if (!f.is_homogeneous()) throw std::invalid_argument("dehomogenize: non-homogeneous input");
  const std::size_t n = f.num_vars();
  if (i >= n) throw std::invalid_argument("dehomogenize: variable index out of range");
  if (n < 2) throw std::invalid_argument("dehomogenize: needs at least two variables");
  std::vector<int> map(n, -1);
  int next = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) map[j] = next++;
  Polynomial out(n - 1);
  for (const auto& [m, c] : f.terms()) {
    std::vector<int> e(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) e[static_cast<std::size_t>(map[j])] = m[j];
    out.add_term(Monomial(std::move(e)), c);
  }
  return {std::move(out), std::move(map)};
}

struct JacobianValue {
  Rational value;
  std::vector<Rational> gradient;
  bool singular() const {
    return value == 0 &&
           std::all_of(gradient.begin(), gradient.end(), [](const Rational& g) { return g == 0; });
  }
};

inline void require_affine(const Polynomial& f, const Point& p) {
  if (p.projective) throw std::invalid_argument("expected an affine point");
  if (p.size() != f.num_vars()) throw std::invalid_argument("point dimension mismatch");
}

inline JacobianValue jacobian_at(const Polynomial& f, const Point& p) {
  require_affine(f, p);
  JacobianValue j{f.evaluate(p.coords), {}};
  for (std::size_t i = 0; i < f.num_vars(); ++i) j.gradient.push_back(f.derivative(i).evaluate(p.coords));
  return j;
}

/// Order of vanishing of f at p; zero when f(p) != 0.
inline int multiplicity_at(const Polynomial& f, const Point& p) {
  require_affine(f, p);
  if (f.is_zero()) throw std::invalid_argument("multiplicity of the zero polynomial");
  return translate(f, p.coords).min_degree();
}

inline Matrix hessian_at(const Polynomial& f, const Point& p) {
  require_affine(f, p);
  const std::size_t n = f.num_vars();
  Matrix h(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial di = f.derivative(i);
    for (std::size_t j = i; j < n; ++j) {
      h[i][j] = di.derivative(j).evaluate(p.coords);
      h[j][i] = h[i][j];
    }
  }
  return h;
}

inline std::size_t hessian_rank_at(const Polynomial& f, const Point& p) {
  return rank_fraction_free(hessian_at(f, p));
}

/// One connected block of the variable-interaction graph.
struct TsBlock {
  std::vector<std::size_t> vars;  // ascending
  Polynomial poly;                // terms of f using these variables, in f's ambient variables
};

struct TsDecomposition {
  std::vector<TsBlock> blocks;       // ordered by smallest variable
  std::vector<std::size_t> unused;   // variables not occurring in f
  Rational constant = 0;             // constant term of f, if any
};

/// Splits f into a sum of polynomials in pairwise disjoint sets of variables.
inline TsDecomposition ts_components(const Polynomial& f) {
  const std::size_t n = f.num_vars();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(n, false);
  for (const auto& [m, c] : f.terms()) {
    std::size_t first = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i] == 0) continue;
      used[i] = true;
      if (first == n)
        first = i;
      else
        parent[find(i)] = find(first);
    }
  }
  TsDecomposition out;
  std::map<std::size_t, std::size_t> root_to_block;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) {
      out.unused.push_back(i);
      continue;
    }
    auto r = find(i);
    auto it = root_to_block.find(r);
    if (it == root_to_block.end()) {
      it = root_to_block.emplace(r, out.blocks.size()).first;
      out.blocks.push_back(TsBlock{{}, Polynomial(n)});
    }
    out.blocks[it->second].vars.push_back(i);
  }
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() == 0) {
      out.constant += c;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (m[i] > 0) {
        out.blocks[root_to_block.at(find(i))].poly.add_term(m, c);
        break;
      }
  }
  return out;
}

/// Restricts a polynomial that only involves `vars` to those variables,
/// renumbered 0..k-1 in the given order.
inline Polynomial compress(const Polynomial& f, std::span<const std::size_t> vars) {
  Polynomial out(vars.size());
  for (const auto& [m, c] : f.terms()) {
    std::vector<int> e(vars.size());
    int kept = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      e[k] = m[vars[k]];
      kept += e[k];
    }
    if (kept != m.degree()) throw std::invalid_argument("compress: polynomial uses other variables");
    out.add_term(Monomial(std::move(e)), c);
  }
  return out;
}

}  // namespace hyperstab

#endif  // HYPERSTAB_POLYNOMIAL_HPP
