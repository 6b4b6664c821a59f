#pragma once

#include <string>
#include <vector>

#include "doublealg/linalg.hpp"
#include "doublealg/poly_parse.hpp"
#include "doublealg/verdict.hpp"

namespace doublealg {

/// Prints Σ v_k basis_k with rational coefficients.
inline std::string format_vector(const RVector& v, const std::vector<std::string>& basis) {
  static const ChartPtr point = make_chart({});
  PolyVector p;
  for (const auto& c : v) p.push_back(Polynomial::constant(point, c));
  return format_linear(p, basis);
}

/// Prints an antisymmetric matrix B as Σ_{a<b} B[a][b] e_a ^ e_b.
inline std::string format_bivector(const RMatrix& B, const std::vector<std::string>& basis) {
  RVector v;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < B.size(); ++a)
    for (std::size_t b = a + 1; b < B.size(); ++b) {
      v.push_back(B[a][b]);
      names.push_back(basis[a] + " ^ " + basis[b]);
    }
  return format_vector(v, names);
}

/// Finite-dimensional Lie algebra over Q given by structure constants:
/// [e_i, e_j] = Σ_k c(i,j)[k] e_k.
class LieAlgebra {
 public:
  LieAlgebra() = default;
  explicit LieAlgebra(std::vector<std::string> names) : names_(std::move(names)) {
    Chart check(names_);  // validates distinct, non-empty names
    const std::size_t n = names_.size();
    c_.assign(n, std::vector<RVector>(n, RVector(n, Rational(0))));
  }

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const RVector& bracket(std::size_t i, std::size_t j) const { return c_.at(i).at(j); }

  /// Sets [e_i, e_j] = v and [e_j, e_i] = -v.
  void set_bracket(std::size_t i, std::size_t j, const RVector& v) {
    if (v.size() != dim()) throw Error("bracket value has wrong dimension");
    if (i == j) {
      for (const auto& x : v)
        if (!is_zero(x)) throw Error("bracket(" + names_[i] + "," + names_[i] + ") must vanish");
      return;
    }
    c_.at(i).at(j) = v;
    RVector neg = v;
    for (auto& x : neg) x = -x;
    c_.at(j).at(i) = neg;
  }

  RVector bracket(const RVector& x, const RVector& y) const {
    RVector out(dim(), Rational(0));
    for (std::size_t i = 0; i < dim(); ++i) {
      if (is_zero(x[i])) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (is_zero(y[j])) continue;
        Rational s = x[i] * y[j];
        for (std::size_t k = 0; k < dim(); ++k) out[k] += s * c_[i][j][k];
      }
    }
    return out;
  }

  RVector basis_vector(std::size_t i) const {
    RVector v(dim(), Rational(0));
    v.at(i) = 1;
    return v;
  }

  bool operator==(const LieAlgebra&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<RVector>> c_;
};

/// Jacobi identity on all basis triples i<j<k.
inline Verdict check_jacobi(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        auto ei = g.basis_vector(i), ej = g.basis_vector(j), ek = g.basis_vector(k);
        RVector s = g.bracket(ei, g.bracket(ej, ek));
        RVector t = g.bracket(ej, g.bracket(ek, ei));
        RVector u = g.bracket(ek, g.bracket(ei, ej));
        bool zero = true;
        for (std::size_t m = 0; m < n; ++m) {
          s[m] += t[m] + u[m];
          if (!is_zero(s[m])) zero = false;
        }
        if (!zero) {
          return Verdict::fail("jacobi",
                               "(" + g.names()[i] + ", " + g.names()[j] + ", " + g.names()[k] + ")",
                               format_vector(s, g.names()));
        }
      }
  return Verdict::ok("jacobi");
}

/// δ(e_i) = Σ_{j<k} delta(i)[j][k] e_j ∧ e_k, stored as full antisymmetric
/// matrices.
class Cobracket {
 public:
  Cobracket() = default;
  explicit Cobracket(std::size_t dim) : d_(dim, zeros(dim, dim)) {}

  std::size_t dim() const { return d_.size(); }
  const RMatrix& of(std::size_t i) const { return d_.at(i); }

  void set(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
    if (j == k) {
      if (!is_zero(v)) throw Error("cobracket component on e_j ^ e_j must vanish");
      return;
    }
    d_.at(i).at(j).at(k) = v;
    d_.at(i).at(k).at(j) = -v;
  }

  bool operator==(const Cobracket&) const = default;

 private:
  std::vector<RMatrix> d_;
};

struct Bialgebra {
  LieAlgebra algebra;
  Cobracket delta;
};

inline std::vector<std::string> dual_names(const std::vector<std::string>& names) {
  return fresh_names("eps", names.size(), names);
}

namespace detail {

inline LieAlgebra bracket_from_cobracket(const Cobracket& delta, const std::vector<std::string>& names) {
  LieAlgebra out(names);
  const std::size_t n = names.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RVector v(n, Rational(0));
      for (std::size_t k = 0; k < n; ++k) v[k] = delta.of(k)[i][j];
      out.set_bracket(i, j, v);
    }
  return out;
}

}  // namespace detail

/// Bracket on the dual space: <[eps^i, eps^j]_*, e_k> = <eps^i ^ eps^j, δ(e_k)>
/// under the determinant pairing. Throws Rejected (with the Jacobi witness)
/// when δ fails co-Jacobi.
inline LieAlgebra dual_bracket(const Bialgebra& b, std::vector<std::string> names = {}) {
  if (names.empty()) names = dual_names(b.algebra.names());
  if (b.delta.dim() != b.algebra.dim()) throw Error("cobracket dimension mismatch");
  LieAlgebra out = detail::bracket_from_cobracket(b.delta, names);
  Verdict v = check_jacobi(out);
  if (!v) {
    v.check = "co-jacobi";
    throw Rejected(v);
  }
  return out;
}

/// The dual bialgebra (g*, δ_*) where δ_* transposes the bracket of g.
inline Bialgebra dual_bialgebra(const Bialgebra& b, std::vector<std::string> names = {}) {
  if (names.empty()) names = dual_names(b.algebra.names());
  const std::size_t n = b.algebra.dim();
  Cobracket dstar(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const RVector& c = b.algebra.bracket(i, j);
      for (std::size_t k = 0; k < n; ++k) dstar.set(k, i, j, c[k]);
    }
  return {dual_bracket(b, names), dstar};
}

/// ad_x acting on an antisymmetric matrix representing a bivector.
inline RMatrix adjoint_on_bivector(const LieAlgebra& g, std::size_t i, const RMatrix& B) {
  const std::size_t n = g.dim();
  RMatrix out = zeros(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Rational s(0);
      for (std::size_t c = 0; c < n; ++c) {
        s += g.bracket(i, c)[a] * B[c][b];
        s += g.bracket(i, c)[b] * B[a][c];
      }
      out[a][b] = s;
    }
  return out;
}

/// δ([e_i,e_j]) = ad_{e_i} δ(e_j) - ad_{e_j} δ(e_i) for all i<j.
inline Verdict check_cocycle(const Bialgebra& b) {
  const LieAlgebra& g = b.algebra;
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RMatrix lhs = zeros(n, n);
      const RVector& c = g.bracket(i, j);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t bb = 0; bb < n; ++bb) lhs[a][bb] += c[k] * b.delta.of(k)[a][bb];
      RMatrix r1 = adjoint_on_bivector(g, i, b.delta.of(j));
      RMatrix r2 = adjoint_on_bivector(g, j, b.delta.of(i));
      bool zero = true;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t bb = 0; bb < n; ++bb) {
          lhs[a][bb] -= r1[a][bb] - r2[a][bb];
          if (!is_zero(lhs[a][bb])) zero = false;
        }
      if (!zero) {
        return Verdict::fail("cocycle", "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                             format_bivector(lhs, g.names()));
      }
    }
  return Verdict::ok("cocycle");
}

/// A 2n-dimensional Lie algebra with a symmetric pairing and two marked
/// subspaces, each given by a list of spanning vectors.
struct PairedAlgebra {
  LieAlgebra algebra;
  RMatrix pairing;
  RMatrix first;
  RMatrix second;
};

inline Rational pairing_of(const RMatrix& P, const RVector& x, const RVector& y) { return dot(x, apply(P, y)); }

/// Symmetric, nondegenerate pairing and complementary half-dimensional
/// marked subspaces. Throws otherwise.
inline void validate_paired(const PairedAlgebra& p) {
  const std::size_t n = p.algebra.dim();
  if (p.pairing.size() != n || cols_of(p.pairing) != n) throw Error("pairing matrix has wrong size");
  if (transpose(p.pairing) != p.pairing) throw Error("pairing matrix is not symmetric");
  if (determinant(p.pairing) == 0) throw Error("pairing matrix is degenerate");
  if (n % 2 != 0 || p.first.size() != n / 2 || p.second.size() != n / 2)
    throw Error("marked subspaces must each be spanned by dim/2 vectors");
  RMatrix all = p.first;
  all.insert(all.end(), p.second.begin(), p.second.end());
  if (rank(all) != n) throw Error("marked subspaces are not complementary");
}

/// (i) invariance, (ii) isotropy of both marked subspaces, (iii) closure
/// of both marked subspaces under the bracket. Reports the first failure.
inline Verdict check_manin(const PairedAlgebra& p) {
  validate_paired(p);
  const LieAlgebra& g = p.algebra;
  const std::size_t n = g.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        auto za = g.basis_vector(a), zb = g.basis_vector(b), zc = g.basis_vector(c);
        Rational s = pairing_of(p.pairing, g.bracket(za, zb), zc) + pairing_of(p.pairing, zb, g.bracket(za, zc));
        if (!is_zero(s)) {
          return Verdict::fail("manin.invariance",
                               "(" + g.names()[a] + ", " + g.names()[b] + ", " + g.names()[c] + ")",
                               to_string(s));
        }
      }
  const RMatrix* halves[2] = {&p.first, &p.second};
  for (int h = 0; h < 2; ++h) {
    const RMatrix& V = *halves[h];
    for (std::size_t i = 0; i < V.size(); ++i)
      for (std::size_t j = i; j < V.size(); ++j) {
        Rational s = pairing_of(p.pairing, V[i], V[j]);
        if (!is_zero(s)) {
          return Verdict::fail("manin.isotropy",
                               "subspace " + std::to_string(h + 1) + " vectors (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ")",
                               to_string(s));
        }
      }
  }
  for (int h = 0; h < 2; ++h) {
    const RMatrix& V = *halves[h];
    std::size_t r = rank(V);
    for (std::size_t i = 0; i < V.size(); ++i)
      for (std::size_t j = i + 1; j < V.size(); ++j) {
        RVector w = g.bracket(V[i], V[j]);
        RMatrix ext = V;
        ext.push_back(w);
        if (rank(ext) != r) {
          return Verdict::fail("manin.closure",
                               "subspace " + std::to_string(h + 1) + " vectors (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ")",
                               format_vector(w, g.names()));
        }
      }
  }
  return Verdict::ok("manin");
}

/// Bracket on g ⊕ g* with [X, φ] = ad*_X φ - ad*_φ X, where
/// <ad*_X ψ, Y> = -<ψ, [X, Y]>. No validity checks.
inline LieAlgebra double_bracket(const LieAlgebra& g, const LieAlgebra& gstar) {
  const std::size_t n = g.dim();
  std::vector<std::string> names = g.names();
  names.insert(names.end(), gstar.names().begin(), gstar.names().end());
  LieAlgebra d(names);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RVector v(2 * n, Rational(0)), w(2 * n, Rational(0));
      for (std::size_t k = 0; k < n; ++k) {
        v[k] = g.bracket(i, j)[k];
        w[n + k] = gstar.bracket(i, j)[k];
      }
      d.set_bracket(i, j, v);
      d.set_bracket(n + i, n + j, w);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      RVector v(2 * n, Rational(0));
      // ad*_{e_i} eps^k = -Σ_j c^k_{ij} eps^j
      for (std::size_t j = 0; j < n; ++j) v[n + j] -= g.bracket(i, j)[k];
      // -ad*_{eps^k} e_i = Σ_j c*^i_{kj} e_j
      for (std::size_t j = 0; j < n; ++j) v[j] += gstar.bracket(k, j)[i];
      d.set_bracket(i, n + k, v);
    }
  return d;
}

/// Hyperbolic pairing <X + φ, Y + ψ> = <ψ, X> + <φ, Y> on g ⊕ g*.
inline RMatrix hyperbolic_pairing(std::size_t n) {
  RMatrix P = zeros(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    P[i][n + i] = 1;
    P[n + i][i] = 1;
  }
  return P;
}

/// Drinfel'd double of a Lie bialgebra. Rejects input whose double bracket
/// violates Jacobi, with the offending basis triple as witness.
inline PairedAlgebra drinfeld_double(const Bialgebra& b) {
  Verdict base = check_jacobi(b.algebra);
  if (!base) throw Rejected(base);
  LieAlgebra gstar = dual_bracket(b);
  LieAlgebra d = double_bracket(b.algebra, gstar);
  Verdict j = check_jacobi(d);
  if (!j) {
    j.check = "double.jacobi";
    throw Rejected(j);
  }
  const std::size_t n = b.algebra.dim();
  RMatrix first = zeros(n, 2 * n), second = zeros(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    first[i][i] = 1;
    second[i][n + i] = 1;
  }
  return {d, hyperbolic_pairing(n), first, second};
}

}  // namespace doublealg
