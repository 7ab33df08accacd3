#include "soergel/realization.hpp"

#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

Realization Realization::geometric(const CoxeterSystem& W, Field f) {
  Realization rz;
  rz.W = &W;
  rz.field = f;
  rz.dim = W.rank();
  const int r = rz.dim;
  rz.coroot.assign(r, std::vector<Scalar>(r, Scalar(f)));
  rz.root.assign(r, std::vector<Scalar>(r, Scalar(f)));
  for (int s = 0; s < r; ++s) rz.coroot[s][s] = Scalar(f, 1);
  for (int t = 0; t < r; ++t) {
    for (int s = 0; s < r; ++s) {
      // root[t][s] = <alpha_s^vee, alpha_t> since coroots are the basis
      Scalar c(f);
      const int m = W.coxeter_matrix()[s][t];
      if (s == t) {
        c = Scalar(f, 2);
      } else if (m == 2) {
        // zero
      } else if (m == 3) {
        c = Scalar(f, -1);
      } else if (m == 4 || m == 6) {
        // integral pairings: the lower-numbered generator sees -1, the
        // higher-numbered one sees -m/2 (product 4 cos^2(pi/m))
        c = (s < t) ? Scalar(f, -1) : Scalar(f, -m / 2);
      } else if (m == 5) {
        if (f.kind != FieldKind::Quadratic || f.param != 5)
          throw InexpressibleCosine("bond of order 5 needs sqrt(5) in the field (use Qsqrt:5)");
        // -(1 + sqrt 5)/2 = -2 cos(pi/5)
        c = Scalar(f, mpq_class(-1, 2), mpq_class(-1, 2));
      } else {
        std::ostringstream os;
        os << "no expression for 2*cos(pi/" << m << ") in field " << f.tag();
        throw InexpressibleCosine(os.str());
      }
      rz.root[t][s] = c;
    }
  }
  rz.validate();
  return rz;
}

Realization Realization::dual() const {
  Realization rz = *this;
  std::swap(rz.coroot, rz.root);
  return rz;
}

Scalar Realization::cartan(int s, int t) const {
  Scalar c(field);
  for (int j = 0; j < dim; ++j) c = c + coroot[s][j] * root[t][j];
  return c;
}

ScalarMat Realization::gen_matrix(int s) const {
  // s(e_j) = e_j - <e_j, alpha_s> alpha_s^vee = e_j - root[s][j] alpha_s^vee
  ScalarMat m = ScalarMat::identity(field, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) m.at(i, j) = m.at(i, j) - root[s][j] * coroot[s][i];
  return m;
}

ScalarMat Realization::matrix_of(int w) const {
  ScalarMat m = ScalarMat::identity(field, dim);
  for (int s : W->canonical_word(w)) m = m * gen_matrix(s);
  return m;
}

Poly Realization::root_poly(int s) const {
  Poly p(field, dim);
  for (int j = 0; j < dim; ++j) {
    if (!root[s][j].is_zero()) p = p + Poly::variable(field, dim, j) * root[s][j];
  }
  return p;
}

Poly Realization::apply_gen(int s, const Poly& f) const {
  // x_j -> x_j - coroot[s][j] alpha_s
  std::vector<Poly> images;
  images.reserve(dim);
  const Poly alpha = root_poly(s);
  for (int j = 0; j < dim; ++j) {
    Poly im = Poly::variable(field, dim, j);
    if (!coroot[s][j].is_zero()) im = im - alpha * coroot[s][j];
    images.push_back(std::move(im));
  }
  return f.substitute(images);
}

Poly Realization::apply_word(const Word& w, const Poly& f) const {
  // (s_1 ... s_k)(f) = s_1(s_2(...(f)))
  Poly g = f;
  for (auto it = w.rbegin(); it != w.rend(); ++it) g = apply_gen(*it, g);
  return g;
}

Poly Realization::demazure(int s, const Poly& f) const {
  const Poly num = f - apply_gen(s, f);
  return num.divide_by_linear(root[s]);
}

std::pair<Poly, Poly> Realization::split(int s, const Poly& f) const {
  const Poly q = demazure(s, f);
  const Scalar half = Scalar(field, 2).inv();
  const Poly p = f - q * root_poly(s) * half;
  return {p, q};
}

void Realization::validate() const {
  check(W != nullptr && dim > 0, "realization needs a group and a positive dimension");
  if (field.characteristic() == 2) throw BadCharacteristic("characteristic 2 breaks alpha/2 splittings");
  const int r = W->rank();
  for (int s = 0; s < r; ++s) {
    if (!(cartan(s, s) == Scalar(field, 2)))
      throw ConfigError("realization: <alpha_s^vee, alpha_s> must be 2");
  }
  for (int s = 0; s < r; ++s) {
    for (int t = 0; t <= s; ++t) {
      const int m = W->coxeter_matrix()[s][t];
      ScalarMat prod = ScalarMat::identity(field, dim);
      const ScalarMat ms = gen_matrix(s), mt = gen_matrix(t);
      for (int k = 0; k < m; ++k) prod = prod * ms * mt;
      if (!prod.is_identity()) {
        std::ostringstream os;
        os << "realization: braid relation (" << s << "," << t << ")^" << m << " fails";
        throw ConfigError(os.str());
      }
    }
  }
}

FaithfulnessReport reflection_faithful(const Realization& rz) {
  FaithfulnessReport rep;
  const CoxeterSystem& W = *rz.W;
  const ScalarMat id = ScalarMat::identity(rz.field, rz.dim);
  for (int w = 1; w < W.order(); ++w) {
    const ScalarMat diff = rz.matrix_of(w) - id;
    const int rk = rank(diff);
    if (rk == 0) {
      rep.faithful = false;
      rep.witness = w;
      rep.reason = "acts trivially";
      return rep;
    }
    const bool refl = W.is_reflection(w);
    if (refl && rk != 1) {
      rep.faithful = false;
      rep.witness = w;
      rep.reason = "reflection without a fixed hyperplane";
      return rep;
    }
    if (!refl && rk == 1) {
      rep.faithful = false;
      rep.witness = w;
      rep.reason = "non-reflection fixing a hyperplane";
      return rep;
    }
  }
  return rep;
}

std::optional<ScalarMat> realization_isomorphism(const Realization& a, const Realization& b) {
  if (a.W != b.W || !(a.field == b.field) || a.dim != b.dim) return std::nullopt;
  const int n = a.dim, r = a.W->rank();
  const Field f = a.field;
  // unknowns: entries P[i][j], index i*n+j
  std::vector<SpRow> rows;
  std::vector<Scalar> rhs;
  // P coroot_a[s] = coroot_b[s]
  for (int s = 0; s < r; ++s) {
    for (int i = 0; i < n; ++i) {
      SpRow row;
      for (int j = 0; j < n; ++j)
        if (!a.coroot[s][j].is_zero()) row.emplace_back(i * n + j, a.coroot[s][j]);
      rows.push_back(std::move(row));
      rhs.push_back(b.coroot[s][i]);
    }
  }
  // P^T root_b[s] = root_a[s]  i.e.  sum_i P[i][j] root_b[s][i] = root_a[s][j]
  for (int s = 0; s < r; ++s) {
    for (int j = 0; j < n; ++j) {
      SpRow row;
      for (int i = 0; i < n; ++i)
        if (!b.root[s][i].is_zero()) row.emplace_back(i * n + j, b.root[s][i]);
      rows.push_back(std::move(row));
      rhs.push_back(a.root[s][j]);
    }
  }
  auto sol = sp_solve(f, n * n, rows, rhs);
  if (!sol) return std::nullopt;
  ScalarMat P(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P.at(i, j) = (*sol)[i * n + j];
  if (!inverse(P)) return std::nullopt;
  return P;
}

} // namespace soergel
