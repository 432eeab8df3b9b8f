#include "flowcat/homology.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace flowcat {

std::vector<int> ChainComplex::basis_in_degree(int k) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (degrees[i] == k) out.push_back(i);
  return out;
}

std::vector<int> ChainComplex::degrees_present() const {
  std::set<int> s(degrees.begin(), degrees.end());
  return {s.begin(), s.end()};
}

IntMatrix ChainComplex::block(int k) const { return d.submatrix(basis_in_degree(k - 1), basis_in_degree(k)); }

HomologyGroup HomologyResult::at(int k) const {
  auto it = groups.find(k);
  return it == groups.end() ? HomologyGroup{} : it->second;
}

std::string format_group(const HomologyGroup& g, Ring ring) {
  std::vector<std::string> parts;
  const std::string base = ring == Ring::Z ? "Z" : "Z/2";
  if (g.rank == 1) parts.push_back(base);
  else if (g.rank > 1) parts.push_back(base + "^" + std::to_string(g.rank));
  for (const auto& t : g.torsion) parts.push_back("Z/" + t.str());
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

std::string format_homology(const HomologyResult& h) {
  std::ostringstream os;
  if (h.groups.empty()) return "all zero";
  bool first = true;
  for (const auto& [k, g] : h.groups) {
    os << (first ? "" : ", ") << "H" << k << " = " << format_group(g, h.ring);
    first = false;
  }
  return os.str();
}

namespace {

IntMatrix in_ring(const IntMatrix& m, Ring r) { return r == Ring::Z2 ? m.mod2() : m; }

}  // namespace

ChainComplex make_complex(Ring ring, std::vector<std::string> labels, std::vector<int> degrees, IntMatrix d) {
  if (labels.size() != degrees.size() || d.rows() != static_cast<int>(labels.size()) || d.cols() != d.rows())
    throw Error("chain complex: inconsistent sizes");
  ChainComplex C;
  C.ring = ring;
  C.labels = std::move(labels);
  C.degrees = std::move(degrees);
  C.d = in_ring(d, ring);
  for (int i = 0; i < C.size(); ++i)
    for (int j = 0; j < C.size(); ++j)
      if (C.d(i, j) != 0 && C.degrees[i] != C.degrees[j] - 1)
        throw Error("chain complex: differential from '" + C.labels[j] + "' to '" + C.labels[i] +
                    "' does not lower degree by one");
  return C;
}

void check_d_squared(const ChainComplex& C) {
  IntMatrix dd = in_ring(C.d * C.d, C.ring);
  for (int i = 0; i < dd.rows(); ++i)
    for (int j = 0; j < dd.cols(); ++j)
      if (dd(i, j) != 0)
        throw CheckFailure("d^2 != 0 at (" + C.labels[j] + ", " + C.labels[i] + ")",
                           {"pair=(" + C.labels[j] + ", " + C.labels[i] + ")", "coefficient=" + dd(i, j).str()});
}

ChainComplex chain_complex(const FlowCategory& F, Ring ring) {
  if (F.n() != 0) throw Error("chain_complex expects a flow category");
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (const auto& o : F.sets[0]) {
    labels.push_back(o.id);
    degrees.push_back(o.dim);
  }
  ChainComplex C = make_complex(ring, labels, degrees, count_matrix(F, 1));
  check_d_squared(C);
  return C;
}

HomologyResult homology(const ChainComplex& C) {
  HomologyResult H;
  H.ring = C.ring;
  for (int k : C.degrees_present()) {
    const int nk = static_cast<int>(C.basis_in_degree(k).size());
    const IntMatrix dk = C.block(k), dk1 = C.block(k + 1);
    HomologyGroup g;
    if (C.ring == Ring::Z) {
      g.rank = nk - rank_z(dk) - rank_z(dk1);
      for (const auto& s : smith_invariants(dk1))
        if (s > 1) g.torsion.push_back(s);
    } else {
      g.rank = nk - rank_f2(dk) - rank_f2(dk1);
    }
    if (g.rank != 0 || !g.torsion.empty()) H.groups[k] = g;
  }
  return H;
}

IntMatrix chain_map(const FlowBimodule& B, Ring ring) {
  if (B.n() != 1) throw Error("chain_map expects a bimodule");
  const IntMatrix f = count_matrix(B, 3), dx = count_matrix(B, 1), dy = count_matrix(B, 2);
  IntMatrix res = in_ring(dy * f - f * dx, ring);
  if (!res.is_zero()) {
    for (int i = 0; i < res.rows(); ++i)
      for (int j = 0; j < res.cols(); ++j)
        if (res(i, j) != 0)
          throw CheckFailure("chain map identity d f = f d fails at (" + B.sets[0][j].id + ", " + B.sets[1][i].id +
                                 ")",
                             {"residual=" + format_matrix(res)});
  }
  return in_ring(f, ring);
}

ChainComplex algebraic_cone(const ChainComplex& X, const ChainComplex& Y, const IntMatrix& f) {
  if (X.ring != Y.ring) throw Error("cone: ring mismatch");
  if (f.rows() != Y.size() || f.cols() != X.size()) throw Error("cone: map has the wrong shape");
  const int nx = X.size(), ny = Y.size();
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (int i = 0; i < nx; ++i) {
    labels.push_back("X/" + X.labels[i]);
    degrees.push_back(X.degrees[i] + 1);
  }
  for (int i = 0; i < ny; ++i) {
    labels.push_back("Y/" + Y.labels[i]);
    degrees.push_back(Y.degrees[i]);
  }
  IntMatrix d(nx + ny, nx + ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j) d(i, j) = -X.d(i, j);
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) d(nx + i, j) = f(i, j);
    for (int j = 0; j < ny; ++j) d(nx + i, nx + j) = Y.d(i, j);
  }
  return make_complex(X.ring, labels, degrees, d);
}

BasisIsomorphism match_by_labels(const ChainComplex& A, const ChainComplex& B) {
  BasisIsomorphism iso;
  if (A.size() != B.size() || A.ring != B.ring) {
    iso.reason = "sizes or rings differ";
    return iso;
  }
  std::map<std::string, int> pos;
  for (int i = 0; i < B.size(); ++i) pos[B.labels[i]] = i;
  iso.target.resize(A.size());
  for (int i = 0; i < A.size(); ++i) {
    auto it = pos.find(A.labels[i]);
    if (it == pos.end()) {
      iso.reason = "label '" + A.labels[i] + "' missing";
      return iso;
    }
    iso.target[i] = it->second;
    if (A.degrees[i] != B.degrees[it->second]) {
      iso.reason = "degree of '" + A.labels[i] + "' differs";
      return iso;
    }
  }
  // signs propagated along nonzero entries
  iso.sign.assign(A.size(), 0);
  for (int s = 0; s < A.size(); ++s) {
    if (iso.sign[s] != 0) continue;
    iso.sign[s] = 1;
    std::deque<int> q{s};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v = 0; v < A.size(); ++v) {
        for (int dir = 0; dir < 2; ++dir) {
          const int r = dir ? u : v, c = dir ? v : u;
          const BigInt& a = A.d(r, c);
          const BigInt& b = B.d(iso.target[r], iso.target[c]);
          if (a == 0 && b == 0) continue;
          if (a == 0 || b == 0) {
            iso.reason = "entry (" + A.labels[c] + " -> " + A.labels[r] + ") differs";
            return iso;
          }
          int want;
          if (A.ring == Ring::Z2 || a == b) want = iso.sign[u];
          else if (a == -b) want = -iso.sign[u];
          else {
            iso.reason = "entry (" + A.labels[c] + " -> " + A.labels[r] + ") differs beyond sign";
            return iso;
          }
          if (iso.sign[v] == 0) {
            iso.sign[v] = want;
            q.push_back(v);
          } else if (iso.sign[v] != want) {
            iso.reason = "no consistent sign choice at '" + A.labels[v] + "'";
            return iso;
          }
        }
      }
    }
  }
  iso.ok = true;
  return iso;
}

namespace {

// Rows of `gens` span a subgroup of ℤ^n (or a subspace of F₂^n).
IntMatrix normal_form(const IntMatrix& gens, Ring ring, int n) {
  if (gens.rows() == 0) return IntMatrix(0, n);
  return ring == Ring::Z ? hermite_rows(gens) : rref_f2(gens);
}

IntMatrix kernel_rows(const IntMatrix& m, Ring ring) {
  return ring == Ring::Z ? kernel_basis_z(m) : kernel_basis_f2(m);
}

bool contains(const IntMatrix& lattice_nf, const IntMatrix& v, Ring ring) {
  return normal_form(vstack(lattice_nf, v), ring, v.cols()) == lattice_nf;
}

std::string vec_string(const IntMatrix& row, const std::vector<std::string>& labels, const std::vector<int>& basis) {
  std::string s;
  for (int j = 0; j < row.cols(); ++j)
    if (row(0, j) != 0) s += (s.empty() ? "" : " + ") + row(0, j).str() + "*" + labels[basis[j]];
  return s.empty() ? "0" : s;
}

}  // namespace

Report exactness_at(const ChainComplex& A, const IntMatrix& g, const ChainComplex& B, const IntMatrix& h,
                    const ChainComplex& C, const std::string& spot) {
  Report R;
  const Ring ring = B.ring;
  std::set<int> degs;
  for (int k : B.degrees_present()) degs.insert(k);
  for (int k : degs) {
    const auto bk = B.basis_in_degree(k);
    const int nb = static_cast<int>(bk.size());
    const auto ak = A.basis_in_degree(k);
    const auto ck = C.basis_in_degree(k);
    const auto ck1 = C.basis_in_degree(k + 1);
    // image: g(Z_A) + B_B
    IntMatrix za = kernel_rows(A.block(k), ring);
    IntMatrix gk = g.submatrix(bk, ak);
    IntMatrix img = (za.rows() > 0 && !ak.empty()) ? (gk * za.transpose()).transpose() : IntMatrix(0, nb);
    IntMatrix bdry = B.block(k + 1).transpose();
    IntMatrix im = normal_form(vstack(img.rows() ? img : IntMatrix(0, nb), bdry.rows() ? bdry : IntMatrix(0, nb)),
                               ring, nb);
    // kernel: {b : d b = 0, h b ∈ im d_C}
    const IntMatrix dbk = B.block(k), hk = h.submatrix(ck, bk), dck1 = C.block(k + 1);
    const int rows1 = dbk.rows(), rows2 = static_cast<int>(ck.size()), nc1 = static_cast<int>(ck1.size());
    IntMatrix M(rows1 + rows2, nb + nc1);
    for (int i = 0; i < rows1; ++i)
      for (int j = 0; j < nb; ++j) M(i, j) = dbk(i, j);
    for (int i = 0; i < rows2; ++i) {
      for (int j = 0; j < nb; ++j) M(rows1 + i, j) = hk(i, j);
      for (int j = 0; j < nc1; ++j) M(rows1 + i, nb + j) = -dck1(i, j);
    }
    IntMatrix K = kernel_rows(M, ring);
    IntMatrix proj(K.rows(), nb);
    for (int i = 0; i < K.rows(); ++i)
      for (int j = 0; j < nb; ++j) proj(i, j) = K(i, j);
    IntMatrix ker = normal_form(proj, ring, nb);
    if (ker == im) continue;
    std::string witness;
    for (int i = 0; i < ker.rows() && witness.empty(); ++i) {
      IntMatrix v(1, nb);
      for (int j = 0; j < nb; ++j) v(0, j) = ker(i, j);
      if (!contains(im, v, ring)) witness = "class " + vec_string(v, B.labels, bk) + " is in the kernel but not the image";
    }
    for (int i = 0; i < im.rows() && witness.empty(); ++i) {
      IntMatrix v(1, nb);
      for (int j = 0; j < nb; ++j) v(0, j) = im(i, j);
      if (!contains(ker, v, ring)) witness = "class " + vec_string(v, B.labels, bk) + " is in the image but not the kernel";
    }
    R.fail("exactness fails at " + spot + " in degree " + std::to_string(k) + ": " + witness);
  }
  return R;
}

LesReport les_check(const FlowBimodule& B, Ring ring) {
  LesReport out;
  const FlowCategory X = endpoint(B, 0), Y = endpoint(B, 1);
  const ConeResult cr = cone(B);
  const ChainComplex cx = chain_complex(X, ring), cy = chain_complex(Y, ring), cc = chain_complex(cr.cone, ring);
  const ChainComplex csx = chain_complex(suspend(X, 1), ring), csy = chain_complex(suspend(Y, 1), ring);
  const IntMatrix f = chain_map(B, ring), i = chain_map(cr.inclusion, ring), p = chain_map(cr.projection, ring);
  const IntMatrix sf = chain_map(suspend(B, 1), ring);
  out.hx = homology(cx);
  out.hy = homology(cy);
  out.hc = homology(cc);
  out.report.merge(exactness_at(cx, f, cy, i, cc, "H(Y)"));
  out.report.merge(exactness_at(cy, i, cc, p, csx, "H(C)"));
  out.report.merge(exactness_at(cc, p, csx, sf, csy, "H(SX)"));
  out.report.note("H(X): " + format_homology(out.hx));
  out.report.note("H(Y): " + format_homology(out.hy));
  out.report.note("H(C): " + format_homology(out.hc));
  return out;
}

}  // namespace flowcat
