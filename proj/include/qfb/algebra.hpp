#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qfb/matrix.hpp"

namespace qfb {

struct BadRelation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AlgebraMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InternalCheck : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Quiver {
  std::vector<std::string> vertices;
  struct Arrow {
    std::string name;
    int from = 0, to = 0;
  };
  std::vector<Arrow> arrows;

  int vertex_index(const std::string& label) const {
    for (int i = 0; i < int(vertices.size()); i++)
      if (vertices[i] == label) return i;
    throw std::invalid_argument("unknown vertex: " + label);
  }
  int arrow_index(const std::string& name) const {
    for (int i = 0; i < int(arrows.size()); i++)
      if (arrows[i].name == name) return i;
    throw std::invalid_argument("unknown arrow: " + name);
  }
  void add_arrow(const std::string& name, const std::string& from, const std::string& to) {
    arrows.push_back({name, vertex_index(from), vertex_index(to)});
  }
};

/// One summand of a relation: coeff times a path, arrows listed in traversal
/// order (first-applied arrow first, so [α,β] is the paper's βα).
template <class K>
struct RelationTerm {
  K coeff;
  std::vector<int> path;
};
template <class K>
using Relation = std::vector<RelationTerm<K>>;

/// Sparse algebra element in basis coordinates.
template <class K>
using SparseVec = std::vector<std::pair<int, K>>;

/// Finite-dimensional associative unital algebra with a bigraded basis: every
/// basis element b lies in e_t A e_s for a unique block pair (src, tgt).
/// Multiplication is in function-composition order: (x*y) acts as x after y.
template <class K>
struct Algebra {
  int dim = 0;
  int nblocks = 0;
  FieldSpec field;
  std::vector<std::string> basis_labels;
  std::vector<int> src, tgt;
  std::vector<SparseVec<K>> mult;  // [i*dim+j] = coords of b_i * b_j
  std::vector<SparseVec<K>> idem;  // complete orthogonal primitive idempotents

  struct QuiverOrigin {
    Quiver quiver;
    std::vector<Relation<K>> relations;
    std::vector<int> arrow_basis;             // basis index of each arrow
    std::vector<std::vector<int>> path_of;    // traversal arrow list per basis element
  };
  std::optional<QuiverOrigin> origin;

  const SparseVec<K>& prod(int i, int j) const { return mult[size_t(i) * dim + j]; }

  SparseVec<K> unit() const {
    std::map<int, K> acc;
    for (auto& e : idem)
      for (auto& [i, c] : e) acc[i] = (acc.count(i) ? acc[i] + c : c);
    SparseVec<K> u;
    for (auto& [i, c] : acc)
      if (!is_zero(c)) u.push_back({i, c});
    return u;
  }

  SparseVec<K> multiply(const SparseVec<K>& x, const SparseVec<K>& y) const {
    std::map<int, K> acc;
    for (auto& [i, ci] : x)
      for (auto& [j, cj] : y)
        for (auto& [k, ck] : prod(i, j)) {
          K add = ci * cj * ck;
          auto it = acc.find(k);
          if (it == acc.end())
            acc.emplace(k, add);
          else
            it->second += add;
        }
    SparseVec<K> z;
    for (auto& [k, c] : acc)
      if (!is_zero(c)) z.push_back({k, c});
    return z;
  }

  /// Matrix of left multiplication by basis element i on the algebra itself.
  Mat<K> left_mult_matrix(int i) const {
    Mat<K> m(dim, dim);
    for (int j = 0; j < dim; j++)
      for (auto& [k, c] : prod(i, j)) m.at(k, j) += c;
    return m;
  }

  void check_consistency() const;

  // lazy caches (single-threaded use)
  mutable std::shared_ptr<const std::vector<SparseVec<K>>> rad_cache;
  mutable std::shared_ptr<const Algebra<K>> op_cache;
};

template <class K>
using AlgPtr = std::shared_ptr<const Algebra<K>>;

template <class K>
void Algebra<K>::check_consistency() const {
  // bigrading of the mult table
  for (int i = 0; i < dim; i++)
    for (int j = 0; j < dim; j++) {
      auto& p = prod(i, j);
      if (src[i] != tgt[j]) {
        if (!p.empty()) throw InternalCheck("mult table violates bigrading (nonzero on mismatched blocks)");
        continue;
      }
      for (auto& [k, c] : p)
        if (src[k] != src[j] || tgt[k] != tgt[i])
          throw InternalCheck("mult table violates bigrading (product lands outside block)");
    }
  // associativity on all basis triples
  for (int i = 0; i < dim; i++)
    for (int j = 0; j < dim; j++) {
      if (src[i] != tgt[j]) continue;
      auto ij = prod(i, j);
      for (int k = 0; k < dim; k++) {
        if (src[j] != tgt[k]) continue;
        SparseVec<K> lhs = multiply(ij, {{k, scalar_one<K>()}});
        SparseVec<K> rhs = multiply({{i, scalar_one<K>()}}, prod(j, k));
        if (lhs != rhs) throw InternalCheck("associativity fails on basis triple");
      }
    }
  // idempotents: orthogonal, idempotent, bigraded, sum to a two-sided unit
  for (int a = 0; a < nblocks; a++) {
    for (auto& [i, c] : idem[a])
      if (src[i] != a || tgt[i] != a) throw InternalCheck("idempotent not supported on its own block");
    for (int b = 0; b < nblocks; b++) {
      SparseVec<K> p = multiply(idem[a], idem[b]);
      if (a == b) {
        std::map<int, K> l(p.begin(), p.end()), r(idem[a].begin(), idem[a].end());
        if (l != r) throw InternalCheck("idempotent not idempotent");
      } else if (!p.empty())
        throw InternalCheck("idempotents not orthogonal");
    }
  }
  SparseVec<K> u = unit();
  for (int i = 0; i < dim; i++) {
    SparseVec<K> bi{{i, scalar_one<K>()}};
    std::map<int, K> l, r, e;
    for (auto& [k, c] : multiply(u, bi)) l[k] = c;
    for (auto& [k, c] : multiply(bi, u)) r[k] = c;
    e[i] = scalar_one<K>();
    if (l != e || r != e) throw InternalCheck("unit is not a two-sided identity");
  }
}

namespace detail {

struct PathRec {
  int s = 0, t = 0;
  std::vector<int> arr;
};

template <class K>
struct IdealRREF {
  // sparse rows keyed by leading (largest) path index
  std::map<int, std::map<int, K>> rows;

  // subtract c * (row with leading idx); the leading entry of v must already be erased
  void apply_row(std::map<int, K>& v, const std::map<int, K>& row, const K& c) const {
    for (auto& [idx, rc] : row) {
      auto vi = v.find(idx);
      if (vi == v.end()) {
        K nc = -(c * rc);
        if (!is_zero(nc)) v.emplace(idx, std::move(nc));
      } else {
        vi->second -= c * rc;
        if (is_zero(vi->second)) v.erase(vi);
      }
    }
  }

  // reduce v in place against rows whose leading term appears in v;
  // returns true if reduced to zero
  bool reduce_full(std::map<int, K>& v) const {
    while (!v.empty()) {
      auto it = std::prev(v.end());
      auto row = rows.find(it->first);
      if (row == rows.end()) {
        // leading term untouchable; try to reduce lower terms for a canonical form
        std::vector<int> lower;
        for (auto& [idx, c] : v)
          if (idx != it->first && rows.count(idx)) lower.push_back(idx);
        if (lower.empty()) return false;
        // reduce the largest reducible lower term and loop
        int idx = *std::max_element(lower.begin(), lower.end());
        K c = v.at(idx);
        v.erase(idx);
        apply_row(v, rows.at(idx), c);
        continue;
      }
      K c = it->second;
      v.erase(it);
      apply_row(v, row->second, c);
    }
    return true;
  }

  bool reduce(std::map<int, K>& v) const { return reduce_full(v); }

  // fully reduce and insert if nonzero; returns true if a new row was added
  bool insert(std::map<int, K> v) {
    if (reduce_full(v)) return false;
    int lead = std::prev(v.end())->first;
    K inv = scalar_one<K>() / std::prev(v.end())->second;
    std::map<int, K> norm;
    for (auto& [idx, c] : v)
      if (idx != lead) norm[idx] = c * inv;
    rows.emplace(lead, std::move(norm));
    return true;
  }
};

}  // namespace detail

/// Quotient of the path algebra KQ by the two-sided ideal generated by rels.
/// Saturates the ideal degree by degree; NotAdmissible if paths survive past
/// the length cap. Basis = paths not reducible modulo the ideal.
template <class K>
AlgPtr<K> algebra_from_quiver(const Quiver& q, const std::vector<Relation<K>>& rels,
                              FieldSpec field = {}, int length_cap = 64) {
  using detail::PathRec;
  int nv = int(q.vertices.size()), na = int(q.arrows.size());
  {
    std::map<std::string, int> seen;
    for (auto& v : q.vertices)
      if (seen.count(v)) throw BadRelation("duplicate vertex label: " + v);
      else seen[v] = 1;
    std::map<std::string, int> aseen;
    for (auto& a : q.arrows) {
      if (aseen.count(a.name)) throw BadRelation("duplicate arrow name: " + a.name);
      aseen[a.name] = 1;
      if (a.from < 0 || a.from >= nv || a.to < 0 || a.to >= nv)
        throw BadRelation("arrow endpoints out of range");
    }
  }
  for (auto& r : rels) {
    if (r.empty()) throw BadRelation("empty relation");
    int s = -1, t = -1;
    for (auto& term : r) {
      if (int(term.path.size()) < 2) throw BadRelation("relation path shorter than 2 (not admissible)");
      int ps = q.arrows.at(term.path.front()).from;
      int pt = q.arrows.at(term.path.back()).to;
      for (size_t i = 0; i + 1 < term.path.size(); i++)
        if (q.arrows.at(term.path[i]).to != q.arrows.at(term.path[i + 1]).from)
          throw BadRelation("relation path not composable");
      if (s < 0) s = ps, t = pt;
      else if (s != ps || t != pt)
        throw BadRelation("non-parallel paths in one relation");
    }
  }

  // enumerate paths by length; global index order = (length, discovery order)
  std::vector<PathRec> paths;
  std::vector<std::vector<int>> by_len;  // indices per length
  std::map<std::pair<int, std::vector<int>>, int> index_of;
  auto add_path = [&](PathRec p) {
    int idx = int(paths.size());
    index_of[{p.s, p.arr}] = idx;
    if (int(by_len.size()) <= int(p.arr.size())) by_len.resize(p.arr.size() + 1);
    by_len[p.arr.size()].push_back(idx);
    paths.push_back(std::move(p));
    if (paths.size() > 200000) throw NotAdmissible("path explosion before ideal closes");
    return idx;
  };
  for (int v = 0; v < nv; v++) add_path({v, v, {}});
  for (int d = 1;; d++) {
    if (d > length_cap + 2) break;
    if (int(by_len.size()) < d || (d > 1 && by_len[d - 1].empty())) break;
    bool any = false;
    for (int pi : by_len[d - 1])
      for (int a = 0; a < na; a++)
        if (q.arrows[a].from == paths[pi].t) {
          PathRec np{paths[pi].s, q.arrows[a].to, paths[pi].arr};
          np.arr.push_back(a);
          add_path(std::move(np));
          any = true;
        }
    if (!any) break;
  }
  auto path_index = [&](int s, const std::vector<int>& arr) -> int {
    auto it = index_of.find({s, arr});
    return it == index_of.end() ? -1 : it->second;
  };

  bool homogeneous = true;
  for (auto& r : rels) {
    size_t len0 = r.front().path.size();
    for (auto& term : r)
      if (term.path.size() != len0) homogeneous = false;
  }

  // saturate the ideal: W_d = generators of degree d + arrows * W_{d-1} + W_{d-1} * arrows
  detail::IdealRREF<K> E;
  int death = -1;
  int max_len = int(by_len.size()) - 1;
  std::vector<std::vector<std::map<int, K>>> w(std::max(3, max_len + 3));
  for (auto& r : rels) {
    std::map<int, K> v;
    size_t deg = 0;
    for (auto& term : r) {
      int s = q.arrows.at(term.path.front()).from;
      int idx = path_index(s, term.path);
      if (idx < 0) throw NotAdmissible("relation path exceeds enumerated range");
      v[idx] += term.coeff;
      if (is_zero(v[idx])) v.erase(idx);
      deg = std::max(deg, term.path.size());
    }
    if (int(deg) >= int(w.size())) w.resize(deg + 1);
    if (!v.empty()) w[deg].push_back(std::move(v));
  }

  int stable_extra = 0;
  for (int d = 2; d <= length_cap + 2; d++) {
    if (d >= int(w.size())) w.resize(d + 1);
    // products of last degree's elements with arrows, both sides
    if (d >= 3)
      for (auto& v : w[d - 1]) {
        for (int a = 0; a < na; a++) {
          std::map<int, K> left, right;
          for (auto& [idx, c] : v) {
            const PathRec& p = paths[idx];
            // arrow after the path (traversal append): valid if arrow.from == p.t
            if (q.arrows[a].from == p.t) {
              std::vector<int> arr = p.arr;
              arr.push_back(a);
              int ni = path_index(p.s, arr);
              if (ni >= 0) left[ni] += c;
            }
            // arrow before the path: valid if arrow.to == p.s
            if (q.arrows[a].to == p.s) {
              std::vector<int> arr{a};
              arr.insert(arr.end(), p.arr.begin(), p.arr.end());
              int ni = path_index(q.arrows[a].from, arr);
              if (ni >= 0) right[ni] += c;
            }
          }
          for (auto* m : {&left, &right}) {
            for (auto it = m->begin(); it != m->end();)
              it = is_zero(it->second) ? m->erase(it) : std::next(it);
            if (!m->empty()) w[d].push_back(*m);
          }
        }
      }
    for (auto& v : w[d]) E.insert(v);

    // death check: every path of length d reduces to zero
    if (d <= max_len && !by_len[d].empty()) {
      bool all_die = true;
      for (int pi : by_len[d]) {
        std::map<int, K> v{{pi, scalar_one<K>()}};
        if (!E.reduce(v)) {
          all_die = false;
          break;
        }
      }
      if (all_die) {
        if (death < 0) death = d;
        if (homogeneous) break;
        if (++stable_extra >= 2) break;  // two confirming degrees for mixed-length relations
      } else {
        death = -1;
        stable_extra = 0;
      }
    } else if (d > max_len) {
      // no paths of this length at all: ideal trivially closed
      if (death < 0) death = d;
      break;
    }
  }
  if (death < 0) throw NotAdmissible("relations do not kill long paths within the length cap");

  // surviving basis: paths of length < death, not leading terms of the ideal
  std::vector<int> survivors;
  for (int len = 0; len < death && len < int(by_len.size()); len++)
    for (int pi : by_len[len])
      if (!E.rows.count(pi)) survivors.push_back(pi);

  auto alg = std::make_shared<Algebra<K>>();
  alg->field = field;
  alg->dim = int(survivors.size());
  alg->nblocks = nv;
  std::map<int, int> basis_pos;
  for (int i = 0; i < alg->dim; i++) basis_pos[survivors[i]] = i;
  typename Algebra<K>::QuiverOrigin orig;
  orig.quiver = q;
  orig.relations = rels;
  orig.arrow_basis.assign(na, -1);
  for (int i = 0; i < alg->dim; i++) {
    const PathRec& p = paths[survivors[i]];
    alg->src.push_back(p.s);
    alg->tgt.push_back(p.t);
    orig.path_of.push_back(p.arr);
    if (p.arr.empty())
      alg->basis_labels.push_back("e_" + q.vertices[p.s]);
    else {
      std::string lbl;  // function-composition order: last-applied arrow first
      for (auto it = p.arr.rbegin(); it != p.arr.rend(); ++it) {
        if (!lbl.empty()) lbl += "*";
        lbl += q.arrows[*it].name;
      }
      alg->basis_labels.push_back(lbl);
      if (p.arr.size() == 1) orig.arrow_basis[p.arr[0]] = i;
    }
  }
  for (int a = 0; a < na; a++)
    if (orig.arrow_basis[a] < 0) throw InternalCheck("arrow killed by admissible ideal");

  // multiplication: concatenate (j first, then i) and reduce
  alg->mult.assign(size_t(alg->dim) * alg->dim, {});
  for (int i = 0; i < alg->dim; i++)
    for (int j = 0; j < alg->dim; j++) {
      const PathRec& pi_ = paths[survivors[i]];
      const PathRec& pj = paths[survivors[j]];
      if (pi_.s != pj.t) continue;
      std::vector<int> arr = pj.arr;
      arr.insert(arr.end(), pi_.arr.begin(), pi_.arr.end());
      if (int(arr.size()) >= death) continue;  // lies in the ideal
      int ci = path_index(pj.s, arr);
      if (ci < 0) continue;
      std::map<int, K> v{{ci, scalar_one<K>()}};
      if (E.reduce(v)) continue;  // zero in the quotient
      // residual is supported on survivors
      SparseVec<K> out;
      for (auto& [idx, c] : v) {
        auto bp = basis_pos.find(idx);
        if (bp == basis_pos.end()) throw InternalCheck("reduction left a non-survivor path");
        out.push_back({bp->second, c});
      }
      alg->mult[size_t(i) * alg->dim + j] = std::move(out);
    }

  alg->idem.resize(nv);
  for (int i = 0; i < alg->dim; i++)
    if (orig.path_of[i].empty()) alg->idem[alg->src[i]] = {{i, scalar_one<K>()}};
  alg->origin = std::move(orig);
  alg->check_consistency();
  return alg;
}

/// Opposite algebra: same basis, reversed multiplication, blocks swapped.
template <class K>
AlgPtr<K> opposite(const Algebra<K>& a) {
  auto op = std::make_shared<Algebra<K>>();
  op->dim = a.dim;
  op->nblocks = a.nblocks;
  op->field = a.field;
  op->basis_labels = a.basis_labels;
  op->src = a.tgt;
  op->tgt = a.src;
  op->idem = a.idem;
  op->mult.assign(size_t(a.dim) * a.dim, {});
  for (int i = 0; i < a.dim; i++)
    for (int j = 0; j < a.dim; j++) op->mult[size_t(i) * a.dim + j] = a.prod(j, i);
  if (a.origin) {
    typename Algebra<K>::QuiverOrigin orig;
    orig.quiver = a.origin->quiver;
    for (auto& ar : orig.quiver.arrows) std::swap(ar.from, ar.to);
    orig.arrow_basis = a.origin->arrow_basis;
    for (auto p : a.origin->path_of) {
      std::reverse(p.begin(), p.end());
      orig.path_of.push_back(std::move(p));
    }
    for (auto& r : a.origin->relations) {
      Relation<K> rr;
      for (auto& term : r) {
        RelationTerm<K> t2;
        t2.coeff = term.coeff;
        t2.path = term.path;
        std::reverse(t2.path.begin(), t2.path.end());
        rr.push_back(std::move(t2));
      }
      orig.relations.push_back(std::move(rr));
    }
    op->origin = std::move(orig);
  }
  op->check_consistency();
  return op;
}

/// Cached opposite; the two algebras point at each other, so op_of(op_of(a))
/// is a again.
template <class K>
AlgPtr<K> op_of(const AlgPtr<K>& a) {
  if (!a->op_cache) {
    AlgPtr<K> op = opposite(*a);
    op->op_cache = a;
    a->op_cache = op;
  }
  return a->op_cache;
}

/// Basis of the Jacobson radical via the trace form of left multiplication
/// (exact for char 0 and for primes beyond desk-scale dimensions). Cached.
template <class K>
const std::vector<SparseVec<K>>& radical_basis(const Algebra<K>& a) {
  if (a.rad_cache) return *a.rad_cache;
  std::vector<K> tr(a.dim);
  for (int k = 0; k < a.dim; k++) {
    K t = scalar_zero<K>();
    for (int j = 0; j < a.dim; j++)
      for (auto& [l, c] : a.prod(k, j))
        if (l == j) t += c;
    tr[k] = t;
  }
  Mat<K> gram(a.dim, a.dim);
  for (int i = 0; i < a.dim; i++)
    for (int j = 0; j < a.dim; j++) {
      K g = scalar_zero<K>();
      for (auto& [k, c] : a.prod(i, j)) g += c * tr[k];
      gram.at(i, j) = g;
    }
  Mat<K> kb = kernel_basis(gram);
  std::vector<SparseVec<K>> rad;
  for (int j = 0; j < kb.cols; j++) {
    SparseVec<K> v;
    for (int i = 0; i < a.dim; i++)
      if (!is_zero(kb.at(i, j))) v.push_back({i, kb.at(i, j)});
    rad.push_back(std::move(v));
  }
  a.rad_cache = std::make_shared<const std::vector<SparseVec<K>>>(std::move(rad));
  return *a.rad_cache;
}

/// Convenience builder for linear quivers A_n (1 -> 2 -> ... -> n).
inline Quiver linear_quiver(int n) {
  Quiver q;
  for (int i = 1; i <= n; i++) q.vertices.push_back(std::to_string(i));
  for (int i = 1; i < n; i++) q.add_arrow("a" + std::to_string(i), std::to_string(i), std::to_string(i + 1));
  return q;
}

}  // namespace qfb
