#pragma once

#include <numeric>
#include <random>

#include "qfb/algebra.hpp"

namespace qfb {

struct FieldTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Inconclusive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite-dimensional left module: one space per idempotent block, one
/// action matrix per algebra basis element (dims[tgt] x dims[src]).
template <class K>
struct Rep {
  AlgPtr<K> alg;
  std::vector<int> dims;
  std::vector<Mat<K>> act;
  std::string name;

  int total() const { return std::accumulate(dims.begin(), dims.end(), 0); }
  bool is_zero() const { return total() == 0; }
};

template <class K>
using RepPtr = std::shared_ptr<const Rep<K>>;

/// Names are diagnostics; left unchecked the composed ones (ker, coker,
/// sums of sums) double in length per construction layer and dominate memory.
inline std::string clamp_name(std::string name) {
  constexpr size_t cap = 120;
  if (name.size() <= cap) return name;
  size_t cut = cap;
  while (cut > 0 && (static_cast<unsigned char>(name[cut]) & 0xC0) == 0x80) cut--;
  name.resize(cut);
  name += "...";
  return name;
}

template <class K>
RepPtr<K> renamed(const RepPtr<K>& m, std::string name) {
  auto r = std::make_shared<Rep<K>>(*m);
  r->name = clamp_name(std::move(name));
  return r;
}

/// Generating basis indices: arrows + trivial paths for quiver algebras,
/// everything otherwise. Intertwining with these implies intertwining with
/// all products.
template <class K>
std::vector<int> generating_indices(const Algebra<K>& a) {
  if (a.origin) {
    std::vector<int> g;
    for (int i = 0; i < a.dim; i++)
      if (a.origin->path_of[i].size() <= 1) g.push_back(i);
    return g;
  }
  std::vector<int> g(a.dim);
  std::iota(g.begin(), g.end(), 0);
  return g;
}

template <class K>
RepPtr<K> make_rep(AlgPtr<K> alg, std::vector<int> dims, std::vector<Mat<K>> act, std::string name = "") {
  auto r = std::make_shared<Rep<K>>();
  r->alg = std::move(alg);
  r->dims = std::move(dims);
  r->act = std::move(act);
  r->name = clamp_name(std::move(name));
  return r;
}

template <class K>
void check_rep(const Rep<K>& m);

/// Build a representation of a quiver algebra from matrices for the arrows
/// alone (indexed like origin->quiver.arrows). Actions of longer basis paths
/// are the corresponding products; the result is validated, so matrices that
/// violate the relations are rejected.
template <class K>
RepPtr<K> rep_from_arrow_matrices(AlgPtr<K> alg, std::vector<int> dims,
                                  const std::vector<Mat<K>>& arrow_act, std::string name = "") {
  if (!alg->origin) throw AlgebraMismatch("rep_from_arrow_matrices: algebra has no quiver presentation");
  const Quiver& q = alg->origin->quiver;
  if (arrow_act.size() != q.arrows.size())
    throw InternalCheck("rep_from_arrow_matrices: one matrix per arrow required");
  for (int a = 0; a < int(q.arrows.size()); a++)
    if (arrow_act[a].rows != dims[q.arrows[a].to] || arrow_act[a].cols != dims[q.arrows[a].from])
      throw InternalCheck("rep_from_arrow_matrices: matrix shape mismatch on arrow " + q.arrows[a].name);
  std::vector<Mat<K>> act(alg->dim);
  for (int i = 0; i < alg->dim; i++) {
    const auto& path = alg->origin->path_of[i];
    if (path.empty()) {
      act[i] = Mat<K>::identity(dims[alg->src[i]]);
    } else {
      Mat<K> m = arrow_act[path[0]];
      for (size_t k = 1; k < path.size(); k++) m = arrow_act[path[k]] * m;
      act[i] = std::move(m);
    }
  }
  auto r = make_rep(alg, std::move(dims), std::move(act), std::move(name));
  check_rep(*r);
  return r;
}

template <class K>
RepPtr<K> zero_rep(AlgPtr<K> alg) {
  std::vector<int> dims(alg->nblocks, 0);
  std::vector<Mat<K>> act(alg->dim);
  for (int i = 0; i < alg->dim; i++) act[i] = Mat<K>(0, 0);
  return make_rep(alg, std::move(dims), std::move(act), "0");
}

/// Verify the representation axioms exactly; throws InternalCheck on failure.
template <class K>
void check_rep(const Rep<K>& m) {
  const Algebra<K>& a = *m.alg;
  if (int(m.dims.size()) != a.nblocks || int(m.act.size()) != a.dim)
    throw InternalCheck("rep: wrong number of blocks or action matrices");
  for (int i = 0; i < a.dim; i++)
    if (m.act[i].rows != m.dims[a.tgt[i]] || m.act[i].cols != m.dims[a.src[i]])
      throw InternalCheck("rep: action matrix shape mismatch");
  for (int i = 0; i < a.dim; i++)
    for (int j = 0; j < a.dim; j++) {
      if (a.src[i] != a.tgt[j]) continue;
      Mat<K> lhs = m.act[i] * m.act[j];
      Mat<K> rhs(m.dims[a.tgt[i]], m.dims[a.src[j]]);
      for (auto& [k, c] : a.prod(i, j)) rhs = rhs + c * m.act[k];
      if (!(lhs == rhs)) throw InternalCheck("rep: action not multiplicative");
    }
  for (int b = 0; b < a.nblocks; b++) {
    Mat<K> e(m.dims[b], m.dims[b]);
    for (auto& [i, c] : a.idem[b]) {
      if (a.src[i] != b || a.tgt[i] != b) throw InternalCheck("rep: idempotent support");
      e = e + c * m.act[i];
    }
    if (!(e == Mat<K>::identity(m.dims[b]))) throw InternalCheck("rep: idempotent not the block projection");
  }
}

/// Morphism of representations: one matrix per block, intertwining all actions.
template <class K>
struct Morph {
  RepPtr<K> s, t;
  std::vector<Mat<K>> b;

  bool is_zero() const {
    for (auto& m : b)
      if (!m.is_zero()) return false;
    return true;
  }
};

template <class K>
Morph<K> identity_morph(RepPtr<K> m) {
  Morph<K> f;
  f.s = f.t = m;
  for (int d : m->dims) f.b.push_back(Mat<K>::identity(d));
  return f;
}

template <class K>
Morph<K> zero_morph(RepPtr<K> s, RepPtr<K> t) {
  Morph<K> f;
  f.s = s;
  f.t = t;
  for (int v = 0; v < int(s->dims.size()); v++) f.b.push_back(Mat<K>(t->dims[v], s->dims[v]));
  return f;
}

/// g after f.
template <class K>
Morph<K> compose(const Morph<K>& g, const Morph<K>& f) {
  Morph<K> h;
  h.s = f.s;
  h.t = g.t;
  for (int v = 0; v < int(f.b.size()); v++) h.b.push_back(g.b[v] * f.b[v]);
  return h;
}

template <class K>
Morph<K> morph_add(const Morph<K>& f, const Morph<K>& g) {
  Morph<K> h = f;
  for (int v = 0; v < int(f.b.size()); v++) h.b[v] = f.b[v] + g.b[v];
  return h;
}

template <class K>
Morph<K> morph_scale(const K& c, const Morph<K>& f) {
  Morph<K> h = f;
  for (auto& m : h.b) m = c * m;
  return h;
}

template <class K>
void check_morph(const Morph<K>& f) {
  const Algebra<K>& a = *f.s->alg;
  for (int v = 0; v < a.nblocks; v++)
    if (f.b[v].rows != f.t->dims[v] || f.b[v].cols != f.s->dims[v])
      throw InternalCheck("morph: block shape mismatch");
  for (int g : generating_indices(a)) {
    Mat<K> lhs = f.b[a.tgt[g]] * f.s->act[g];
    Mat<K> rhs = f.t->act[g] * f.b[a.src[g]];
    if (!(lhs == rhs)) throw InternalCheck("morph: does not intertwine");
  }
}

template <class K>
bool morph_is_iso(const Morph<K>& f) {
  for (int v = 0; v < int(f.b.size()); v++) {
    if (f.b[v].rows != f.b[v].cols) return false;
    if (rank(f.b[v]) != f.b[v].rows) return false;
  }
  return true;
}

template <class K>
Morph<K> morph_inverse(const Morph<K>& f) {
  Morph<K> g;
  g.s = f.t;
  g.t = f.s;
  for (auto& m : f.b) {
    auto inv = inverse(m);
    if (!inv) throw InternalCheck("morph_inverse: not invertible");
    g.b.push_back(*inv);
  }
  return g;
}

/// Flatten a morphism's blocks into a single coordinate column.
template <class K>
Mat<K> flatten_morph(const Morph<K>& f) {
  int n = 0;
  for (auto& m : f.b) n += m.rows * m.cols;
  Mat<K> v(n, 1);
  int o = 0;
  for (auto& m : f.b)
    for (auto& x : m.a) v.at(o++, 0) = x;
  return v;
}

template <class K>
struct HomSpace {
  RepPtr<K> s, t;
  std::vector<Morph<K>> basis;
  int dim() const { return int(basis.size()); }
};

/// Basis of all intertwiners s -> t, computed as the joint kernel of the
/// generator constraints.
template <class K>
HomSpace<K> hom(RepPtr<K> s, RepPtr<K> t) {
  if (s->alg.get() != t->alg.get()) throw AlgebraMismatch("hom: different algebras");
  const Algebra<K>& a = *s->alg;
  int nb = a.nblocks;
  std::vector<int> offset(nb + 1, 0);
  for (int v = 0; v < nb; v++) offset[v + 1] = offset[v] + t->dims[v] * s->dims[v];
  int ncols = offset[nb];
  auto gens = generating_indices(a);
  int nrows = 0;
  for (int g : gens) nrows += t->dims[a.tgt[g]] * s->dims[a.src[g]];
  Mat<K> c(nrows, ncols);
  int ro = 0;
  for (int g : gens) {
    int gs = a.src[g], gt = a.tgt[g];
    // constraint: F_t * s.act[g] - t.act[g] * F_s = 0, entry (p,q)
    for (int p = 0; p < t->dims[gt]; p++)
      for (int q = 0; q < s->dims[gs]; q++) {
        int row = ro + p * s->dims[gs] + q;
        for (int j = 0; j < s->dims[gt]; j++)
          c.at(row, offset[gt] + p * s->dims[gt] + j) += s->act[g].at(j, q);
        for (int i = 0; i < t->dims[gs]; i++)
          c.at(row, offset[gs] + i * s->dims[gs] + q) -= t->act[g].at(p, i);
      }
    ro += t->dims[gt] * s->dims[gs];
  }
  Mat<K> kb = kernel_basis(c);
  HomSpace<K> h;
  h.s = s;
  h.t = t;
  for (int col = 0; col < kb.cols; col++) {
    Morph<K> f;
    f.s = s;
    f.t = t;
    for (int v = 0; v < nb; v++) {
      Mat<K> m(t->dims[v], s->dims[v]);
      for (int p = 0; p < t->dims[v]; p++)
        for (int q = 0; q < s->dims[v]; q++) m.at(p, q) = kb.at(offset[v] + p * s->dims[v] + q, col);
      f.b.push_back(std::move(m));
    }
    h.basis.push_back(std::move(f));
  }
  return h;
}

template <class K>
int hom_dim(RepPtr<K> s, RepPtr<K> t) {
  return hom(s, t).dim();
}

/// Express a morphism in the coordinates of a hom basis; throws if outside.
template <class K>
Mat<K> morph_coords(const Morph<K>& f, const std::vector<Morph<K>>& basis) {
  int n = flatten_morph(f).rows;
  Mat<K> b(n, int(basis.size()));
  for (int j = 0; j < int(basis.size()); j++) {
    Mat<K> col = flatten_morph(basis[j]);
    for (int i = 0; i < n; i++) b.at(i, j) = col.at(i, 0);
  }
  auto sol = solve(b, flatten_morph(f));
  if (!sol) throw InternalCheck("morph_coords: morphism outside span of basis");
  return *sol;
}

/// Subrepresentation spanned per block by the columns of basis[v]
/// (must be action-stable); returns (rep, inclusion).
template <class K>
std::pair<RepPtr<K>, Morph<K>> sub_rep(RepPtr<K> m, const std::vector<Mat<K>>& basis, std::string name = "") {
  const Algebra<K>& a = *m->alg;
  std::vector<int> dims;
  for (auto& b : basis) dims.push_back(b.cols);
  std::vector<Mat<K>> act;
  for (int i = 0; i < a.dim; i++) {
    Mat<K> rhs = m->act[i] * basis[a.src[i]];
    auto sol = solve(basis[a.tgt[i]], rhs);
    if (!sol) throw InternalCheck("sub_rep: subspace not action-stable");
    act.push_back(std::move(*sol));
  }
  auto r = make_rep(m->alg, std::move(dims), std::move(act), std::move(name));
  Morph<K> incl;
  incl.s = r;
  incl.t = m;
  incl.b = basis;
  return {r, incl};
}

/// Quotient of m by the column span of kill[v]; returns (rep, projection).
template <class K>
std::pair<RepPtr<K>, Morph<K>> quotient_rep(RepPtr<K> m, const std::vector<Mat<K>>& kill, std::string name = "") {
  const Algebra<K>& a = *m->alg;
  int nb = a.nblocks;
  std::vector<Mat<K>> proj(nb), section(nb);
  std::vector<int> dims(nb);
  for (int v = 0; v < nb; v++) {
    int n = m->dims[v];
    // choose standard basis vectors completing the span of kill[v]
    Mat<K> cur = kill[v];
    int base_rank = rank(cur);
    std::vector<int> chosen;
    for (int i = 0; i < n && base_rank + int(chosen.size()) < n; i++) {
      Mat<K> e(n, 1);
      e.at(i, 0) = scalar_one<K>();
      Mat<K> ext = hstack(cur, e);
      if (rank(ext) > rank(cur)) {
        chosen.push_back(i);
        cur = std::move(ext);
      }
    }
    int q = int(chosen.size());
    dims[v] = q;
    // B = [kill-colbasis | chosen]; projection = last q rows of B^{-1}
    Echelon<K> e = rref(kill[v]);
    std::vector<int> pivcols = e.pivot_cols;
    Mat<K> colbasis = kill[v].cols_selected(pivcols);
    Mat<K> sec(n, q);
    for (int j = 0; j < q; j++) sec.at(chosen[j], j) = scalar_one<K>();
    Mat<K> b = hstack(colbasis, sec);
    auto binv = inverse(b);
    if (!binv) throw InternalCheck("quotient_rep: basis completion failed");
    Mat<K> pr(q, n);
    for (int i = 0; i < q; i++)
      for (int j = 0; j < n; j++) pr.at(i, j) = binv->at(base_rank + i, j);
    proj[v] = std::move(pr);
    section[v] = std::move(sec);
  }
  std::vector<Mat<K>> act;
  for (int i = 0; i < a.dim; i++) act.push_back(proj[a.tgt[i]] * m->act[i] * section[a.src[i]]);
  auto r = make_rep(m->alg, std::move(dims), std::move(act), std::move(name));
  // well-definedness: proj must intertwine
  Morph<K> p;
  p.s = m;
  p.t = r;
  p.b = proj;
  check_morph(p);
  return {r, p};
}

template <class K>
std::pair<RepPtr<K>, Morph<K>> kernel(const Morph<K>& f) {
  std::vector<Mat<K>> basis;
  for (auto& m : f.b) basis.push_back(kernel_basis(m));
  return sub_rep(f.s, basis, "ker(" + f.s->name + "->" + f.t->name + ")");
}

template <class K>
std::pair<RepPtr<K>, Morph<K>> image(const Morph<K>& f) {
  std::vector<Mat<K>> basis;
  for (auto& m : f.b) {
    Echelon<K> e = rref(m);
    basis.push_back(m.cols_selected(e.pivot_cols));
  }
  return sub_rep(f.t, basis, "im(" + f.s->name + "->" + f.t->name + ")");
}

template <class K>
std::pair<RepPtr<K>, Morph<K>> cokernel(const Morph<K>& f) {
  std::vector<Mat<K>> kill;
  for (auto& m : f.b) kill.push_back(m);
  return quotient_rep(f.t, kill, "coker(" + f.s->name + "->" + f.t->name + ")");
}

template <class K>
struct DirectSum {
  RepPtr<K> rep;
  std::vector<Morph<K>> incl, proj;
};

template <class K>
DirectSum<K> direct_sum(AlgPtr<K> alg, const std::vector<RepPtr<K>>& parts) {
  const Algebra<K>& a = *alg;
  int nb = a.nblocks;
  std::vector<int> dims(nb, 0);
  for (auto& p : parts) {
    if (p->alg.get() != alg.get()) throw AlgebraMismatch("direct_sum: different algebras");
    for (int v = 0; v < nb; v++) dims[v] += p->dims[v];
  }
  std::vector<Mat<K>> act;
  for (int i = 0; i < a.dim; i++) {
    std::vector<Mat<K>> blocks;
    for (auto& p : parts) blocks.push_back(p->act[i]);
    act.push_back(block_diag(blocks));
  }
  std::string name;
  for (auto& p : parts) name += (name.empty() ? "" : "+") + p->name;
  DirectSum<K> ds;
  ds.rep = make_rep(alg, std::move(dims), std::move(act), name.empty() ? "0" : name);
  std::vector<int> off(nb, 0);
  for (auto& p : parts) {
    Morph<K> in = zero_morph(p, ds.rep), pr = zero_morph(ds.rep, p);
    for (int v = 0; v < nb; v++)
      for (int i = 0; i < p->dims[v]; i++) {
        in.b[v].at(off[v] + i, i) = scalar_one<K>();
        pr.b[v].at(i, off[v] + i) = scalar_one<K>();
      }
    ds.incl.push_back(std::move(in));
    ds.proj.push_back(std::move(pr));
    for (int v = 0; v < nb; v++) off[v] += p->dims[v];
  }
  return ds;
}

// ---------------------------------------------------------------------------
// canonical modules

template <class K>
RepPtr<K> regular_module(AlgPtr<K> alg) {
  const Algebra<K>& a = *alg;
  std::vector<std::vector<int>> block_elems(a.nblocks);
  std::vector<int> pos(a.dim);
  for (int i = 0; i < a.dim; i++) {
    pos[i] = int(block_elems[a.tgt[i]].size());
    block_elems[a.tgt[i]].push_back(i);
  }
  std::vector<int> dims;
  for (auto& be : block_elems) dims.push_back(int(be.size()));
  std::vector<Mat<K>> act;
  for (int x = 0; x < a.dim; x++) {
    Mat<K> m(dims[a.tgt[x]], dims[a.src[x]]);
    for (int col = 0; col < int(block_elems[a.src[x]].size()); col++) {
      int b = block_elems[a.src[x]][col];
      for (auto& [k, c] : a.prod(x, b)) m.at(pos[k], col) += c;
    }
    act.push_back(std::move(m));
  }
  return make_rep(alg, std::move(dims), std::move(act), "A");
}

template <class K>
RepPtr<K> projective_at(AlgPtr<K> alg, int i) {
  const Algebra<K>& a = *alg;
  std::vector<std::vector<int>> block_elems(a.nblocks);
  std::vector<int> pos(a.dim, -1);
  for (int b = 0; b < a.dim; b++)
    if (a.src[b] == i) {
      pos[b] = int(block_elems[a.tgt[b]].size());
      block_elems[a.tgt[b]].push_back(b);
    }
  std::vector<int> dims;
  for (auto& be : block_elems) dims.push_back(int(be.size()));
  std::vector<Mat<K>> act;
  for (int x = 0; x < a.dim; x++) {
    Mat<K> m(dims[a.tgt[x]], dims[a.src[x]]);
    for (int col = 0; col < int(block_elems[a.src[x]].size()); col++) {
      int b = block_elems[a.src[x]][col];
      for (auto& [k, c] : a.prod(x, b))
        if (pos[k] >= 0) m.at(pos[k], col) += c;
    }
    act.push_back(std::move(m));
  }
  return make_rep(alg, std::move(dims), std::move(act), "P" + std::to_string(i + 1));
}

/// D(e_i A): basis dual to {b : tgt(b) = i}, graded by src.
template <class K>
RepPtr<K> injective_at(AlgPtr<K> alg, int i) {
  const Algebra<K>& a = *alg;
  std::vector<std::vector<int>> block_elems(a.nblocks);
  std::vector<int> pos(a.dim, -1);
  for (int b = 0; b < a.dim; b++)
    if (a.tgt[b] == i) {
      pos[b] = int(block_elems[a.src[b]].size());
      block_elems[a.src[b]].push_back(b);
    }
  std::vector<int> dims;
  for (auto& be : block_elems) dims.push_back(int(be.size()));
  std::vector<Mat<K>> act;
  for (int x = 0; x < a.dim; x++) {
    // (x·ξ)(m) = ξ(m·x) for m in e_i A e_{tgt(x)}; transpose of right mult
    Mat<K> m(dims[a.tgt[x]], dims[a.src[x]]);
    for (int row = 0; row < int(block_elems[a.tgt[x]].size()); row++) {
      int b = block_elems[a.tgt[x]][row];
      for (auto& [k, c] : a.prod(b, x))
        if (pos[k] >= 0) m.at(row, pos[k]) += c;
    }
    act.push_back(std::move(m));
  }
  return make_rep(alg, std::move(dims), std::move(act), "I" + std::to_string(i + 1));
}

template <class K>
RepPtr<K> coregular_module(AlgPtr<K> alg) {
  std::vector<RepPtr<K>> parts;
  for (int i = 0; i < alg->nblocks; i++) parts.push_back(injective_at(alg, i));
  auto ds = direct_sum(alg, parts);
  auto r = std::make_shared<Rep<K>>(*ds.rep);
  r->name = "DA";
  return r;
}

/// Radical submodule rad(A)·M and its quotient (the top).
template <class K>
std::pair<RepPtr<K>, Morph<K>> top_of(RepPtr<K> m) {
  const Algebra<K>& a = *m->alg;
  const auto& rad = radical_basis(a);
  std::vector<Mat<K>> span;
  for (int v = 0; v < a.nblocks; v++) span.push_back(Mat<K>(m->dims[v], 0));
  for (auto& r : rad) {
    // r is bigraded-homogeneous only per summand; split by (src,tgt)
    std::map<std::pair<int, int>, Mat<K>> parts;
    for (auto& [i, c] : r) {
      auto key = std::make_pair(a.src[i], a.tgt[i]);
      auto it = parts.find(key);
      if (it == parts.end())
        parts.emplace(key, c * m->act[i]);
      else
        it->second = it->second + c * m->act[i];
    }
    for (auto& [st, mat] : parts) span[st.second] = hstack(span[st.second], mat);
  }
  return quotient_rep(m, span, "top(" + m->name + ")");
}

template <class K>
std::pair<RepPtr<K>, Morph<K>> radical_sub(RepPtr<K> m) {
  const Algebra<K>& a = *m->alg;
  const auto& rad = radical_basis(a);
  std::vector<Mat<K>> span;
  for (int v = 0; v < a.nblocks; v++) span.push_back(Mat<K>(m->dims[v], 0));
  for (auto& r : rad) {
    std::map<std::pair<int, int>, Mat<K>> parts;
    for (auto& [i, c] : r) {
      auto key = std::make_pair(a.src[i], a.tgt[i]);
      auto it = parts.find(key);
      if (it == parts.end())
        parts.emplace(key, c * m->act[i]);
      else
        it->second = it->second + c * m->act[i];
    }
    for (auto& [st, mat] : parts) span[st.second] = hstack(span[st.second], mat);
  }
  for (auto& s : span) {
    Echelon<K> e = rref(s);
    s = s.cols_selected(e.pivot_cols);
  }
  return sub_rep(m, span, "rad(" + m->name + ")");
}

/// Socle: the largest submodule killed by the radical.
template <class K>
std::pair<RepPtr<K>, Morph<K>> socle_sub(RepPtr<K> m) {
  const Algebra<K>& a = *m->alg;
  const auto& rad = radical_basis(a);
  std::vector<Mat<K>> basis;
  for (int v = 0; v < a.nblocks; v++) {
    Mat<K> stacked(0, m->dims[v]);
    for (auto& r : rad) {
      std::map<int, Mat<K>> parts;  // tgt -> matrix from block v
      for (auto& [i, c] : r) {
        if (a.src[i] != v) continue;
        auto it = parts.find(a.tgt[i]);
        if (it == parts.end())
          parts.emplace(a.tgt[i], c * m->act[i]);
        else
          it->second = it->second + c * m->act[i];
      }
      for (auto& [t, mat] : parts) stacked = vstack(stacked, mat);
    }
    basis.push_back(kernel_basis(stacked));
  }
  return sub_rep(m, basis, "soc(" + m->name + ")");
}

template <class K>
RepPtr<K> simple_at(AlgPtr<K> alg, int i) {
  auto t = top_of(projective_at(alg, i)).first;
  auto r = std::make_shared<Rep<K>>(*t);
  r->name = "S" + std::to_string(i + 1);
  return r;
}

// ---------------------------------------------------------------------------
// decomposition

template <class K>
struct Summand {
  RepPtr<K> leaf;
  Morph<K> incl, proj;  // proj ∘ incl = id on leaf
};

template <class K>
struct Decomposition {
  RepPtr<K> whole;
  std::vector<Summand<K>> copies;                      // flattened, deterministic order
  std::vector<std::pair<RepPtr<K>, int>> iso_classes;  // representative, multiplicity
  std::vector<int> class_of;                           // per copy
};

template <class K>
bool is_isomorphic(RepPtr<K> m, RepPtr<K> n);

namespace detail {

template <class K>
Morph<K> morph_power(const Morph<K>& f, int e) {
  Morph<K> acc = identity_morph(f.s);
  Morph<K> base = f;
  while (e) {
    if (e & 1) acc = compose(base, acc);
    base = compose(base, base);
    e >>= 1;
  }
  return acc;
}

template <class K>
int morph_rank(const Morph<K>& f) {
  int r = 0;
  for (auto& m : f.b) r += rank(m);
  return r;
}

// returns a stable-rank power phi^d with 0 < rank < dim, if one is found
template <class K>
std::optional<Morph<K>> find_fitting_split(RepPtr<K> m, const HomSpace<K>& end) {
  int d = m->total();
  auto try_phi = [&](const Morph<K>& phi) -> std::optional<Morph<K>> {
    Morph<K> p = morph_power(phi, d);
    int r = morph_rank(p);
    if (r == 0 || r == d) return std::nullopt;
    return p;
  };
  for (auto& phi : end.basis)
    if (auto s = try_phi(phi)) return s;
  std::mt19937 gen(987654321u);
  std::uniform_int_distribution<int> coeff(-5, 5);
  for (int attempt = 0; attempt < 40; attempt++) {
    Morph<K> phi = zero_morph(m, m);
    for (auto& e : end.basis) phi = morph_add(phi, morph_scale(K(coeff(gen)), e));
    if (auto s = try_phi(phi)) return s;
  }
  return std::nullopt;
}

// local test: dim(End/rad) == 1 via the trace form on End
template <class K>
bool end_is_local(const HomSpace<K>& end) {
  int n = end.dim();
  if (n == 0) return false;
  // gram(i,j) = trace(basis_i ∘ basis_j) on the module
  Mat<K> gram(n, n);
  for (int i = 0; i < n; i++)
    for (int j = i; j < n; j++) {
      Morph<K> c = compose(end.basis[i], end.basis[j]);
      K tr = scalar_zero<K>();
      for (auto& blk : c.b)
        for (int p = 0; p < blk.rows; p++) tr += blk.at(p, p);
      gram.at(i, j) = tr;
      gram.at(j, i) = tr;
    }
  // rad(End) = kernel of the trace form; local with End/rad = K iff rank 1
  return rank(gram) == 1;
}

template <class K>
void decompose_into(RepPtr<K> m, const Morph<K>& incl, const Morph<K>& proj,
                    std::vector<Summand<K>>& out) {
  if (m->is_zero()) return;
  HomSpace<K> end = hom(m, m);
  auto split = find_fitting_split(m, end);
  if (!split) {
    if (!end_is_local(end)) {
      if constexpr (std::is_same_v<K, Fp>)
        throw FieldTooSmall("decompose: splitting search exhausted over F_p; rerun over the rationals");
      else
        throw Inconclusive("decompose: endomorphism algebra not split local and no splitting found");
    }
    out.push_back({m, incl, proj});
    return;
  }
  const Morph<K>& p = *split;
  auto [kr, kincl] = kernel(p);
  auto [ir, iincl] = image(p);
  // change of basis [K | I] per block; projections = rows of the inverse
  int nb = int(m->dims.size());
  Morph<K> kproj, iproj;
  kproj.s = m;
  kproj.t = kr;
  iproj.s = m;
  iproj.t = ir;
  for (int v = 0; v < nb; v++) {
    Mat<K> b = hstack(kincl.b[v], iincl.b[v]);
    if (b.rows != b.cols) throw InternalCheck("decompose: fitting blocks do not fill");
    auto binv = inverse(b);
    if (!binv) throw InternalCheck("decompose: fitting change of basis singular");
    int kd = kincl.b[v].cols;
    Mat<K> kp(kd, b.rows), ip(b.rows - kd, b.rows);
    for (int i = 0; i < kd; i++)
      for (int j = 0; j < b.rows; j++) kp.at(i, j) = binv->at(i, j);
    for (int i = kd; i < b.rows; i++)
      for (int j = 0; j < b.rows; j++) ip.at(i - kd, j) = binv->at(i, j);
    kproj.b.push_back(std::move(kp));
    iproj.b.push_back(std::move(ip));
  }
  decompose_into<K>(kr, compose(incl, kincl), compose(kproj, proj), out);
  decompose_into<K>(ir, compose(incl, iincl), compose(iproj, proj), out);
}

}  // namespace detail

template <class K>
Decomposition<K> decompose(RepPtr<K> m) {
  Decomposition<K> d;
  d.whole = m;
  detail::decompose_into<K>(m, identity_morph(m), identity_morph(m), d.copies);
  for (auto& s : d.copies) {
    int found = -1;
    for (int c = 0; c < int(d.iso_classes.size()); c++)
      if (is_isomorphic<K>(s.leaf, d.iso_classes[c].first)) {
        found = c;
        break;
      }
    if (found < 0) {
      found = int(d.iso_classes.size());
      d.iso_classes.push_back({s.leaf, 0});
    }
    d.iso_classes[found].second++;
    d.class_of.push_back(found);
  }
  return d;
}

template <class K>
std::optional<Morph<K>> iso_certificate(RepPtr<K> m, RepPtr<K> n) {
  if (m->dims != n->dims) return std::nullopt;
  if (m->is_zero()) return zero_morph(m, n);
  HomSpace<K> h = hom(m, n);
  if (h.dim() == 0) return std::nullopt;
  for (auto& f : h.basis)
    if (morph_is_iso(f)) return f;
  std::mt19937 gen(271828182u);
  std::uniform_int_distribution<int> coeff(-10, 10);
  for (int attempt = 0; attempt < 20; attempt++) {
    Morph<K> f = zero_morph(m, n);
    for (auto& e : h.basis) f = morph_add(f, morph_scale(K(coeff(gen)), e));
    if (morph_is_iso(f)) return f;
  }
  return std::nullopt;
}

template <class K>
bool is_isomorphic(RepPtr<K> m, RepPtr<K> n) {
  if (m->dims != n->dims) return false;
  if (m->is_zero()) return true;
  if (hom_dim(m, m) != hom_dim(n, n)) return false;
  if (auto c = iso_certificate(m, n)) return true;
  // deterministic fallback: decompose both and match leaves
  Decomposition<K> dm = decompose(m), dn = decompose(n);
  if (dm.copies.size() != dn.copies.size()) return false;
  std::vector<bool> used(dn.copies.size(), false);
  for (auto& sm : dm.copies) {
    bool matched = false;
    for (size_t j = 0; j < dn.copies.size(); j++) {
      if (used[j]) continue;
      if (sm.leaf->dims != dn.copies[j].leaf->dims) continue;
      if (iso_certificate<K>(sm.leaf, dn.copies[j].leaf)) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// endomorphism algebras and the two hom functors

template <class K>
struct EndAlgebra {
  AlgPtr<K> gamma;                  // End(M), blocks = copies of the decomposition
  RepPtr<K> bimodule;               // M as a left End(M)-module
  Decomposition<K> dec;             // copies of M defining the blocks
  std::vector<Morph<K>> basis_leaf; // Γ-basis element b as a map L_src(b) -> L_tgt(b)
  std::vector<Morph<K>> basis_endo; // the same element embedded as an endomorphism of M
};

/// End(M) with multiplication g*f = g after f; idempotents are the copy
/// projections of the decomposition of M.
template <class K>
EndAlgebra<K> end_algebra(Decomposition<K> dec) {
  EndAlgebra<K> e;
  e.dec = std::move(dec);
  RepPtr<K> m = e.dec.whole;
  int r = int(e.dec.copies.size());
  auto g = std::make_shared<Algebra<K>>();
  g->nblocks = r;
  g->field = m->alg->field;
  std::vector<std::vector<Morph<K>>> pair_basis(size_t(r) * r);
  std::vector<std::vector<int>> pair_index(size_t(r) * r);
  for (int i = 0; i < r; i++)
    for (int j = 0; j < r; j++) {
      HomSpace<K> h = hom(e.dec.copies[i].leaf, e.dec.copies[j].leaf);
      for (int k = 0; k < h.dim(); k++) {
        pair_index[size_t(j) * r + i].push_back(g->dim);
        g->src.push_back(i);
        g->tgt.push_back(j);
        g->basis_labels.push_back("f" + std::to_string(g->dim));
        e.basis_leaf.push_back(h.basis[k]);
        g->dim++;
      }
      pair_basis[size_t(j) * r + i] = std::move(h.basis);
    }
  for (int b = 0; b < g->dim; b++) {
    const Morph<K>& psi = e.basis_leaf[b];
    int i = g->src[b], j = g->tgt[b];
    e.basis_endo.push_back(compose(e.dec.copies[j].incl, compose(psi, e.dec.copies[i].proj)));
  }
  g->mult.assign(size_t(g->dim) * g->dim, {});
  for (int x = 0; x < g->dim; x++)
    for (int y = 0; y < g->dim; y++) {
      if (g->src[x] != g->tgt[y]) continue;
      // x*y = x after y: L_src(y) -> L_tgt(x)
      Morph<K> comp = compose(e.basis_leaf[x], e.basis_leaf[y]);
      auto& basis = pair_basis[size_t(g->tgt[x]) * r + g->src[y]];
      auto& idx = pair_index[size_t(g->tgt[x]) * r + g->src[y]];
      if (basis.empty()) {
        if (!comp.is_zero()) throw InternalCheck("end_algebra: composite outside empty hom");
        continue;
      }
      Mat<K> coords = morph_coords(comp, basis);
      SparseVec<K> sv;
      for (int k = 0; k < coords.rows; k++)
        if (!is_zero(coords.at(k, 0))) sv.push_back({idx[k], coords.at(k, 0)});
      g->mult[size_t(x) * g->dim + y] = std::move(sv);
    }
  g->idem.resize(r);
  for (int i = 0; i < r; i++) {
    Mat<K> coords = morph_coords(identity_morph(e.dec.copies[i].leaf), pair_basis[size_t(i) * r + i]);
    SparseVec<K> sv;
    for (int k = 0; k < coords.rows; k++)
      if (!is_zero(coords.at(k, 0))) sv.push_back({pair_index[size_t(i) * r + i][k], coords.at(k, 0)});
    g->idem[i] = std::move(sv);
  }
  g->check_consistency();
  e.gamma = g;

  // M as a left Γ-module: block i = L_i flattened over its Λ-blocks
  std::vector<int> dims;
  for (int i = 0; i < r; i++) dims.push_back(e.dec.copies[i].leaf->total());
  std::vector<Mat<K>> act;
  for (int b = 0; b < g->dim; b++) {
    const Morph<K>& psi = e.basis_leaf[b];
    std::vector<Mat<K>> blocks;
    for (auto& blk : psi.b) blocks.push_back(blk);
    act.push_back(block_diag(blocks));
  }
  e.bimodule = make_rep<K>(g, std::move(dims), std::move(act), m->name.empty() ? "M" : m->name);
  check_rep(*e.bimodule);
  return e;
}

template <class K>
EndAlgebra<K> end_algebra(RepPtr<K> m) {
  return end_algebra(decompose(m));
}

template <class K>
struct HomImage {
  RepPtr<K> rep;                                 // over Γ = End(M)
  std::vector<std::vector<Morph<K>>> block_basis;  // per copy i: basis of the block
};

/// Hom_Λ(x, M) as a left End(M)-module; block i = Hom_Λ(x, L_i), the action
/// of φ is postcomposition.
template <class K>
HomImage<K> apply_hom_functor(RepPtr<K> x, const EndAlgebra<K>& e) {
  int r = int(e.dec.copies.size());
  const Algebra<K>& g = *e.gamma;
  HomImage<K> out;
  std::vector<int> dims(r);
  for (int i = 0; i < r; i++) {
    HomSpace<K> h = hom(x, e.dec.copies[i].leaf);
    dims[i] = h.dim();
    out.block_basis.push_back(std::move(h.basis));
  }
  std::vector<Mat<K>> act;
  for (int b = 0; b < g.dim; b++) {
    int i = g.src[b], j = g.tgt[b];
    Mat<K> m(dims[j], dims[i]);
    for (int col = 0; col < dims[i]; col++) {
      Morph<K> comp = compose(e.basis_leaf[b], out.block_basis[i][col]);
      if (dims[j] == 0) {
        if (!comp.is_zero()) throw InternalCheck("apply_hom_functor: composite outside empty hom");
        continue;
      }
      Mat<K> coords = morph_coords(comp, out.block_basis[j]);
      for (int row = 0; row < dims[j]; row++) m.at(row, col) = coords.at(row, 0);
    }
    act.push_back(std::move(m));
  }
  out.rep = make_rep<K>(e.gamma, std::move(dims), std::move(act), "(" + x->name + ",M)");
  check_rep(*out.rep);
  return out;
}

/// D Hom_Λ(M, y) as a left End(M)-module; block i = D Hom_Λ(L_i, y), the
/// action of φ is the dual of precomposition.
template <class K>
HomImage<K> apply_dhom_functor(RepPtr<K> y, const EndAlgebra<K>& e) {
  int r = int(e.dec.copies.size());
  const Algebra<K>& g = *e.gamma;
  HomImage<K> out;
  std::vector<int> dims(r);
  for (int i = 0; i < r; i++) {
    HomSpace<K> h = hom(e.dec.copies[i].leaf, y);
    dims[i] = h.dim();
    out.block_basis.push_back(std::move(h.basis));
  }
  std::vector<Mat<K>> act;
  for (int b = 0; b < g.dim; b++) {
    int i = g.src[b], j = g.tgt[b];
    // precomposition by ψ: Hom(L_j, y) -> Hom(L_i, y); act = transpose
    Mat<K> p(dims[i], dims[j]);
    for (int col = 0; col < dims[j]; col++) {
      Morph<K> comp = compose(out.block_basis[j][col], e.basis_leaf[b]);
      if (dims[i] == 0) {
        if (!comp.is_zero()) throw InternalCheck("apply_dhom_functor: composite outside empty hom");
        continue;
      }
      Mat<K> coords = morph_coords(comp, out.block_basis[i]);
      for (int row = 0; row < dims[i]; row++) p.at(row, col) = coords.at(row, 0);
    }
    act.push_back(p.transpose());
  }
  out.rep = make_rep<K>(e.gamma, std::move(dims), std::move(act), "D(M," + y->name + ")");
  check_rep(*out.rep);
  return out;
}

}  // namespace qfb
