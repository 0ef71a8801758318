#pragma once

#include "qfb/homological.hpp"

namespace qfb {

struct NotRepresentationDirected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class K>
struct ArSequence {
  RepPtr<K> left;   // the translate of the right end
  RepPtr<K> middle;
  Morph<K> incl;    // left -> middle
  Morph<K> proj;    // middle -> right end
};

/// Almost split sequence 0 -> tau(n) -> E -> n -> 0 for non-projective n.
/// Built as the pushout of 0 -> K -> P0 -> n -> 0 along a morphism K -> tau(n)
/// whose extension class spans the socle of Ext^1(n, tau n) under the
/// precomposition action of End(n).
template <class K>
ArSequence<K> ar_sequence_ending_at(const RepPtr<K>& n) {
  if (is_projective(n)) throw InternalCheck("ar_sequence: right end is projective");
  auto alg = n->alg;
  auto c = projective_cover(n);
  RepPtr<K> p0 = c.map.s;
  auto [kmod, kincl] = kernel(c.map);
  RepPtr<K> tn = tau(n);

  auto v = hom(kmod, tn);
  auto hp = hom(p0, tn);
  Mat<K> wm(v.dim(), hp.dim());
  for (int j = 0; j < hp.dim(); j++) {
    Mat<K> col = morph_coords(compose(hp.basis[j], kincl), v.basis);
    for (int i = 0; i < v.dim(); i++) wm.at(i, j) = col.at(i, 0);
  }

  // standard-basis complement of the factorizable classes
  Mat<K> id_v = Mat<K>::identity(v.dim());
  Echelon<K> ech = rref(hstack(wm, id_v));
  std::vector<int> comp;
  for (int p : ech.pivot_cols)
    if (p >= wm.cols) comp.push_back(p - wm.cols);
  int e = int(comp.size());
  if (e < 1) throw InternalCheck("ar_sequence: vanishing extension space");
  Mat<K> cmat(v.dim(), e);
  for (int k = 0; k < e; k++) cmat.at(comp[k], k) = scalar_one<K>();
  Mat<K> basis_full = hstack(wm, cmat);
  auto class_coords = [&](const Morph<K>& f) {
    auto sol = solve(basis_full, morph_coords(f, v.basis));
    if (!sol) throw InternalCheck("ar_sequence: class reduction failed");
    Mat<K> out(e, 1);
    for (int k = 0; k < e; k++) out.at(k, 0) = sol->at(wm.cols + k, 0);
    return out;
  };

  // radical of End(n) acting by precomposition, lifted through the cover
  Decomposition<K> dec;
  dec.whole = n;
  dec.copies.push_back({n, identity_morph(n), identity_morph(n)});
  dec.iso_classes.push_back({n, 1});
  dec.class_of.push_back(0);
  auto ea = end_algebra(dec);
  const auto& radg = radical_basis(*ea.gamma);

  auto hpp = hom(p0, p0);
  auto hpn = hom(p0, n);
  Mat<K> post(hpn.dim(), hpp.dim());
  for (int j = 0; j < hpp.dim(); j++) {
    Mat<K> col = morph_coords(compose(c.map, hpp.basis[j]), hpn.basis);
    for (int i = 0; i < hpn.dim(); i++) post.at(i, j) = col.at(i, 0);
  }
  auto hkk = hom(kmod, kmod);
  auto hkp = hom(kmod, p0);
  Mat<K> rest(hkp.dim(), hkk.dim());
  for (int j = 0; j < hkk.dim(); j++) {
    Mat<K> col = morph_coords(compose(kincl, hkk.basis[j]), hkp.basis);
    for (int i = 0; i < hkp.dim(); i++) rest.at(i, j) = col.at(i, 0);
  }
  auto from_coords = [](const Mat<K>& z, const std::vector<Morph<K>>& basis, Morph<K> acc) {
    for (int j = 0; j < z.rows; j++)
      if (!is_zero(z.at(j, 0))) acc = morph_add(acc, morph_scale(z.at(j, 0), basis[j]));
    return acc;
  };

  Mat<K> stacked(0, e);
  for (auto& rv : radg) {
    Morph<K> r = zero_morph(n, n);
    for (auto& [idx, coef] : rv) r = morph_add(r, morph_scale(coef, ea.basis_endo[idx]));
    auto sol0 = solve(post, morph_coords(compose(r, c.map), hpn.basis));
    if (!sol0) throw InternalCheck("ar_sequence: cover lift failed");
    Morph<K> r0 = from_coords(*sol0, hpp.basis, zero_morph(p0, p0));
    auto solk = solve(rest, morph_coords(compose(r0, kincl), hkp.basis));
    if (!solk) throw InternalCheck("ar_sequence: kernel restriction failed");
    Morph<K> rk = from_coords(*solk, hkk.basis, zero_morph(kmod, kmod));
    Mat<K> act(e, e);
    for (int k = 0; k < e; k++) {
      Mat<K> cc = class_coords(compose(v.basis[comp[k]], rk));
      for (int i = 0; i < e; i++) act.at(i, k) = cc.at(i, 0);
    }
    stacked = vstack(stacked, act);
  }
  Mat<K> z(e, 1);
  if (stacked.rows == 0) {
    z.at(0, 0) = scalar_one<K>();
  } else {
    Mat<K> kb = kernel_basis(stacked);
    if (kb.cols < 1) throw InternalCheck("ar_sequence: socle is zero");
    z = kb.col(0);
  }
  Morph<K> f = zero_morph(kmod, tn);
  for (int k = 0; k < e; k++)
    if (!is_zero(z.at(k, 0))) f = morph_add(f, morph_scale(z.at(k, 0), v.basis[comp[k]]));

  // pushout of the presentation along f
  auto ds = direct_sum(alg, {p0, tn});
  K minus_one = scalar_zero<K>() - scalar_one<K>();
  Morph<K> phi = morph_add(compose(ds.incl[0], kincl),
                           morph_scale(minus_one, compose(ds.incl[1], f)));
  auto [mid, q] = cokernel(phi);
  Morph<K> left = compose(q, ds.incl[1]);
  Morph<K> g = compose(c.map, ds.proj[0]);
  auto hen = hom(mid, n);
  auto hdn = hom(ds.rep, n);
  Mat<K> through(hdn.dim(), hen.dim());
  for (int j = 0; j < hen.dim(); j++) {
    Mat<K> col = morph_coords(compose(hen.basis[j], q), hdn.basis);
    for (int i = 0; i < hdn.dim(); i++) through.at(i, j) = col.at(i, 0);
  }
  auto solr = solve(through, morph_coords(g, hdn.basis));
  if (!solr) throw InternalCheck("ar_sequence: induced map failed");
  Morph<K> right = from_coords(*solr, hen.basis, zero_morph(mid, n));

  if (!morph_is_mono(left) || !morph_is_epi(right))
    throw InternalCheck("ar_sequence: ends not mono/epi");
  for (auto& b : compose(right, left).b)
    if (!b.is_zero()) throw InternalCheck("ar_sequence: composite nonzero");
  if (mid->total() != n->total() + tn->total())
    throw InternalCheck("ar_sequence: middle dimension off");
  auto hnn = hom(n, n);
  auto hne = hom(n, mid);
  Mat<K> sec(hnn.dim(), hne.dim());
  for (int j = 0; j < hne.dim(); j++) {
    Mat<K> col = morph_coords(compose(right, hne.basis[j]), hnn.basis);
    for (int i = 0; i < hnn.dim(); i++) sec.at(i, j) = col.at(i, 0);
  }
  if (cols_contained_in_span(morph_coords(identity_morph(n), hnn.basis), sec))
    throw InternalCheck("ar_sequence: sequence splits");

  return {tn, mid, left, right};
}

template <class K>
struct KnitResult {
  std::vector<RepPtr<K>> indecs;
  bool complete = true;
};

namespace detail {

template <class K>
void name_catalog(const AlgPtr<K>& alg, std::vector<RepPtr<K>>& list) {
  int n = alg->nblocks;
  bool linear = false;
  if (alg->origin) {
    auto& q = alg->origin->quiver;
    linear = int(q.arrows.size()) == n - 1;
    for (int i = 0; linear && i < n - 1; i++)
      linear = q.arrows[i].from == i && q.arrows[i].to == i + 1;
  }
  auto label = [&](int v) {
    return alg->origin ? alg->origin->quiver.vertices[v] : std::to_string(v + 1);
  };
  std::vector<RepPtr<K>> pro, inj, sim;
  for (int i = 0; i < n; i++) {
    pro.push_back(projective_at(alg, i));
    inj.push_back(injective_at(alg, i));
    sim.push_back(simple_at(alg, i));
  }
  int anon = 0;
  for (auto& x : list) {
    std::string nm;
    for (int i = 0; nm.empty() && i < n; i++) {
      if (is_isomorphic(x, pro[i])) nm = "P" + label(i);
      else if (is_isomorphic(x, inj[i])) nm = "I" + label(i);
      else if (is_isomorphic(x, sim[i])) nm = "S" + label(i);
    }
    if (nm.empty() && linear) {
      int a = -1, b = -1;
      bool thin = true;
      for (int v = 0; v < n; v++) {
        if (x->dims[v] > 1) thin = false;
        if (x->dims[v] >= 1) {
          if (a < 0) a = v;
          b = v;
        }
      }
      for (int v = a; thin && v <= b; v++) thin = x->dims[v] == 1;
      if (thin && a >= 0) nm = "[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]";
    }
    if (nm.empty()) {
      nm = "M" + std::to_string(++anon) + "(";
      for (int v = 0; v < n; v++) nm += (v ? "," : "") + std::to_string(x->dims[v]);
      nm += ")";
    }
    x = renamed(x, nm);
  }
}

}  // namespace detail

/// Indecomposables by closure under irreducible neighbours: radicals of
/// projectives, socle quotients of injectives, translates and almost split
/// middle terms. A finite closure containing every projective is the whole
/// AR quiver, so complete=true certifies the catalog.
template <class K>
KnitResult<K> knit(const AlgPtr<K>& alg, int cap = 10000) {
  KnitResult<K> out;
  std::vector<RepPtr<K>> work;
  auto add = [&](const RepPtr<K>& x) {
    if (!x || x->total() == 0) return;
    for (auto& cls : decompose(x).iso_classes) {
      bool known = false;
      for (auto& y : out.indecs)
        if (is_isomorphic(cls.first, y)) {
          known = true;
          break;
        }
      if (!known) {
        out.indecs.push_back(cls.first);
        work.push_back(cls.first);
      }
    }
  };
  for (int i = 0; i < alg->nblocks; i++) {
    add(projective_at(alg, i));
    add(injective_at(alg, i));
  }
  size_t head = 0;
  while (head < work.size()) {
    if (int(out.indecs.size()) > cap) {
      out.complete = false;
      detail::name_catalog(alg, out.indecs);
      return out;
    }
    RepPtr<K> x = work[head++];
    if (is_projective(x)) {
      add(radical_sub(x).first);
    } else {
      auto ar = ar_sequence_ending_at(x);
      add(ar.middle);
      add(ar.left);
    }
    if (is_injective(x)) {
      add(cokernel(socle_sub(x).second).first);
    } else {
      add(tau_inv(x));
    }
  }
  detail::name_catalog(alg, out.indecs);
  return out;
}

/// Arrow counts of the AR quiver: a[x][y] = dim rad(x,y) - dim rad^2(x,y),
/// computed inside End of the catalog sum. Independent of the almost split
/// sequence construction, so it cross-checks mesh middle terms.
template <class K>
std::vector<std::vector<int>> mesh_arrow_counts(const std::vector<RepPtr<K>>& indecs) {
  int t = int(indecs.size());
  if (t == 0) return {};
  auto alg = indecs[0]->alg;
  auto ds = direct_sum(alg, indecs);
  Decomposition<K> dec;
  dec.whole = ds.rep;
  for (int i = 0; i < t; i++) {
    dec.copies.push_back({indecs[i], ds.incl[i], ds.proj[i]});
    dec.iso_classes.push_back({indecs[i], 1});
    dec.class_of.push_back(i);
  }
  auto ea = end_algebra(dec);
  const auto& rad = radical_basis(*ea.gamma);
  std::vector<SparseVec<K>> rad2;
  for (auto& x : rad)
    for (auto& y : rad) {
      SparseVec<K> p = ea.gamma->multiply(x, y);
      if (!p.empty()) rad2.push_back(p);
    }
  auto slice_rank = [&](const std::vector<SparseVec<K>>& vecs, int sx, int sy) {
    Mat<K> m(ea.gamma->dim, int(vecs.size()));
    for (int j = 0; j < int(vecs.size()); j++)
      for (auto& [idx, c] : vecs[j])
        if (ea.gamma->src[idx] == sx && ea.gamma->tgt[idx] == sy) m.at(idx, j) = c;
    return rank(m);
  };
  std::vector<std::vector<int>> counts(t, std::vector<int>(t, 0));
  for (int x = 0; x < t; x++)
    for (int y = 0; y < t; y++) counts[x][y] = slice_rank(rad, x, y) - slice_rank(rad2, x, y);
  return counts;
}

}  // namespace qfb
