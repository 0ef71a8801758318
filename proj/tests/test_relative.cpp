#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "qfb/relative.hpp"

using namespace qfb;
using qfbtest::an_algebra;
using qfbtest::interval_module;

namespace {

AlgPtr<Rat> a3() {
  static AlgPtr<Rat> alg = an_algebra<Rat>(3);
  return alg;
}

AlgPtr<Rat> a4() {
  static AlgPtr<Rat> alg = an_algebra<Rat>(4);
  return alg;
}

AlgPtr<Rat> a5() {
  static AlgPtr<Rat> alg = an_algebra<Rat>(5);
  return alg;
}

AlgPtr<Rat> rsz() {
  static AlgPtr<Rat> alg = [] {
    std::vector<std::vector<RelationTerm<Rat>>> rels{{{Rat(1), {0, 1}}}};
    return algebra_from_quiver<Rat>(linear_quiver(3), rels);
  }();
  return alg;
}

// one source into the middle, one sink out of it, plus a second source
AlgPtr<Rat> dee4() {
  static AlgPtr<Rat> alg = [] {
    Quiver q;
    q.vertices = {"1", "2", "3", "4"};
    q.add_arrow("al", "1", "2");
    q.add_arrow("be", "3", "2");
    q.add_arrow("ga", "2", "4");
    return algebra_from_quiver<Rat>(q, {});
  }();
  return alg;
}

std::vector<RepPtr<Rat>> all_intervals(AlgPtr<Rat> alg, int n) {
  std::vector<RepPtr<Rat>> out;
  for (int a = 1; a <= n; a++)
    for (int b = a; b <= n; b++) out.push_back(interval_module(alg, a, b));
  return out;
}

std::vector<RepPtr<Rat>> long_intervals(AlgPtr<Rat> alg, int n) {
  std::vector<RepPtr<Rat>> out;
  for (int a = 1; a <= n; a++)
    for (int b = a + 1; b <= n; b++) out.push_back(interval_module(alg, a, b));
  return out;
}

RepPtr<Rat> pick(AlgPtr<Rat> alg, const std::vector<RepPtr<Rat>>& ivs, unsigned mask) {
  std::vector<RepPtr<Rat>> parts;
  for (size_t i = 0; i < ivs.size(); i++)
    if (mask & (1u << i)) parts.push_back(ivs[i]);
  return direct_sum(alg, parts).rep;
}

ExactStructure<Rat>& intro_structure() {
  static ExactStructure<Rat> fs = exact_structure_from_generator(
      direct_sum(a3(), {regular_module(a3()), interval_module(a3(), 1, 2)}).rep);
  return fs;
}

RepPtr<Rat> intro_m() {
  static RepPtr<Rat> m = direct_sum(
      a3(), {interval_module(a3(), 2, 3), interval_module(a3(), 1, 3), interval_module(a3(), 1, 2)}).rep;
  return m;
}

}  // namespace

TEST_CASE("ordinary structure is the classical theory") {
  auto alg = a3();
  auto fs = exact_structure_from_generator(regular_module(alg));
  REQUIRE(add_equal(fs.h, coregular_module(alg)));

  auto p2 = interval_module(alg, 2, 3);
  auto s2 = interval_module(alg, 2, 2);
  auto hp = hom(p2, s2);
  REQUIRE(hp.dim() == 1);
  auto kr = kernel(hp.basis[0]);
  REQUIRE(is_isomorphic(kr.first, interval_module(alg, 3, 3)));
  ExactSeq<Rat> ar{{kr.first, p2, s2}, {kr.second, hp.basis[0]}};
  REQUIRE(is_exact_sequence(ar));
  REQUIRE(is_f_exact(ar, fs));

  // every exact sequence lies in the structure, so the chains coincide
  auto ivs = all_intervals(alg, 3);
  for (auto spine : {pick(alg, ivs, 0b10100u), pick(alg, ivs, 0b00111u)}) {
    auto addm = make_add(spine);
    for (auto& x : ivs)
      for (int k = 0; k <= 1; k++) {
        REQUIRE(in_cogen_k_f(x, addm, fs, k) == in_cogen_k(x, addm, k));
        REQUIRE(in_gen_k_f(x, addm, fs, k) == in_gen_k(x, addm, k));
      }
  }

  auto s1 = interval_module(alg, 1, 1);
  auto s3 = interval_module(alg, 3, 3);
  REQUIRE(relative_ext(s1, s2, fs, 0) == hom_dim(s1, s2));
  REQUIRE(relative_ext(s1, s2, fs, 1) == 1);
  REQUIRE(relative_ext(s1, s2, fs, 1) == ext_dim(s1, s2, 1));
  REQUIRE(relative_ext(s1, s3, fs, 1) == 0);
  REQUIRE(relative_ext(s1, s2, fs, 2) == 0);

  REQUIRE(domdim_f(fs).is(1));
  REQUIRE(gldim_f(fs).is(1));
  REQUIRE(is_f_gorenstein(fs));
  REQUIRE_THROWS_AS(is_f_gorenstein(fs, 0), SearchExhausted);

  // the smallest algebra with dominant dimension two
  auto fr = exact_structure_from_generator(regular_module(rsz()));
  REQUIRE(domdim_f(fr).is(2));
  REQUIRE(gldim_f(fr).is(2));
  REQUIRE(is_f_gorenstein(fr));
}

TEST_CASE("split structure on a representation finite algebra") {
  auto alg = a3();
  auto kn = knit(alg);
  REQUIRE(kn.complete);
  REQUIRE(kn.indecs.size() == 6);
  auto g = direct_sum(alg, kn.indecs).rep;
  auto fs = exact_structure_from_generator(g);
  REQUIRE(add_equal(fs.h, g));

  auto p2 = interval_module(alg, 2, 3);
  auto s2 = interval_module(alg, 2, 2);
  auto hp = hom(p2, s2);
  auto kr = kernel(hp.basis[0]);
  ExactSeq<Rat> ar{{kr.first, p2, s2}, {kr.second, hp.basis[0]}};
  REQUIRE_FALSE(is_f_exact(ar, fs));

  REQUIRE(pd_f(s2, fs).is(0));
  REQUIRE(id_f(interval_module(alg, 1, 1), fs).is(0));
  REQUIRE(relative_ext(interval_module(alg, 1, 1), s2, fs, 1) == 0);
  REQUIRE(domdim_f(fs).is_infinite());
  REQUIRE(gldim_f(fs).is(0));
  REQUIRE(is_f_gorenstein(fs));
  REQUIRE(is_f_cotilting(fs.g, fs, 0));
  REQUIRE_FALSE(is_f_cotilting(
      direct_sum(alg, {interval_module(alg, 1, 3), interval_module(alg, 2, 3)}).rep, fs, 0));
}

TEST_CASE("structure certification and failure modes") {
  auto alg = a3();
  REQUIRE_THROWS_AS(exact_structure_from_generator(
                        direct_sum(alg, {interval_module(alg, 2, 3), interval_module(alg, 3, 3)}).rep),
                    NotGenerator);
  REQUIRE_THROWS_AS(exact_structure_from_cogenerator(regular_module(alg)), NotCogenerator);

  auto& fs = intro_structure();
  auto partner = direct_sum(alg, {intro_m(), coregular_module(alg)}).rep;
  REQUIRE(add_equal(fs.h, partner));

  // cogenerated from the other side the same structure comes back
  auto dual = exact_structure_from_cogenerator(partner);
  REQUIRE(add_equal(dual.g, fs.g));
  REQUIRE(add_equal(dual.h, fs.h));

  auto p2 = interval_module(alg, 2, 3);
  auto s2 = interval_module(alg, 2, 2);
  ExactSeq<Rat> bad{{p2, s2}, {hom(p2, s2).basis[0]}};
  REQUIRE_THROWS_AS(is_f_exact(bad, fs), std::invalid_argument);

  FDimension fin{FDimension::Kind::finite, 2};
  REQUIRE(fin.is(2));
  REQUIRE(fin.ge(2));
  REQUIRE_FALSE(fin.ge(3));
  REQUIRE(fin.le(2));
  REQUIRE_FALSE(fin.is_infinite());
  REQUIRE(fin.str() == "2");
  FDimension inf{FDimension::Kind::infinite, 0};
  REQUIRE(inf.is_infinite());
  REQUIRE(inf.ge(100));
  REQUIRE_FALSE(inf.le(100));
  REQUIRE(inf.str() == "infinity");
  FDimension atl{FDimension::Kind::at_least, 3};
  REQUIRE(atl.ge(3));
  REQUIRE_THROWS_AS(atl.ge(4), CapExceeded);
  REQUIRE_FALSE(atl.le(2));
  REQUIRE_THROWS_AS(atl.le(3), CapExceeded);
  REQUIRE(atl.str() == ">= 3");
}

TEST_CASE("running example invariants") {
  auto alg = a3();
  auto& fs = intro_structure();
  auto m = intro_m();

  auto s1 = interval_module(alg, 1, 1);
  auto p3 = interval_module(alg, 3, 3);
  REQUIRE(relative_ext(s1, p3, fs, 1) == 0);
  REQUIRE(relative_ext(s1, p3, fs, 2) == 1);
  REQUIRE(pd_f(s1, fs).is(2));
  REQUIRE(id_f(p3, fs).is(2));
  REQUIRE(domdim_f(fs).is(2));
  REQUIRE(gldim_f(fs).is(2));

  auto addm = make_add(m);
  REQUIRE(addm.classes.size() == 3);
  REQUIRE(addm.basic.gamma->dim == 6);
  REQUIRE(is_k_f_faithful(m, fs, 1));

  // the relative chains of m recover exactly the generator and cogenerator
  for (auto& x : all_intervals(alg, 3)) {
    REQUIRE(in_cogen_k_f(x, addm, fs, 1) == in_add(x, fs.addg));
    REQUIRE(in_gen_k_f(x, addm, fs, 1) == in_add(x, fs.addh));
  }

  // the generator embedding lands in modules cogenerated by the split part
  auto delta = delta_algebra(fs);
  std::vector<RepPtr<Rat>> inj;
  for (size_t c = 0; c < fs.addg.basic.dec.copies.size(); c++)
    if (is_projective(fs.addg.basic.dec.copies[c].leaf)) inj.push_back(injective_at(delta, int(c)));
  REQUIRE(inj.size() == 3);
  auto addj = make_add(direct_sum(delta, inj).rep);
  for (auto x : {interval_module(alg, 2, 2), interval_module(alg, 1, 3), m})
    REQUIRE(in_cogen_k(hom_embed(x, fs), addj, 1));

  REQUIRE(is_f_gorenstein(fs));
}

TEST_CASE("membership routes collapse when extensions vanish") {
  auto alg = a3();
  auto& fs = intro_structure();
  auto ivs = all_intervals(alg, 3);
  auto i2 = ivs[1];

  auto m = direct_sum(alg, {interval_module(alg, 1, 3), interval_module(alg, 1, 1)}).rep;
  REQUIRE(ext_dim(i2, m, 1) == 0);
  auto addm = make_add(m);
  for (unsigned mask = 1; mask < 64u; mask++) {
    auto x = pick(alg, ivs, mask);
    bool plain = in_cogen_k(x, addm, 1) && ext_dim(i2, x, 1) == 0;
    REQUIRE(in_cogen_k_f(x, addm, fs, 1) == plain);
  }

  // chain membership can also be read off over the cogenerator endo algebra
  auto& sig = fs.addh.basic;
  auto addmh = make_add(apply_hom_functor(intro_m(), sig).rep);
  auto addim = make_add(intro_m());
  for (auto& x : ivs)
    for (int k = 0; k <= 1; k++)
      REQUIRE(in_cogen_k_f(x, addim, fs, k) ==
              in_gen_k(apply_hom_functor(x, sig).rep, addmh, k));
}

TEST_CASE("faithful modules form a principal filter") {
  auto alg = a3();
  auto& fs = intro_structure();
  auto ivs = all_intervals(alg, 3);
  const unsigned need = (1u << 1) | (1u << 2) | (1u << 4);  // [1,2], [1,3], [2,3]
  int positives = 0;
  for (unsigned mask = 1; mask < 64u; mask++) {
    bool f = is_k_f_faithful(pick(alg, ivs, mask), fs, 1);
    REQUIRE(f == ((mask & need) == need));
    if (f) positives++;
  }
  REQUIRE(positives == 8);

  // the first approximation kernel of the cogenerator pins the filter down
  REQUIRE(is_isomorphic(relative_syzygy(fs.h, fs.addg, 1), interval_module(alg, 2, 2)));
}

TEST_CASE("faithfulness is destroyed across the endo transport") {
  auto alg = rsz();
  auto s1 = simple_at(alg, 0);
  auto s2 = simple_at(alg, 1);
  auto fs = exact_structure_from_generator(direct_sum(alg, {regular_module(alg), s1}).rep);
  REQUIRE(add_equal(fs.h, direct_sum(alg, {coregular_module(alg), s2}).rep));
  REQUIRE(is_k_f_faithful(fs.g, fs, 1));

  auto& e = fs.addg.basic;
  int cp2 = -1;
  for (size_t c = 0; c < e.dec.copies.size(); c++)
    if (is_isomorphic(e.dec.copies[c].leaf, projective_at(alg, 1))) cp2 = int(c);
  REQUIRE(cp2 >= 0);
  auto dm = apply_dhom_functor(s2, e).rep;
  auto sc = simple_at(e.gamma, cp2);
  REQUIRE(is_isomorphic(dm, sc));

  // enlarging the cogenerator by that simple breaks one-step faithfulness
  auto fr = exact_structure_from_cogenerator(
      direct_sum(e.gamma, {e.bimodule, sc, coregular_module(e.gamma)}).rep);
  REQUIRE_FALSE(is_k_f_faithful(e.bimodule, fr, 1));
  auto sd = tau_inv(sc);
  REQUIRE(sd->total() > 0);
  REQUIRE_FALSE(in_cogen_k(sd, make_add(e.bimodule), 0));
}

TEST_CASE("two incoming arrows give a relative Auslander structure") {
  auto alg = dee4();
  auto p2 = projective_at(alg, 1);
  auto t1 = tau_inv(p2);
  auto t2 = tau_inv(t1);
  REQUIRE(t1->total() > 0);
  REQUIRE(t2->total() > 0);
  auto m = direct_sum(alg, {p2, t1, t2}).rep;
  auto g = direct_sum(alg, {m, projective_at(alg, 0), projective_at(alg, 2), projective_at(alg, 3)}).rep;
  auto fs = exact_structure_from_generator(g);
  REQUIRE(add_equal(fs.h, direct_sum(alg, {m, injective_at(alg, 0), injective_at(alg, 2),
                                           injective_at(alg, 3)}).rep));

  auto kn = knit(alg);
  REQUIRE(kn.complete);
  REQUIRE(kn.indecs.size() == 12);
  auto addm = make_add(m);
  for (auto& x : kn.indecs)
    REQUIRE(in_add(x, addm) == (in_add(x, fs.addg) && in_add(x, fs.addh)));

  // the leading resolution of the last injective runs through the slice
  auto i4 = injective_at(alg, 3);
  auto ap1 = minimal_right_approx(addm, i4);
  REQUIRE(is_isomorphic(ap1.map.s, t1));
  REQUIRE(cokernel(ap1.map).first->total() == 0);
  auto z = kernel(ap1.map);
  auto ap2 = minimal_right_approx(addm, z.first);
  REQUIRE(is_isomorphic(ap2.map.s, p2));
  auto k2 = kernel(ap2.map);
  REQUIRE(is_isomorphic(k2.first, projective_at(alg, 3)));
  ExactSeq<Rat> s{{k2.first, ap2.map.s, ap1.map.s, i4},
                  {k2.second, compose(z.second, ap2.map), ap1.map}};
  REQUIRE(is_exact_sequence(s));
  REQUIRE(is_f_exact(s, fs));

  REQUIRE(domdim_f(fs).is(2));
  REQUIRE(gldim_f(fs).is(2));
  REQUIRE(addm.classes.size() == 3);
  REQUIRE(addm.basic.gamma->dim == 8);

  int missing = 0;
  for (auto& x : kn.indecs)
    if (!in_add(x, fs.addg) && !in_add(x, fs.addh)) {
      missing++;
      REQUIRE(pd_f(x, fs).is(1));
    }
  REQUIRE(missing == 3);
}

TEST_CASE("long chain relative Auslander structure") {
  auto alg = a5();
  auto m = direct_sum(alg, long_intervals(alg, 5)).rep;
  REQUIRE(m->total() == 30);
  auto fs = exact_structure_from_generator(direct_sum(alg, {m, interval_module(alg, 5, 5)}).rep);
  REQUIRE(add_equal(fs.h, direct_sum(alg, {m, interval_module(alg, 1, 1)}).rep));

  REQUIRE(pd_f(coregular_module(alg), fs).is(4));
  auto cur = interval_module(alg, 1, 1);
  for (int j = 0; j < 4; j++) {
    auto ap = minimal_right_approx(fs.addg, cur);
    REQUIRE(is_isomorphic(ap.map.s, interval_module(alg, j + 1, j + 2)));
    cur = kernel(ap.map).first;
    REQUIRE(is_isomorphic(cur, interval_module(alg, j + 2, j + 2)));
  }
  REQUIRE(in_add(cur, fs.addg));

  REQUIRE(domdim_f(fs).is(4));
  REQUIRE(gldim_f(fs).is(4));
  REQUIRE(make_add(m).classes.size() == 10);
}

TEST_CASE("cotilting enumeration matches the classical counts") {
  auto alg = a3();
  auto fs = exact_structure_from_generator(regular_module(alg));
  auto ivs = all_intervals(alg, 3);
  int injcount = 0;
  std::vector<RepPtr<Rat>> found;
  for (unsigned mask = 1; mask < 64u; mask++) {
    auto c = pick(alg, ivs, mask);
    if (is_f_cotilting(c, fs, 0)) injcount++;
    if (is_f_cotilting(c, fs, 1)) found.push_back(c);
  }
  REQUIRE(injcount == 1);
  REQUIRE(found.size() == 5);

  // membership in the one step chain is cut out by extension vanishing
  for (auto& c : found) {
    auto addc = make_add(c);
    for (unsigned mask = 1; mask < 64u; mask++) {
      auto x = pick(alg, ivs, mask);
      REQUIRE(in_cogen_k_f(x, addc, fs, 0) == (relative_ext(x, c, fs, 1) == 0));
    }
  }

  auto b4 = a4();
  auto fs4 = exact_structure_from_generator(regular_module(b4));
  auto ivs4 = all_intervals(b4, 4);
  int n4 = int(ivs4.size());
  std::vector<std::vector<int>> ext1(n4, std::vector<int>(n4));
  for (int i = 0; i < n4; i++)
    for (int j = 0; j < n4; j++) ext1[i][j] = ext_dim(ivs4[i], ivs4[j], 1);
  std::vector<RepPtr<Rat>> found4;
  for (unsigned mask = 1; mask < 1024u; mask++) {
    bool orth = true;
    for (int i = 0; i < n4 && orth; i++)
      if (mask & (1u << i))
        for (int j = 0; j < n4 && orth; j++)
          if ((mask & (1u << j)) && ext1[i][j] != 0) orth = false;
    if (!orth) continue;
    auto c = pick(b4, ivs4, mask);
    if (is_f_cotilting(c, fs4, 1)) found4.push_back(c);
  }
  REQUIRE(found4.size() == 14);
  for (auto& c : found4) {
    auto addc = make_add(c);
    for (auto& x : ivs4)
      REQUIRE(in_cogen_k_f(x, addc, fs4, 0) == (relative_ext(x, c, fs4, 1) == 0));
  }
}

TEST_CASE("minimum and summand cotilting constructions") {
  auto alg = a3();
  auto ord = exact_structure_from_generator(regular_module(alg));
  REQUIRE(add_equal(minimum_cotilting(ord, 1), regular_module(alg)));

  auto& fs = intro_structure();
  auto built = cotilt_from_summand(intro_m(), fs, 2);
  REQUIRE(add_equal(built, fs.g));
  REQUIRE(add_equal(minimum_cotilting(fs, 2), fs.g));

  auto ivs = all_intervals(alg, 3);
  std::vector<RepPtr<Rat>> cots;
  for (unsigned mask = 1; mask < 64u; mask++) {
    auto c = pick(alg, ivs, mask);
    if (is_f_cotilting(c, fs, 2)) cots.push_back(c);
  }
  bool seen = false;
  for (auto& c : cots) seen = seen || add_equal(c, fs.g);
  REQUIRE(seen);
  for (auto& c : cots)
    for (int i = 1; i <= 2; i++) REQUIRE(relative_ext(fs.g, c, fs, i) == 0);

  REQUIRE_THROWS_AS(cotilt_from_summand(interval_module(alg, 3, 3), fs, 2), PreconditionFailed);
}

TEST_CASE("cotilting mutation on the square example") {
  auto alg = a4();
  auto m = direct_sum(alg, long_intervals(alg, 4)).rep;
  auto fs = exact_structure_from_generator(
      direct_sum(alg, {m, interval_module(alg, 4, 4)}).rep);
  REQUIRE(add_equal(fs.h, direct_sum(alg, {m, interval_module(alg, 1, 1)}).rep));
  REQUIRE(domdim_f(fs).is(3));
  REQUIRE(gldim_f(fs).is(3));

  auto s3 = interval_module(alg, 3, 3);
  auto l = direct_sum(alg, {m, s3}).rep;
  REQUIRE(is_f_cotilting(l, fs, 2));
  REQUIRE(in_cogen_k_f(l, make_add(m), fs, 1));

  REQUIRE(id_f(l, fs).is(2));
  {
    auto ap0 = minimal_left_approx(l, fs.addh);
    REQUIRE(is_isomorphic(ap0.map.t, direct_sum(alg, {m, interval_module(alg, 2, 3)}).rep));
    auto c0 = cokernel(ap0.map).first;
    auto ap1 = minimal_left_approx(c0, fs.addh);
    REQUIRE(is_isomorphic(ap1.map.t, interval_module(alg, 1, 2)));
    auto c1 = cokernel(ap1.map).first;
    auto ap2 = minimal_left_approx(c1, fs.addh);
    REQUIRE(is_isomorphic(ap2.map.t, interval_module(alg, 1, 1)));
    REQUIRE(cokernel(ap2.map).first->total() == 0);
  }
  {
    auto addl = make_add(l);
    auto ap0 = minimal_right_approx(addl, fs.h);
    REQUIRE(is_isomorphic(ap0.map.s, direct_sum(alg, {m, interval_module(alg, 1, 2)}).rep));
    auto k0 = kernel(ap0.map).first;
    auto ap1 = minimal_right_approx(addl, k0);
    REQUIRE(is_isomorphic(ap1.map.s, interval_module(alg, 2, 3)));
    auto k1 = kernel(ap1.map).first;
    auto ap2 = minimal_right_approx(addl, k1);
    REQUIRE(is_isomorphic(ap2.map.s, s3));
    REQUIRE(kernel(ap2.map).first->total() == 0);
  }

  auto up = mutate_cotilting(l, s3, fs, false);
  REQUIRE(add_equal(up, fs.g));
  REQUIRE(is_f_cotilting(up, fs, 3));
  REQUIRE_FALSE(is_f_cotilting(up, fs, 2));
  auto back = mutate_cotilting(up, interval_module(alg, 4, 4), fs, true);
  REQUIRE(add_equal(back, l));

  REQUIRE_THROWS_AS(mutate_cotilting(l, interval_module(alg, 2, 2), fs, true), NotASummand);
  REQUIRE_THROWS_AS(
      mutate_cotilting(interval_module(alg, 4, 4), interval_module(alg, 4, 4), fs, true),
      NoExchangeSequence);
}

TEST_CASE("strong dualizing sequences") {
  // the exchanged pair, padded by the spine, gives a strong zero step sequence
  auto alg = a4();
  auto m = direct_sum(alg, long_intervals(alg, 4)).rep;
  auto addm = make_add(m);
  auto lpad = direct_sum(alg, {m, interval_module(alg, 4, 4)}).rep;
  auto s = build_dualizing_sequence(lpad, addm, 0);
  REQUIRE(s.nodes.size() == 3);
  REQUIRE(add_equal(s.nodes.back(), direct_sum(alg, {m, interval_module(alg, 3, 3)}).rep));
  REQUIRE(verify_strong_dualizing(s, addm, 0));

  // a balanced module containing a shifted pair produces one over its endo algebra
  auto b3 = a3();
  auto big = basic_of(direct_sum(b3, {regular_module(b3), coregular_module(b3)}).rep);
  auto adde = make_add(big);
  auto& e = adde.basic;
  auto gside = direct_sum(b3, {regular_module(b3), interval_module(b3, 1, 2)}).rep;
  auto hside = direct_sum(b3, {coregular_module(b3), interval_module(b3, 2, 3)}).rep;
  auto lend = apply_hom_functor(gside, e).rep;
  auto rend = apply_dhom_functor(hside, e).rep;
  auto addn = make_add(e.bimodule);
  auto sq = build_dualizing_sequence(lend, addn, 1);
  REQUIRE(add_equal(sq.nodes.back(), rend));
  REQUIRE(verify_strong_dualizing(sq, addn, 1));
}
