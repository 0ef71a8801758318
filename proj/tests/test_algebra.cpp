#include <catch2/catch_amalgamated.hpp>

#include "qfb/algebra.hpp"

using namespace qfb;

namespace {

Quiver square_quiver() {
  Quiver q;
  q.vertices = {"a", "b", "c", "d"};
  q.add_arrow("al", "a", "b");
  q.add_arrow("be", "b", "c");
  q.add_arrow("ga", "a", "d");
  q.add_arrow("de", "d", "c");
  return q;
}

}  // namespace

TEST_CASE("path algebra of A3 has dimension 6") {
  auto a = algebra_from_quiver<Rat>(linear_quiver(3), {});
  CHECK(a->dim == 6);
  CHECK(a->nblocks == 3);
  // one length-2 path, labelled in function-composition order
  CHECK(a->basis_labels.back() == "a2*a1");
}

TEST_CASE("A3 modulo beta*alpha has dimension 5") {
  Quiver q = linear_quiver(3);
  Relation<Rat> r{{Rat(1), {q.arrow_index("a1"), q.arrow_index("a2")}}};
  auto a = algebra_from_quiver<Rat>(q, {r});
  CHECK(a->dim == 5);
}

TEST_CASE("commuting square has dimension 9") {
  Quiver q = square_quiver();
  Relation<Rat> r{{Rat(1), {q.arrow_index("al"), q.arrow_index("be")}},
                  {Rat(-1), {q.arrow_index("ga"), q.arrow_index("de")}}};
  auto a = algebra_from_quiver<Rat>(q, {r});
  CHECK(a->dim == 9);
}

TEST_CASE("multiplication follows function-composition order") {
  auto a = algebra_from_quiver<Rat>(linear_quiver(3), {});
  int a1 = a->origin->arrow_basis[0], a2 = a->origin->arrow_basis[1];
  // a2 * a1 = apply a1 then a2: the length-2 path
  CHECK(a->prod(a2, a1).size() == 1);
  CHECK(a->prod(a1, a2).empty());
  // e_2 * a1 = a1 = a1 * e_1
  int e1 = -1, e2 = -1;
  for (int i = 0; i < a->dim; i++) {
    if (a->basis_labels[i] == "e_1") e1 = i;
    if (a->basis_labels[i] == "e_2") e2 = i;
  }
  REQUIRE(e1 >= 0);
  REQUIRE(e2 >= 0);
  CHECK(a->prod(e2, a1) == SparseVec<Rat>{{a1, Rat(1)}});
  CHECK(a->prod(a1, e1) == SparseVec<Rat>{{a1, Rat(1)}});
  CHECK(a->prod(a1, e2).empty());
}

TEST_CASE("opposite is an involution and swaps blocks") {
  Quiver q = square_quiver();
  Relation<Rat> r{{Rat(1), {q.arrow_index("al"), q.arrow_index("be")}},
                  {Rat(-1), {q.arrow_index("ga"), q.arrow_index("de")}}};
  auto a = algebra_from_quiver<Rat>(q, {r});
  auto op = opposite(*a);
  CHECK(op->dim == a->dim);
  CHECK(op->src == a->tgt);
  auto opop = opposite(*op);
  CHECK(opop->src == a->src);
  CHECK(opop->tgt == a->tgt);
  for (int i = 0; i < a->dim; i++)
    for (int j = 0; j < a->dim; j++) CHECK(opop->prod(i, j) == a->prod(i, j));
}

TEST_CASE("commutative algebra equals its opposite") {
  Quiver q;
  q.vertices = {"1"};
  q.add_arrow("x", "1", "1");
  Relation<Rat> r{{Rat(1), {0, 0}}};  // x^2 = 0
  auto a = algebra_from_quiver<Rat>(q, {r});
  CHECK(a->dim == 2);
  auto op = opposite(*a);
  for (int i = 0; i < a->dim; i++)
    for (int j = 0; j < a->dim; j++) CHECK(op->prod(i, j) == a->prod(i, j));
}

TEST_CASE("inadmissible and malformed relations are rejected") {
  Quiver loop;
  loop.vertices = {"1"};
  loop.add_arrow("x", "1", "1");
  CHECK_THROWS_AS(algebra_from_quiver<Rat>(loop, {}, {}, 12), NotAdmissible);

  Quiver q = linear_quiver(3);
  Relation<Rat> bad{{Rat(1), {q.arrow_index("a1")}}};
  CHECK_THROWS_AS(algebra_from_quiver<Rat>(q, {bad}), BadRelation);
  Relation<Rat> nonpar{{Rat(1), {0, 1}}, {Rat(1), {1, 0}}};
  CHECK_THROWS_AS(algebra_from_quiver<Rat>(q, {nonpar}), BadRelation);
}

TEST_CASE("radical of A3 is spanned by the nontrivial paths") {
  auto a = algebra_from_quiver<Rat>(linear_quiver(3), {});
  auto rad = radical_basis(*a);
  CHECK(rad.size() == 3);
  for (auto& v : rad)
    for (auto& [i, c] : v) CHECK(!a->origin->path_of[i].empty());
}

TEST_CASE("prime field construction works") {
  Fp::modulus = 32003;
  FieldSpec fs{FieldSpec::Kind::prime, 32003};
  Quiver q = linear_quiver(3);
  Relation<Fp> r{{Fp(1), {q.arrow_index("a1"), q.arrow_index("a2")}}};
  auto a = algebra_from_quiver<Fp>(q, {r}, fs);
  CHECK(a->dim == 5);
}
