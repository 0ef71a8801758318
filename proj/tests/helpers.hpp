#pragma once

#include <map>

#include "qfb/module.hpp"

// shared helpers for the linear quiver 1 -> 2 -> ... -> n
namespace qfbtest {

using namespace qfb;

template <class K>
AlgPtr<K> an_algebra(int n) {
  return algebra_from_quiver<K>(linear_quiver(n), {});
}

/// Interval module [a,b] (1-based): one-dimensional on vertices a..b,
/// identity along the arrows inside the interval.
template <class K>
RepPtr<K> interval_module(AlgPtr<K> alg, int a, int b) {
  const Quiver& q = alg->origin->quiver;
  int n = int(q.vertices.size());
  std::vector<int> dims(n, 0);
  for (int v = a - 1; v <= b - 1; v++) dims[v] = 1;
  std::vector<Mat<K>> arr;
  for (int i = 0; i < n - 1; i++) {
    if (a <= i + 1 && i + 2 <= b)
      arr.push_back(Mat<K>::identity(1));
    else
      arr.push_back(Mat<K>(dims[i + 1], dims[i]));
  }
  return rep_from_arrow_matrices(alg, dims, arr,
                                 "[" + std::to_string(a) + "," + std::to_string(b) + "]");
}

/// Multiplicity of each interval in a representation, from ranks of the
/// composite maps along the quiver. r(x,y) counts the intervals containing
/// [x,y]; inclusion-exclusion recovers the multiplicities. Uses nothing but
/// matrix rank, so it is an independent check on decompose().
template <class K>
std::map<std::pair<int, int>, int> interval_multiplicities(const Rep<K>& m) {
  const auto& origin = *m.alg->origin;
  int n = int(origin.quiver.vertices.size());
  auto r = [&](int x, int y) -> int {
    if (x < 1 || y > n || x > y) return 0;
    if (x == y) return m.dims[x - 1];
    Mat<K> c = m.act[origin.arrow_basis[x - 1]];
    for (int k = x; k <= y - 2; k++) c = m.act[origin.arrow_basis[k]] * c;
    return rank(c);
  };
  std::map<std::pair<int, int>, int> mult;
  for (int a = 1; a <= n; a++)
    for (int b = a; b <= n; b++) {
      int v = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1);
      if (v != 0) mult[{a, b}] = v;
    }
  return mult;
}

}  // namespace qfbtest
