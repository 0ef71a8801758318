#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qfb {

/// Description of the coefficient field, as it appears in input files.
struct FieldSpec {
  enum class Kind { rational, prime };
  Kind kind = Kind::rational;
  std::uint32_t p = 0;  // set iff kind == prime
};

/// Arbitrary-precision rational scalar (the default field).
using Rat = mpq_class;

/// Prime-field scalar. The modulus is process-global state set once per run
/// (one algebra, one field per CLI invocation); values themselves are plain.
struct Fp {
  static inline std::uint32_t modulus = 32003;

  std::uint32_t v = 0;

  Fp() = default;
  Fp(long x) {
    long m = static_cast<long>(modulus);
    long r = x % m;
    if (r < 0) r += m;
    v = static_cast<std::uint32_t>(r);
  }

  friend Fp operator+(Fp a, Fp b) { return from_raw((std::uint64_t(a.v) + b.v) % modulus); }
  friend Fp operator-(Fp a, Fp b) { return from_raw((std::uint64_t(a.v) + modulus - b.v) % modulus); }
  friend Fp operator*(Fp a, Fp b) { return from_raw(std::uint64_t(a.v) * b.v % modulus); }
  friend Fp operator/(Fp a, Fp b) { return a * b.inv(); }
  Fp operator-() const { return from_raw(v == 0 ? 0 : modulus - v); }
  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }
  Fp& operator/=(Fp o) { return *this = *this / o; }
  friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
  friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }

  Fp inv() const {
    if (v == 0) throw std::domain_error("Fp: division by zero");
    // Fermat: v^(p-2)
    std::uint64_t base = v, acc = 1, e = modulus - 2;
    while (e) {
      if (e & 1) acc = acc * base % modulus;
      base = base * base % modulus;
      e >>= 1;
    }
    return from_raw(acc);
  }

  static Fp from_raw(std::uint64_t r) {
    Fp x;
    x.v = static_cast<std::uint32_t>(r);
    return x;
  }
};

inline bool is_zero(const Rat& q) { return q.get_num() == 0; }
inline bool is_zero(Fp x) { return x.v == 0; }

template <class K> K scalar_one() { return K(1); }
template <class K> K scalar_zero() { return K(0); }

/// Parse "a" or "a/b" (decimal, optional sign).
inline void scalar_from_string(const std::string& s, Rat& out) {
  out = Rat(s);
  out.canonicalize();
}
inline void scalar_from_string(const std::string& s, Fp& out) {
  auto slash = s.find('/');
  auto parse_int = [](const std::string& t) {
    if (t.empty()) throw std::invalid_argument("empty scalar literal");
    return std::stol(t);
  };
  if (slash == std::string::npos) {
    out = Fp(parse_int(s));
  } else {
    Fp num(parse_int(s.substr(0, slash)));
    Fp den(parse_int(s.substr(slash + 1)));
    out = num / den;
  }
}
template <class K> K scalar_parse(const std::string& s) {
  K x;
  scalar_from_string(s, x);
  return x;
}

inline std::string scalar_to_string(const Rat& q) { return q.get_str(); }
inline std::string scalar_to_string(Fp x) { return std::to_string(x.v); }

}  // namespace qfb
