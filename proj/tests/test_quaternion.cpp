#include <doctest.h>

#include <random>

#include "quatflow/quaternion.hpp"
#include "support.hpp"

using quatflow::Quat;
using namespace qf_test;

namespace {

// Left-multiplication matrix of a, written out independently of hamilton_mul.
Quat matrix_product(const Quat& a, const Quat& b) {
  const double m[4][4] = {{a.w, -a.x, -a.y, -a.z},
                          {a.x, a.w, -a.z, a.y},
                          {a.y, a.z, a.w, -a.x},
                          {a.z, -a.y, a.x, a.w}};
  double out[4];
  for (int r = 0; r < 4; ++r) out[r] = m[r][0] * b.w + m[r][1] * b.x + m[r][2] * b.y + m[r][3] * b.z;
  return {out[0], out[1], out[2], out[3]};
}

}  // namespace

TEST_CASE("multiplication table of the basis units") {
  const Quat one = Quat::identity(), i = Quat::i(), j = Quat::j(), k = Quat::k();
  const Quat units[4] = {one, i, j, k};
  // table[a][b] = units[a] * units[b] as (sign, unit index)
  const int table[4][4][2] = {{{1, 0}, {1, 1}, {1, 2}, {1, 3}},
                              {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
                              {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
                              {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Quat expect = static_cast<double>(table[a][b][0]) * units[table[a][b][1]];
      CHECK(units[a] * units[b] == expect);
    }
  }
  CHECK(i * j * k == -one);
}

TEST_CASE("worked products") {
  CHECK(Quat{0, 1, 0, 0} * Quat{0, 0, 1, 0} == Quat{0, 0, 0, 1});
  CHECK(Quat{1, 1, 0, 0} * Quat{1, 0, 1, 0} == Quat{1, 1, 1, 1});
  const Quat q{0.3, -2.0, 5.5, 1e-3};
  CHECK(Quat::identity() * q == q);
  CHECK(q * Quat::identity() == q);
}

TEST_CASE("conjugate and norm") {
  CHECK(conjugate(Quat{1, 2, 3, 4}) == Quat{1, -2, -3, -4});
  CHECK(conjugate(Quat{5, 0, 0, 0}) == Quat{5, 0, 0, 0});
  CHECK(norm_sq(Quat{0, 0, 0, 0}) == 0.0);
  CHECK(norm_sq(Quat{1, 1, 1, 1}) == 4.0);
  CHECK(magnitude(Quat{1, 1, 1, 1}) == 2.0);
}

TEST_CASE("algebraic identities on random samples") {
  std::mt19937_64 rng(20240601);
  for (int n = 0; n < 1000; ++n) {
    const Quat a = random_quat(rng), b = random_quat(rng), c = random_quat(rng);
    const Quat ab = a * b;
    CHECK(max_abs_diff(ab, matrix_product(a, b)) <= 1e-14 * magnitude(a) * magnitude(b));

    const double scale = magnitude(a) * magnitude(b) * magnitude(c);
    CHECK(max_abs_diff((a * b) * c, a * (b * c)) <= 1e-12 * scale);
    CHECK(max_abs_diff(a * (b + c), a * b + a * c) <= 1e-12 * magnitude(a) * (magnitude(b) + magnitude(c)));
    CHECK(max_abs_diff((a + b) * c, a * c + b * c) <= 1e-12 * magnitude(c) * (magnitude(a) + magnitude(b)));
    CHECK(max_abs_diff(conjugate(ab), conjugate(b) * conjugate(a)) <= 1e-14 * magnitude(a) * magnitude(b));
    CHECK(rel_diff(norm_sq(ab), norm_sq(a) * norm_sq(b)) <= 1e-12);
    CHECK(conjugate(conjugate(a)) == a);
    CHECK(max_abs_diff(a * conjugate(a), Quat{norm_sq(a), 0, 0, 0}) <= 1e-15 * norm_sq(a));
  }
}

TEST_CASE("non-commutativity") {
  CHECK(Quat::i() * Quat::j() == -(Quat::j() * Quat::i()));
}
