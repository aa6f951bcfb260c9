#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numbers>

#include "measinv/dyadic.hpp"
#include "measinv/spectra.hpp"
#include "oracle.hpp"

using namespace measinv;

namespace {

std::vector<double> naive_wht(const std::vector<double>& a) {
  // Colex index bits are the coordinates, so <x, y> is popcount(x & y).
  std::vector<double> out(a.size());
  for (std::size_t y = 0; y < a.size(); ++y) {
    for (std::size_t x = 0; x < a.size(); ++x) out[y] += (std::popcount(x & y) % 2 ? -1.0 : 1.0) * a[x];
  }
  return out;
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

// Random real measure on Z_2^n with ||m|| <= 1 and min |m^| >= some delta > 1/2:
// a dominant atom plus a small tail.
DyadicMeasure admissible(oracle::Rng& rng, int n) {
  std::vector<double> a(std::size_t{1} << n, 0.0);
  const double head = rng.uniform(0.55, 1.0);
  const double tail = rng.uniform(0.0, std::min(1.0 - head, head - 0.5 - 0.01));
  const std::size_t k = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(a.size()) - 1));
  a[k] = rng.uniform() < 0.5 ? -head : head;
  const auto count = rng.integer(1, 5);
  double left = tail;
  for (std::int64_t i = 0; i < count; ++i) {
    const double piece = i + 1 == count ? left : rng.uniform(0.0, left);
    left -= piece;
    const std::size_t j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(a.size()) - 1));
    if (j != k) a[j] += rng.uniform() < 0.5 ? -piece : piece;
  }
  return DyadicMeasure(n, std::move(a));
}

}  // namespace

TEST_SUITE("dyadic") {
  TEST_CASE("colex order") {
    CHECK(colex_index(GroupElement{{1, 0, 0}}) == 1);
    CHECK(colex_index(GroupElement{{0, 0, 1}}) == 4);
    CHECK(colex_index(GroupElement{{1, 1, 0}}) == 3);
    for (std::size_t k = 0; k < 8; ++k) CHECK(colex_index(colex_element(k, 3)) == k);
  }

  TEST_CASE("transform examples") {
    CHECK(wht(DyadicMeasure(1, {1.0, 0.0})) == std::vector<double>{1.0, 1.0});
    CHECK(close(wht(DyadicMeasure(1, {0.8, 0.2})), {1.0, 0.6}, 1e-15));
    CHECK(wht(DyadicMeasure(2, {0.25, 0.25, 0.25, 0.25})) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  }

  TEST_CASE("split examples") {
    const auto [b, c] = skondwa_split(DyadicMeasure(2, {0.7, 0.1, 0.1, 0.1}));
    CHECK(close(b.amplitudes(), {0.8, 0.2}, 1e-15));
    CHECK(close(c.amplitudes(), {0.6, 0.0}, 1e-15));

    const auto [b2, c2] = skondwa_split(DyadicMeasure(3, {0.1, -0.2, 0.3, 0.05, 0, 0, 0, 0}));
    CHECK(b2.amplitudes() == std::vector<double>{0.1, -0.2, 0.3, 0.05});
    CHECK(c2.amplitudes() == b2.amplitudes());

    const auto [b3, c3] = skondwa_split(DyadicMeasure(2, {0.25, 0.25, 0.25, 0.25}));
    CHECK(b3.amplitudes() == std::vector<double>{0.5, 0.5});
    CHECK(c3.amplitudes() == std::vector<double>{0.0, 0.0});

    CHECK_THROWS_AS(skondwa_split(DyadicMeasure(1, {0.5, 0.5})), Error);
  }

  TEST_CASE("greatest atom certificate examples") {
    const auto a = greatest_atom_certificate(DyadicMeasure(1, {0.8, 0.2}), 0.6);
    CHECK(a.max_atom == 0.8);
    CHECK(a.holds);
    CHECK(a.recursive_agrees);

    for (int n = 1; n <= 6; ++n) {
      std::vector<double> amps(std::size_t{1} << n, 0.0);
      amps[amps.size() - 1] = 1.0;
      const auto d = greatest_atom_certificate(DyadicMeasure(n, amps), 1.0);
      CHECK(d.max_atom == 1.0);
      CHECK(d.holds);
      CHECK(d.recursive_agrees);
    }

    const DiscreteMeasure complex(GroupSpec::cyclic(2),
                                  {{GroupElement{{0}}, 0.5}, {GroupElement{{1}}, std::complex<double>(0, 0.5)}});
    try {
      greatest_atom_certificate(complex, 1 / std::numbers::sqrt2);
      FAIL("expected PreconditionViolated");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PreconditionViolated);
      CHECK(std::string(e.what()).find("real") != std::string::npos);
    }
  }

  TEST_CASE("certificate preconditions are named") {
    try {
      greatest_atom_certificate(DyadicMeasure(1, {0.5, 0.5}), 0.6);
      FAIL("expected PreconditionViolated");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("min |mu^|") != std::string::npos);
    }
    CHECK_THROWS_AS(greatest_atom_certificate(DyadicMeasure(1, {0.9, 0.2}), 0.6), Error);
    CHECK_THROWS_AS(greatest_atom_certificate(DyadicMeasure(1, {1.0, 0.0}), 0.5), Error);
  }

  TEST_CASE("measure conversion round trip") {
    oracle::Rng rng(61);
    const auto g = GroupSpec::finite_product({2, 2, 2, 2});
    const auto mu = oracle::random_measure(rng, g, 7, 1.0, true);
    const auto m = DyadicMeasure::from_measure(mu);
    CHECK(m.to_measure() == mu);
    const auto p = transform(mu);
    const auto w = wht(m);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const auto y = colex_element(k, 4);
      CHECK(std::abs(p.values[g.index_of(y)] - w[k]) <= 1e-12);
    }
  }

  TEST_CASE("property: fast transform equals the naive sum and is an involution up to scale") {
    oracle::Rng rng(62);
    for (int n = 1; n <= 10; ++n) {
      std::vector<double> a(std::size_t{1} << n);
      for (auto& x : a) x = rng.uniform(-1, 1);
      const DyadicMeasure m(n, a);
      const auto w = wht(m);
      CHECK(close(w, naive_wht(a), 1e-10));
      auto twice = wht(DyadicMeasure(n, w));
      for (auto& x : twice) x /= static_cast<double>(a.size());
      CHECK(close(twice, a, 1e-9 / static_cast<double>(a.size())));
    }
  }

  TEST_CASE("property: split halves carry the two halves of the transform") {
    oracle::Rng rng(63);
    for (int t = 0; t < 200; ++t) {
      const int n = static_cast<int>(rng.integer(2, 8));
      std::vector<double> a(std::size_t{1} << n);
      for (auto& x : a) x = rng.uniform(-1, 1);
      const DyadicMeasure m(n, a);
      const auto w = wht(m);
      const auto [b, c] = skondwa_split(m);
      const std::size_t half = a.size() / 2;
      const auto wb = wht(b);
      const auto wc = wht(c);
      for (std::size_t y = 0; y < half; ++y) {
        // duals with last digit 0 pair with b, last digit 1 with c
        double sb = 0.0;
        double sc = 0.0;
        for (std::size_t x = 0; x < a.size(); ++x) {
          const double sign = std::popcount(x & y) % 2 ? -1.0 : 1.0;
          sb += sign * a[x];
          sc += sign * a[x] * ((x & half) ? -1.0 : 1.0);
        }
        CHECK(std::abs(wb[y] - sb) <= 1e-10);
        CHECK(std::abs(wc[y] - sc) <= 1e-10);
        CHECK(std::abs(w[y] - sb) <= 1e-10);
        CHECK(std::abs(w[y + half] - sc) <= 1e-10);
      }
    }
  }

  TEST_CASE("property: inductive certificate agrees with the direct maximum") {
    oracle::Rng rng(64);
    int tested = 0;
    for (int t = 0; t < 10000; ++t) {
      const int n = static_cast<int>(rng.integer(1, 10));
      const auto m = admissible(rng, n);
      const auto w = wht(m);
      double delta = 1.0;
      for (double v : w) delta = std::min(delta, std::abs(v));
      if (!(delta > 0.5)) continue;
      const auto c = greatest_atom_certificate(m, delta);
      CHECK(c.holds);
      CHECK(c.recursive_agrees);
      ++tested;
    }
    CHECK(tested > 9000);
  }
}
