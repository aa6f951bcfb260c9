#include <doctest.h>

#include "measinv/error.hpp"
#include "measinv/measure.hpp"
#include "oracle.hpp"

using namespace measinv;
using cplx = std::complex<double>;

namespace {

GroupElement el(std::vector<std::int64_t> c) { return GroupElement{std::move(c)}; }

DiscreteMeasure on_z2(cplx a0, cplx a1) {
  return DiscreteMeasure(GroupSpec::cyclic(2), {{el({0}), a0}, {el({1}), a1}});
}

double distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return combine(a, 1.0, b, -1.0).tv_norm();
}

}  // namespace

TEST_SUITE("measure") {
  TEST_CASE("construction canonicalizes") {
    const auto g = GroupSpec::cyclic(4);
    const DiscreteMeasure mu(g, {{el({5}), 0.25}, {el({1}), 0.25}, {el({2}), 0.0}, {el({-1}), 0.5}});
    REQUIRE(mu.support_size() == 2);
    CHECK(mu.at(el({1})) == cplx(0.5));
    CHECK(mu.at(el({3})) == cplx(0.5));
    CHECK(mu.at(el({2})) == cplx(0.0));
  }

  TEST_CASE("total variation norm") {
    CHECK(DiscreteMeasure::dirac(GroupSpec::cyclic(3), el({0})).tv_norm() == 1.0);
    CHECK(on_z2(0.5, cplx(0, 0.5)).tv_norm() == 1.0);
    CHECK(on_z2(0.3, -0.4).tv_norm() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(tv_norm(DiscreteMeasure(GroupSpec::lattice(2))) == 0.0);
  }

  TEST_CASE("convolution examples") {
    const auto g = GroupSpec::finite_product({6, 4});
    oracle::Rng rng(3);
    const auto mu = oracle::random_measure(rng, g, 5, 1.0);
    CHECK(convolve(mu, DiscreteMeasure::dirac(g, g.zero())) == mu);
    CHECK(convolve(DiscreteMeasure::dirac(g, el({4, 1})), DiscreteMeasure::dirac(g, el({5, 3}))) ==
          DiscreteMeasure::dirac(g, el({3, 0})));
    const auto prod = convolve(on_z2(0.8, 0.2), on_z2(4.0 / 3.0, -1.0 / 3.0));
    CHECK(distance(prod, DiscreteMeasure::dirac(GroupSpec::cyclic(2), el({0}))) <= 1e-15);
    CHECK(prod.support_size() == 1);
  }

  TEST_CASE("convolution on a lattice") {
    const auto z2 = GroupSpec::lattice(2);
    const DiscreteMeasure a(z2, {{el({0, 0}), 1.0}, {el({1, 0}), 1.0}});
    const DiscreteMeasure b(z2, {{el({0, 0}), 1.0}, {el({-1, 0}), -1.0}});
    const auto c = convolve(a, b);
    CHECK(c.at(el({-1, 0})) == cplx(-1.0));
    CHECK(c.at(el({0, 0})) == cplx(0.0));
    CHECK(c.at(el({1, 0})) == cplx(1.0));
    CHECK(c.support_size() == 2);
  }

  TEST_CASE("convolution rejects different groups") {
    try {
      convolve(DiscreteMeasure::dirac(GroupSpec::cyclic(2), el({0})),
               DiscreteMeasure::dirac(GroupSpec::cyclic(3), el({0})));
      FAIL("expected GroupMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::GroupMismatch);
    }
  }

  TEST_CASE("involution") {
    const auto z = GroupSpec::lattice(1);
    const DiscreteMeasure sym(z, {{el({1}), 0.5}, {el({-1}), 0.5}});
    CHECK(involute(sym) == sym);
    CHECK(involute(on_z2(0.5, cplx(0, 0.5))) == on_z2(0.5, cplx(0, -0.5)));
    const auto z2 = GroupSpec::lattice(2);
    CHECK(involute(DiscreteMeasure::dirac(z2, el({2, -5}))) == DiscreteMeasure::dirac(z2, el({-2, 5})));
  }

  TEST_CASE("translation") {
    const auto g = GroupSpec::cyclic(5);
    const cplx a(0.3, -0.4);
    const auto t = translate(DiscreteMeasure::dirac(g, el({2}), a), el({2}), std::conj(a) / std::abs(a));
    REQUIRE(t.support_size() == 1);
    CHECK(t.atoms()[0].element == el({0}));
    CHECK(std::abs(t.atoms()[0].amplitude - cplx(0.5)) <= 1e-16);

    const auto halves = on_z2(0.5, cplx(0, 0.5));
    CHECK(translate(halves, el({0}), 1.0) == halves);

    const auto z6 = GroupSpec::cyclic(6);
    const DiscreteMeasure mu(z6, {{el({1}), 0.2}, {el({3}), 0.8}});
    CHECK(translate(mu, el({3}), 1.0) == DiscreteMeasure(z6, {{el({0}), 0.8}, {el({4}), 0.2}}));
    CHECK_THROWS_AS(translate(mu, el({3}), 2.0), Error);
  }

  TEST_CASE("sorted atoms") {
    const auto s = sorted_atoms(on_z2(0.5, cplx(0, 0.5)));
    REQUIRE(s.size() == 2);
    CHECK(s[0].element == el({0}));
    CHECK(s[1].element == el({1}));
    const auto t = sorted_atoms(on_z2(0.2, 0.8));
    CHECK(t[0].element == el({1}));
    CHECK(t[0].amplitude == cplx(0.8));
    CHECK(sorted_atoms(DiscreteMeasure(GroupSpec::cyclic(2))).empty());
  }

  TEST_CASE("point mass at zero of the self-convolution") {
    CHECK(point_mass_at_zero_of_selfconv(DiscreteMeasure::dirac(GroupSpec::cyclic(2), el({0}))) == 1.0);
    CHECK(point_mass_at_zero_of_selfconv(on_z2(0.5, cplx(0, 0.5))) == 0.5);
    const auto mu = on_z2(0.9, 0.1);
    CHECK(point_mass_at_zero_of_selfconv(mu) == doctest::Approx(0.82).epsilon(1e-15));
    CHECK(std::abs(convolve(mu, involute(mu)).at(el({0})) - 0.82) <= 1e-12);
  }

  TEST_CASE("property: submultiplicative norm, commutative, associative") {
    oracle::Rng rng(21);
    const std::vector<GroupSpec> groups{GroupSpec::cyclic(8), GroupSpec::finite_product({6, 4}),
                                        GroupSpec::finite_product({2, 2, 2, 2}), GroupSpec::lattice(2)};
    for (const auto& g : groups) {
      for (int t = 0; t < 100; ++t) {
        const auto a = oracle::random_measure(rng, g, 4, rng.uniform(0.1, 2.0));
        const auto b = oracle::random_measure(rng, g, 4, rng.uniform(0.1, 2.0));
        const auto c = oracle::random_measure(rng, g, 3, rng.uniform(0.1, 2.0));
        CHECK(convolve(a, b).tv_norm() <= a.tv_norm() * b.tv_norm() + 1e-12);
        CHECK(distance(convolve(a, b), convolve(b, a)) <= 1e-12);
        CHECK(distance(convolve(convolve(a, b), c), convolve(a, convolve(b, c))) <= 1e-12);
      }
    }
  }

  TEST_CASE("property: involution is an isometric involution") {
    oracle::Rng rng(22);
    for (const auto& g : {GroupSpec::finite_product({6, 4}), GroupSpec::lattice(3)}) {
      for (int t = 0; t < 100; ++t) {
        const auto a = oracle::random_measure(rng, g, 6, rng.uniform(0.1, 2.0));
        CHECK(std::abs(involute(a).tv_norm() - a.tv_norm()) <= 1e-15);
        CHECK(involute(involute(a)) == a);
      }
    }
  }

  TEST_CASE("property: Wiener identity for the self-convolution") {
    oracle::Rng rng(23);
    for (const auto& g : {GroupSpec::cyclic(9), GroupSpec::finite_product({2, 2, 2}), GroupSpec::lattice(2)}) {
      for (int t = 0; t < 100; ++t) {
        const auto a = oracle::random_measure(rng, g, 6, rng.uniform(0.1, 1.0));
        double squares = 0.0;
        for (const auto& x : a.atoms()) squares += std::norm(x.amplitude);
        const double p = point_mass_at_zero_of_selfconv(a);
        CHECK(std::abs(p - squares) <= 1e-12);
        CHECK(std::abs(convolve(a, involute(a)).at(g.zero()) - p) <= 1e-12);
      }
    }
  }
}
