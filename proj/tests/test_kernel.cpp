#include "nld/catalog.hpp"
#include "nld/kernel.hpp"

#include <doctest.h>

#include <cmath>

using namespace nld;

namespace {

Kernel cat(const std::string& id, double alpha = 1.0) {
    KernelParams p = default_params(id);
    p.alpha = alpha;
    return make_catalog_kernel(id, p);
}

}  // namespace

TEST_CASE("catalog point values") {
    CHECK(cat("Ex1").evaluate(point1(0.0), point1(0.5)) == 1.0);
    CHECK(cat("Ex1").evaluate(point1(0.0), point1(1.5)) == 0.0);
    CHECK(cat("Ex8").evaluate(point1(0.0), point1(2.0)) == doctest::Approx(0.25));

    KernelParams p = default_params("Ex14");
    p.variable_order.alpha1 = p.variable_order.alpha2 = 1.5;
    Kernel k14 = make_catalog_kernel("Ex14", p);
    CHECK(k14.evaluate(point1(0.0), point1(0.5)) == doctest::Approx(std::pow(0.5, -2.5)));
}

TEST_CASE("symmetric and antisymmetric parts") {
    SymAnti s3 = cat("Ex3").split_z(point1(0.0), point1(0.5));
    CHECK(s3.sym == doctest::Approx(0.5));
    CHECK(std::abs(s3.anti) == doctest::Approx(0.5));

    Kernel k10 = cat("Ex10", 0.5);
    SymAnti a = k10.split_z(point1(0.0), point1(0.5));
    SymAnti b = k10.split_z(point1(0.0), point1(-0.5));
    CHECK(a.sym == doctest::Approx(0.5 * std::pow(0.5, -1.5)));
    CHECK(b.sym == doctest::Approx(a.sym));
    CHECK(std::abs(a.anti) == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.anti == doctest::Approx(-a.anti));

    // k = k_s + k_a at arbitrary points of a non-difference kernel
    Kernel k6 = cat("Ex6");
    for (double x : {-0.7, -0.2, 0.3})
        for (double y : {-0.4, 0.1, 0.8}) {
            SymAnti s = k6.split(point1(x), point1(y));
            CHECK(s.sym + s.anti == doctest::Approx(k6.evaluate(point1(x), point1(y))));
            CHECK(s.sym - s.anti == doctest::Approx(k6.evaluate(point1(y), point1(x))));
        }
}

TEST_CASE("tail masses") {
    CHECK(tail_mass(cat("Ex8"), point1(0.0), 2.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tail_mass(cat("Ex1"), point1(0.0), 2.0) == 0.0);
    CHECK(tail_mass(cat("Ex2"), point1(0.0), 1.5) == doctest::Approx(1.0).epsilon(1e-10));
    // alpha = 0.5: 2 * R^{-alpha} / alpha
    CHECK(tail_mass(cat("Ex8", 0.5), point1(0.3), 4.0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("ray tails match the closed form") {
    Kernel k = cat("Ex10", 0.5);
    // one side of |z|^{-1.5} beyond 4: 2 * 4^{-0.5} = 1, split evenly between k_s and k_a
    SymAnti up = k.ray_tail(0.0, 4.0, +1);
    SymAnti down = k.ray_tail(0.0, -4.0, -1);
    CHECK(up.sym == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(down.sym == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(up.anti == doctest::Approx(-down.anti).epsilon(1e-8));
    CHECK(std::abs(up.anti) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("kernel structure flags") {
    CHECK(cat("Ex8").is_difference());
    CHECK(cat("Ex8").singular());
    CHECK_FALSE(cat("Ex1").singular());
    CHECK_FALSE(cat("Ex6").is_difference());
    CHECK(*cat("Ex8", 1.5).singularity_order == 1.5);
    CHECK(zero_kernel().evaluate(point1(0.0), point1(0.1)) == 0.0);
    Kernel two = scaled(cat("Ex1"), 2.0);
    CHECK(two.evaluate(point1(0.0), point1(0.5)) == 2.0);
    Kernel fr = comparison_kernel("frac_ball", 1.0, 1);
    CHECK(fr.evaluate(point1(0.0), point1(0.5)) == doctest::Approx(4.0));
    CHECK(fr.evaluate(point1(0.0), point1(1.5)) == 0.0);
}

TEST_CASE("cone sets") {
    ConeSet plus = ConeSet::signs(true, false);
    CHECK(plus.contains(point1(0.3), 1));
    CHECK_FALSE(plus.contains(point1(-0.3), 1));
    CHECK_FALSE(plus.symmetric());
    CHECK(ConeSet::full().symmetric());
    CHECK(plus.disjoint(plus.negated()));
    CHECK(ConeSet::full().measure(2) == doctest::Approx(2 * kPi));
    CHECK(ConeSet::full().measure(1) == doctest::Approx(2.0));
}

TEST_CASE("catalog parameter validation") {
    KernelParams p = default_params("Ex11");
    p.beta = 0.5;   // beta must stay below alpha / 2
    CHECK_THROWS_AS(make_catalog_kernel("Ex11", p), ConfigError);

    p = default_params("Ex11");
    p.perturbation.kind = "alternating";
    p.perturbation.K = 2.0;
    CHECK_THROWS_AS(make_catalog_kernel("Ex11", p), ConfigError);

    p = default_params("Ex8");
    p.alpha = 2.5;
    CHECK_THROWS_AS(make_catalog_kernel("Ex8", p), ConfigError);
    CHECK_THROWS_AS(canonical_id("Ex99"), ConfigError);
    CHECK(canonical_id("ex14T") == "Ex14t");
    CHECK(default_dim("Ex12") == 2);
    CHECK_THROWS(modulated(cat("Ex8"), [](const Point&, const Point&) { return 1.0; }));
}
