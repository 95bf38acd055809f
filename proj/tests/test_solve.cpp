#include "nld/catalog.hpp"
#include "nld/solve.hpp"

#include <doctest.h>

#include <cmath>

using namespace nld;

namespace {

Kernel cat(const std::string& id, double alpha = 1.0) {
    KernelParams p = default_params(id);
    p.alpha = alpha;
    return make_catalog_kernel(id, p);
}

DataFn data(std::function<double(double)> fn) { return DataFn{std::move(fn), false, {}}; }

}  // namespace

TEST_CASE("zero data give the zero solution") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    Solution s = solve_elliptic(cat("Ex8"), m, [](double) { return 0.0; }, data([](double) { return 0.0; }),
                                SolveOptions{});
    CHECK(s.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.path_used == "coercive");
}

TEST_CASE("constant exterior data reproduce the constant") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 1.0);
    Solution s = solve_elliptic(cat("Ex1"), m, [](double) { return 0.0; }, data([](double) { return 1.0; }),
                                SolveOptions{});
    for (int i = 0; i < m.num_nodes(); ++i) CHECK(s.u[i] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.seminorm < 1e-20);
}

TEST_CASE("torsion problem residuals") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 32, 2.0);
    Solution s = solve_elliptic(cat("Ex8", 1.5), m, [](double) { return 1.0; }, data([](double) { return 0.0; }),
                                SolveOptions{});
    CHECK(s.residual < 1e-10);
    CHECK(s.residual_independent < 1e-6 * s.scale);
    CHECK(s.seminorm > 0.0);
    // even data, even kernel
    for (int i = m.first_interior(); i < m.ib; ++i) CHECK(s.u[i] == doctest::Approx(s.u[m.ia + m.ib - i]).epsilon(1e-10));
    CHECK(residual(cat("Ex8", 1.5), m, [](double) { return 1.0; }, s.u, AssemblyOptions{}) < 1e-6 * s.scale);
}

TEST_CASE("comparison principle for a symmetric positive kernel") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 32, 2.0);
    Kernel k = cat("Ex8");
    Solution lo = solve_elliptic(k, m, [](double) { return 1.0; }, data([](double) { return 0.0; }), SolveOptions{});
    Solution hi = solve_elliptic(k, m, [](double x) { return 2.0 + x * x; }, data([](double) { return 0.0; }),
                                 SolveOptions{});
    for (int i = 0; i < m.num_nodes(); ++i) CHECK(lo.u[i] <= hi.u[i] + 1e-14);
    CHECK(lo.u[(m.ia + m.ib) / 2] > 0.0);
}

TEST_CASE("path preconditions") {
    std::vector<std::string> warn;
    SolveOptions o;
    o.path = "coercive";
    // Ex6 fails (C)
    CHECK_THROWS_AS(select_path(cat("Ex6"), o, warn), PreconditionError);
    o.path = "fredholm";
    // Ex10 fails (K) and (D)
    CHECK_THROWS_AS(select_path(cat("Ex10", 0.5), o, warn), PreconditionError);
    o.override_preconditions = true;
    warn.clear();
    CHECK(select_path(cat("Ex10", 0.5), o, warn) == "fredholm");
    CHECK_FALSE(warn.empty());

    SolveOptions a;
    warn.clear();
    CHECK(select_path(cat("Ex8"), a, warn) == "coercive");
    CHECK(warn.empty());
}

TEST_CASE("bordered solve matches the lifted solve") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    Kernel k = cat("Ex11");
    auto g = data([](double x) { return std::abs(x) > 1.0 && std::abs(x) < 3.0 ? std::cos(x) : 0.0; });
    Solution s = solve_elliptic(k, m, [](double x) { return 1.0 + x; }, g, SolveOptions{});
    DiscreteProblem p = assemble_problem(k, m, AssemblyOptions{});
    p.F = assemble_load([](double x) { return 1.0 + x; }, m);
    Eigen::VectorXd gall = exterior_data(g, m);
    Eigen::VectorXd ub = solve_bordered(p, gall);
    Eigen::VectorXd ui = s.u.segment(m.first_interior(), m.num_interior());
    CHECK((ub - ui).norm() <= 1e-10 * ui.norm());
}

TEST_CASE("repeated solves are bitwise identical") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    auto run = [&] {
        return solve_elliptic(cat("Ex8", 0.5), m, [](double x) { return std::exp(x); },
                              data([](double x) { return x * x; }), SolveOptions{})
            .u;
    };
    Eigen::VectorXd a = run(), b = run();
    CHECK((a.array() == b.array()).all());
}

TEST_CASE("parabolic problem with homogeneous data contracts") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    Kernel k = cat("Ex8");
    ParabolicProblem pp;
    pp.kernel = &k;
    pp.mesh = &m;
    pp.modulation = [](double t, double, double) { return 0.75 + 0.25 * std::cos(t); };
    pp.T = 1.0;
    pp.dt = 0.0625;
    pp.u0 = [](double x) { return std::abs(x) < 1.0 ? std::cos(0.5 * kPi * x) : 0.0; };
    pp.f = [](double, double) { return 0.0; };
    pp.g = [](double, double) { return 0.0; };
    ParabolicResult r = solve_parabolic(pp, AssemblyOptions{});
    REQUIRE(r.l2_norm.size() == 17);
    for (std::size_t n = 1; n < r.l2_norm.size(); ++n) CHECK(r.l2_norm[n] < r.l2_norm[n - 1]);
    CHECK(r.energy_rel_error < 1e-10);
}

TEST_CASE("stationary initial data stay put") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    Kernel k = cat("Ex8");
    Solution s = solve_elliptic(k, m, [](double) { return 1.0; }, data([](double) { return 0.0; }), SolveOptions{});
    ParabolicProblem pp;
    pp.kernel = &k;
    pp.mesh = &m;
    pp.modulation = [](double, double, double) { return 1.0; };
    pp.T = 0.5;
    pp.dt = 0.125;
    pp.u0_nodal = s.u;
    pp.f = [](double, double) { return 1.0; };
    pp.g = [](double, double) { return 0.0; };
    ParabolicResult r = solve_parabolic(pp, AssemblyOptions{});
    CHECK((r.u.back() - s.u).cwiseAbs().maxCoeff() < 1e-9);
}
