#include "nld/assembly.hpp"
#include "nld/catalog.hpp"
#include "nld/io.hpp"
#include "nld/quadrature.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <filesystem>

using namespace nld;

namespace {

Kernel cat(const std::string& id, double alpha = 1.0) {
    KernelParams p = default_params(id);
    p.alpha = alpha;
    return make_catalog_kernel(id, p);
}

// 1/2 of the double integral of (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) 1_{|x-y|<1}
// over the whole line, by nested Gauss on pieces where the integrand is polynomial.
double brute_ex1(const Mesh& m, int i, int j) {
    std::vector<double> nodes(m.nodes.begin(), m.nodes.end());
    auto outer = [&](double x) {
        std::vector<double> br = nodes;
        br.push_back(x);
        br.push_back(x - 1.0);
        br.push_back(x + 1.0);
        auto inner = [&](double y) {
            if (std::abs(x - y) >= 1.0) return 0.0;
            return (hat(m, i, x) - hat(m, i, y)) * (hat(m, j, x) - hat(m, j, y));
        };
        return integrate_split(inner, m.left() - 1.0, m.right() + 1.0, br, 4);
    };
    std::vector<double> br = nodes;
    for (double n : m.nodes) {
        br.push_back(n - 1.0);
        br.push_back(n + 1.0);
    }
    return 0.5 * integrate_split(outer, m.left() - 1.0, m.right() + 1.0, br, 6);
}

}  // namespace

TEST_CASE("mass matrix and load vector") {
    Mesh m = build_mesh({-1.0, 1.0}, 0.25, 0.5);
    Eigen::MatrixXd M = assemble_mass(m);
    double h = m.h;
    REQUIRE(M.rows() == m.num_interior());
    CHECK(M(2, 2) == doctest::Approx(2 * h / 3));
    CHECK(M(2, 3) == doctest::Approx(h / 6));
    CHECK(M(2, 4) == 0.0);
    Eigen::VectorXd F = assemble_load([](double) { return 1.0; }, m);
    for (int r = 0; r < F.size(); ++r) CHECK(F[r] == doctest::Approx(h));
    Eigen::MatrixXd Ma = assemble_mass_all(m);
    CHECK(Ma.sum() == doctest::Approx(m.right() - m.left()));
}

TEST_CASE("Ex1 stiffness against a brute-force double integral") {
    Mesh m = build_mesh({-1.0, 1.0}, 0.25, 1.0);
    Eigen::MatrixXd A = assemble_stiffness(cat("Ex1"), m, AssemblyOptions{});
    REQUIRE(A.rows() == m.num_interior());
    REQUIRE(A.cols() == m.num_nodes());
    int i0 = m.first_interior();
    for (auto [r, j] : {std::pair{0, 0}, {3, 3}, {3, 4}, {1, 5}, {6, 2}}) {
        CHECK(A(r, i0 + j) == doctest::Approx(brute_ex1(m, i0 + r, i0 + j)).epsilon(1e-11));
    }
    // constants lie in the kernel of the form
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK((A * ones).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Ex8 full-space Gram matrix is symmetric positive definite") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    DiscreteProblem p = assemble_problem(cat("Ex8"), m, AssemblyOptions{});
    CHECK((p.S_full - p.S_full.transpose()).cwiseAbs().maxCoeff() < 1e-12 * p.S_full.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.S_full);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // symmetric kernel: the interior block of A is the full-space Gram matrix up to the factor 1/2
    Eigen::MatrixXd Ai = p.A_int();
    CHECK((Ai - Ai.transpose()).cwiseAbs().maxCoeff() < 1e-10 * Ai.cwiseAbs().maxCoeff());
}

TEST_CASE("zero kernel gives a zero operator") {
    Mesh m = build_mesh({-1.0, 1.0}, 0.25, 0.5);
    Eigen::MatrixXd A = assemble_stiffness(zero_kernel(), m, AssemblyOptions{});
    CHECK(A.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nonsymmetric kernels produce a nonsymmetric interior block") {
    Mesh m = build_mesh({-1.0, 1.0}, 0.25, 2.0);
    DiscreteProblem p = assemble_problem(cat("Ex3"), m, AssemblyOptions{});
    Eigen::MatrixXd Ai = p.A_int();
    CHECK((Ai - Ai.transpose()).cwiseAbs().maxCoeff() > 1e-3);
    // the Ka part annihilates constants on the whole mesh only where the support fits
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK((p.A * ones).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("truncated form") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    Kernel k = cat("Ex1");
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_nodes()), v = u;
    for (int i = 0; i < m.num_nodes(); ++i)
        if (m.interior[i]) {
            u[i] = std::cos(0.5 * kPi * m.nodes[i]);
            v[i] = 1.0 - m.nodes[i] * m.nodes[i];
        }
    Eigen::MatrixXd A = assemble_stiffness(k, m, AssemblyOptions{});
    double full = v.segment(m.first_interior(), m.num_interior()).dot(A * u);
    // Ex1 vanishes beyond |z| = 1
    CHECK(std::abs(truncated_bilinear(k, m, u, v, 1.0, AssemblyOptions{})) < 1e-14);
    double prev = 0.0;
    for (double d : {0.5, 0.25, 0.125, 1.0 / 1024}) {
        double t = truncated_bilinear(k, m, u, v, d, AssemblyOptions{});
        CHECK(t > prev);
        prev = t;
    }
    CHECK(prev == doctest::Approx(full).epsilon(1e-3));
    // cutoff assembly agrees with the direct truncated form
    AssemblyOptions ao;
    ao.cutoff = 0.25;
    Eigen::MatrixXd Ac = assemble_stiffness(k, m, ao);
    double via = v.segment(m.first_interior(), m.num_interior()).dot(Ac * u);
    CHECK(via == doctest::Approx(truncated_bilinear(k, m, u, v, 0.25, AssemblyOptions{})).epsilon(1e-12));
}

TEST_CASE("truncated Ex8 form for sine and cosine samples") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 64, 2.0);
    Kernel k = cat("Ex8");
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_nodes()), v = u;
    for (int i = 0; i < m.num_nodes(); ++i)
        if (m.interior[i]) {
            u[i] = std::cos(0.5 * kPi * m.nodes[i]) + 0.5 * std::sin(kPi * m.nodes[i]);
            v[i] = std::cos(0.5 * kPi * m.nodes[i]);
        }
    Eigen::MatrixXd A = assemble_stiffness(k, m, AssemblyOptions{});
    double full_uv = v.segment(m.first_interior(), m.num_interior()).dot(A * u);
    double full_vv = v.segment(m.first_interior(), m.num_interior()).dot(A * v);
    double prev_err = kInf, prev_vv = -kInf;
    for (int j = 4; j <= 10; ++j) {
        double d = std::ldexp(1.0, -j);
        double err = std::abs(truncated_bilinear(k, m, u, v, d, AssemblyOptions{}) - full_uv);
        double vv = truncated_bilinear(k, m, v, v, d, AssemblyOptions{});
        CHECK(err < prev_err);
        CHECK(vv >= prev_vv);
        CHECK(vv <= full_vv * (1.0 + 1e-12));
        prev_err = err;
        prev_vv = vv;
    }
}

TEST_CASE("independent action agrees with the stiffness matrix") {
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 16, 2.0);
    Kernel k = cat("Ex8", 1.5);
    Eigen::MatrixXd A = assemble_stiffness(k, m, AssemblyOptions{});
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i)
        if (m.interior[i]) u[i] = 1.0 - m.nodes[i] * m.nodes[i];
    Eigen::VectorXd a = A * u, b = independent_action(k, m, u, AssemblyOptions{});
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-7 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("matrix dumps") {
    Mesh m = build_mesh({-1.0, 1.0}, 0.5, 1.0);
    DiscreteProblem p = assemble_problem(cat("Ex1"), m, AssemblyOptions{});
    auto dir = std::filesystem::temp_directory_path() / "nld_dump_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    dump_matrices(p, dir.string());
    for (const char* f : {"A.csv", "M.csv", "S.csv"}) CHECK(std::filesystem::exists(dir / f));
    std::string mcsv = read_file((dir / "M.csv").string());
    CHECK(mcsv.rfind("row,col,value", 0) == 0);
    std::filesystem::remove_all(dir);
}
