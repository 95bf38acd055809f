#pragma once

#include "nld/kernel.hpp"
#include "nld/mesh.hpp"
#include "nld/quadrature.hpp"

#include <Eigen/Dense>
#include <string>

namespace nld {

struct AssemblyOptions {
    QuadConfig quad;
    double cutoff = 0.0;   // > 0 restricts all integrals to |x - y| > cutoff
    int threads = 1;
};

// Element-pair integrals over Omega x R, all indexed by global node number.
//   S_in[p][q]  = sum over (x in Omega, y in Omega) of (phi_p(x)-phi_p(y))(phi_q(x)-phi_q(y)) k_s
//   S_out[p][q] = same over (x in Omega, y outside Omega), including y beyond the mesh
//   Ka[i][j]    = integral over x in Omega, y in R of (phi_j(x)-phi_j(y)) phi_i(x) k_a
struct FormMatrices {
    Eigen::MatrixXd S_in, S_out, Ka;
};

FormMatrices assemble_forms(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt);

// Interior rows, all columns: A[r][j] = E^k(phi_j, phi_{i_r}).
Eigen::MatrixXd stiffness_from_forms(const FormMatrices& f, const Mesh& mesh);

// Gram matrix of the full-space seminorm for functions vanishing outside Omega.
Eigen::MatrixXd full_seminorm_from_forms(const FormMatrices& f, const Mesh& mesh);

Eigen::MatrixXd assemble_stiffness(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt);

Eigen::MatrixXd assemble_mass_all(const Mesh& mesh);    // every node
Eigen::MatrixXd assemble_mass(const Mesh& mesh);        // interior block

using LoadFn = std::function<double(double)>;
Eigen::VectorXd assemble_load(const LoadFn& f, const Mesh& mesh, int order = 5);

struct DiscreteProblem {
    const Mesh* mesh = nullptr;
    FormMatrices forms;
    Eigen::MatrixXd A;         // n_int x n_all
    Eigen::MatrixXd M;         // n_int x n_int
    Eigen::MatrixXd M_all;     // n_all x n_all
    Eigen::MatrixXd S_omega;   // n_all x n_all
    Eigen::MatrixXd S_full;    // n_int x n_int
    Eigen::VectorXd F;
    Eigen::VectorXd G_lift;
    double gamma = 0.0;

    Eigen::MatrixXd A_int() const;
    Eigen::MatrixXd sym_A_int() const;
};

DiscreteProblem assemble_problem(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt);

// G_lift = A * g with the interior entries of g treated as zero.
Eigen::VectorXd lifting_vector(const Eigen::MatrixXd& A, const Mesh& mesh, const Eigen::VectorXd& g);

// Integral over Omega x R of (u(x)-u(y))^2 k_s.
double seminorm_V(const DiscreteProblem& p, const Eigen::VectorXd& u_all);

// E^k restricted to |x - y| > delta, for v vanishing outside Omega.
double truncated_bilinear(const Kernel& k, const Mesh& mesh, const Eigen::VectorXd& u_all,
                          const Eigen::VectorXd& v_all, double delta, const AssemblyOptions& opt);

// r_i = E^k(u, phi_i) for interior i, evaluated with an independent (refined)
// quadrature rule rather than the stiffness matrix in use.
Eigen::VectorXd independent_action(const Kernel& k, const Mesh& mesh, const Eigen::VectorXd& u_all,
                                   const AssemblyOptions& opt);

// CSV "row,col,value" with 17 significant digits; writes A.csv, M.csv, S.csv into dir.
void dump_matrices(const DiscreteProblem& p, const std::string& dir);

// Interior-supported vector of all-node length from interior coefficients.
Eigen::VectorXd extend_interior(const Mesh& mesh, const Eigen::VectorXd& u_int);

}  // namespace nld
