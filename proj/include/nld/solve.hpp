#pragma once

#include "nld/assembly.hpp"
#include "nld/conditions.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nld {

// Complement data. Singular data (negative exponents at |x| = 1) are sampled by
// dual-cell averages instead of nodal values.
struct DataFn {
    std::function<double(double)> fn;
    bool cell_average = false;
    std::vector<double> singular_points;
};

// Verdicts the solve paths depend on. Missing entries are computed on demand.
struct PathVerdicts {
    Verdict L = Verdict::indeterminate;
    Verdict C = Verdict::indeterminate;
    Verdict Ktilde = Verdict::indeterminate;
    Verdict K = Verdict::indeterminate;
    Verdict D = Verdict::indeterminate;
    Verdict E_alpha = Verdict::indeterminate;
};

PathVerdicts compute_path_verdicts(const Kernel& k, const std::string& ktilde_id, const ConditionOptions& opt);

struct SolveOptions {
    std::string path = "auto";            // auto | coercive | fredholm
    double solver_tol = 1e-8;
    bool override_preconditions = false;  // proceed with a warning when a verdict is missing
    std::string ktilde = "k_s";
    std::optional<PathVerdicts> verdicts;
    AssemblyOptions assembly;
    ConditionOptions conditions;
    bool independent_residual = true;
};

struct Solution {
    std::vector<double> x;     // all mesh nodes
    Eigen::VectorXd u;         // all mesh nodes; exterior entries equal the data
    double residual = 0.0;                // max |A u_int - (F - G_lift)|
    double residual_independent = 0.0;   // same with an independently assembled operator
    double seminorm = 0.0;                // [u,u]_V(Omega;k)
    double dual_norm_sq = 0.0;            // discrete dual norm of f, squared
    double g_seminorm = 0.0;              // [g,g]_V(Omega;k)
    double energy_ratio = 0.0;
    double gamma_used = 0.0;
    double scale = 0.0;                   // ||F||_inf / min diag(M)
    std::string path_used;
    std::vector<std::string> warnings;
};

// Selects the path and checks its preconditions; throws PreconditionError.
std::string select_path(const Kernel& k, const SolveOptions& opt, std::vector<std::string>& warnings);

// Data on all nodes: interpolant of g with the interior entries set to 0.
Eigen::VectorXd exterior_data(const DataFn& g, const Mesh& mesh);

// Linear solve on an assembled problem; F and G_lift of p must be filled.
Eigen::VectorXd solve_interior(const DiscreteProblem& p, double solver_tol, double* gamma_used);

Solution solve_elliptic(const Kernel& k, const Mesh& mesh, const LoadFn& f, const DataFn& g,
                        const SolveOptions& opt);

// Solution from a prepared problem, used by studies that reuse one assembly.
Solution solve_assembled(const Kernel& k, DiscreteProblem& p, const LoadFn& f, const Eigen::VectorXd& g_all,
                         const std::string& path, const SolveOptions& opt);

// max_i |E^k(u, phi_i) - <f, phi_i>| with an independently assembled operator.
double residual(const Kernel& k, const Mesh& mesh, const LoadFn& f, const Eigen::VectorXd& u_all,
                const AssemblyOptions& opt);

// Bordered one-shot system A_full [u_int; g_ext] = F solved for u_int.
Eigen::VectorXd solve_bordered(const DiscreteProblem& p, const Eigen::VectorXd& g_all);

struct ParabolicProblem {
    const Kernel* kernel = nullptr;
    const Mesh* mesh = nullptr;
    // a(t, x, y) in [1/2, 1], symmetric in x, y; time_only marks a(t) without x, y dependence.
    std::function<double(double, double, double)> modulation;
    bool time_only = true;
    double T = 1.0;
    double dt = 0.1;
    std::function<double(double)> u0;
    std::function<double(double, double)> f;      // f(t, x)
    std::function<double(double, double)> g;      // g(t, x)
    std::function<double(double, double)> g_dot;  // optional; finite difference with dt/100 otherwise
    std::optional<Eigen::VectorXd> u0_nodal;      // overrides u0 when set
};

struct ParabolicResult {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> u;   // all nodes
    std::vector<double> l2_norm;      // ||w^n||_M with w = u - g
    double energy_lhs = 0.0;
    double energy_rhs = 0.0;
    double energy_rel_error = 0.0;
    double trajectory_H = 0.0;        // sum dt ||w^n||_H^2
    double data_norm = 0.0;           // sum dt ||F^n||^2 + ||w^0||^2
};

ParabolicResult solve_parabolic(const ParabolicProblem& pp, const AssemblyOptions& opt);

}  // namespace nld
