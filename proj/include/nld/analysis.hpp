#pragma once

#include "nld/assembly.hpp"
#include "nld/solve.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nld {

struct GardingResult {
    double gamma_star = 0.0;
    double lambda_min = 0.0;     // of the pencil (sym A - (M + S_full)/4, M)
    bool cholesky_confirmed = false;
};

// Smallest gamma >= 0 with sym(A) + gamma M - (M + S_full)/4 positive semidefinite.
GardingResult estimate_garding(const DiscreteProblem& p);

struct PoincareResult {
    double C_P = kInf;
    double lambda_min = 0.0;
    bool positive = false;
};

PoincareResult estimate_poincare(const DiscreteProblem& p);

struct CertificateResult {
    int samples = 0;
    double worst_slack = kInf;   // min over samples of (lhs - rhs) / u^T M u
    bool passed = false;
};

// u^T sym(A) u + gamma u^T M u - (u^T (M + S_full) u)/4 >= -1e-9 u^T M u
CertificateResult garding_certificate(const DiscreteProblem& p, double gamma, int samples, std::uint64_t seed);
// u^T S_full u >= (1/C_P - 1e-9) u^T M u
CertificateResult poincare_certificate(const DiscreteProblem& p, double C_P, int samples, std::uint64_t seed);

struct SectorResult {
    double sector_K = 0.0;
    double bound = 0.0;   // sqrt(A1 A2) from (K~), 0 when not supplied
    int used = 0;
    int skipped = 0;
};

SectorResult sector_constant(const DiscreteProblem& p, int trials, std::uint64_t seed, double A1 = 0.0,
                             double A2 = 0.0);

struct MaxPrinResult {
    double sup_u = 0.0;
    double scale = 0.0;
    double tol = 1e-8;
    bool holds = false;
    std::string path;
};

MaxPrinResult max_principle_probe(const Kernel& k, const Mesh& mesh, const LoadFn& f, const SolveOptions& opt,
                                  double tol_mp = 1e-8);

struct SweepRow {
    double beta = 0.0;
    double h = 0.0;
    double seminorm = 0.0;
    double growth_factor = 0.0;   // seminorm(h) / seminorm(2h); 0 on the first level
    std::string classification;   // per beta, repeated on every row
};

// Data g = (|x| - 1)^beta on 1 <= |x| <= 2, kernel alpha(2 - alpha)|z|^(-1-alpha), Omega = (-1,1).
std::vector<SweepRow> boundary_regularity_sweep(double alpha, const std::vector<double>& betas,
                                                const std::vector<double>& hs, const AssemblyOptions& opt);

// "finite" iff the increments of successive seminorms shrink on the finest levels.
std::string classify_sweep(const std::vector<double>& seminorms);

std::vector<double> default_betas(double alpha);   // (alpha - 1)/2 +- {0.05, 0.10, 0.15}

struct InequalityCounts {
    long trials = 0;
    long ratio_bound = 0;   // counterexamples
    long ratio_bound_sym = 0;
    long log_ineq = 0;
    long convolution = 0;
    std::string witness;    // first counterexample, empty when none
};

InequalityCounts verify_elementary_inequalities(long trials, std::uint64_t seed);

struct ConvergenceRow {
    double h = 0.0;
    double shape_ratio = 0.0;      // u(0) / u(0.5)
    double fit_error = 0.0;        // || u_h - c (1 - x^2)^(alpha/2) ||_L2, c by least squares
    double self_error = 0.0;       // || u_h - u_{h/2} ||_L2 (0 on the finest level)
};

struct ConvergenceResult {
    double alpha = 1.0;
    std::vector<ConvergenceRow> rows;
    double fit_rate = 0.0;
    double self_rate = 0.0;
    double target_ratio = 0.0;     // (4/3)^(alpha/2)
};

ConvergenceResult convergence_study(double alpha, const std::vector<double>& hs, const AssemblyOptions& opt);

// Least-squares slope of log2(e) against log2(h).
double fitted_rate(const std::vector<double>& hs, const std::vector<double>& errors);

}  // namespace nld
