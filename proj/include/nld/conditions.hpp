#pragma once

#include "nld/kernel.hpp"
#include "nld/quadrature.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nld {

enum class Verdict { holds, fails, indeterminate };

std::string to_string(Verdict v);

struct ConditionOptions {
    int probes_per_dim = 17;
    int random_probes = 8;
    double box = 2.0;                  // probes lie in [-box, box]^d
    std::uint64_t seed = 1;
    double tol_C_rel = 1e-8;           // tol_C = tol_C_rel * local k_s mass
    double tol_D = 1e-3;
    std::vector<double> eps;           // empty: 2^-1 ... 2^-12
    std::vector<double> ladder{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    double evidence_h = 1.0 / 32;      // mesh width for Gram-matrix evidence
    int trials = 64;
    int threads = 1;
    QuadConfig quad;
};

// Lattice of probes_per_dim points per axis over [-box, box]^d plus seeded random points.
std::vector<Point> default_probes(int dim, const ConditionOptions& opt);

// Probe set actually used for a kernel: a single point for difference kernels.
std::vector<Point> probes_for(const Kernel& k, const ConditionOptions& opt);

struct CheckResult {
    Verdict verdict = Verdict::indeterminate;
    double value = 0.0;     // L: max estimate; K: A; symmetry: max |k_a|/k_s
    Point worst{0.0, 0.0};  // probe realizing value, or the failing probe
    std::string note;
};

CheckResult check_L(const Kernel& k, const std::vector<Point>& probes);
CheckResult check_K(const Kernel& k, const std::vector<Point>& probes);
CheckResult check_symmetry(const Kernel& k, const std::vector<Point>& probes);

struct KtildeResult {
    Verdict verdict = Verdict::indeterminate;
    std::string ktilde_id;
    double A1 = 0.0;            // certified bound (>= 1) when the verdict holds
    double A1_evidence = 0.0;   // max Gram ratio over random discrete u (d = 1 only)
    double A2 = 0.0;
    std::string note;
};

// ktilde_id: "k_s", "frac" or "frac_ball".
KtildeResult check_Ktilde(const Kernel& k, const std::string& ktilde_id,
                          const std::vector<Point>& probes, const ConditionOptions& opt);

struct CancelResult {
    Verdict verdict = Verdict::indeterminate;
    double cancel_inf = 0.0;
    double tol = 0.0;
    Point worst{0.0, 0.0};
    std::vector<double> eps;
    std::string note;
};

CancelResult check_C(const Kernel& k, const std::vector<Point>& probes, const ConditionOptions& opt);

struct EAlphaResult {
    Verdict verdict = Verdict::indeterminate;
    double alpha_ref = 1.0;
    double lambda = 0.0;                 // pointwise constant (tier 1)
    std::vector<double> lambda_form;     // Gram ladder (tier 2), one per ladder h
    std::string note;
};

// alpha <= 0 selects the kernel's reference order.
EAlphaResult check_E_alpha(const Kernel& k, double alpha, const std::vector<Point>& probes,
                           const ConditionOptions& opt);

struct DResult {
    Verdict verdict = Verdict::indeterminate;
    double Theta = 0.0;
    double D = kInf;
    Point worst_x{0.0, 0.0}, worst_z{0.0, 0.0};
};

DResult check_D(const Kernel& k, const std::vector<Point>& probes, const ConditionOptions& opt);

struct PResult {
    Verdict verdict = Verdict::indeterminate;
    double C_P = 0.0;       // discrete evidence on (-1,1), d = 1 only
    double c0 = 0.0;        // comparison constant for L = 1_A (integrable kernels)
    std::string set;        // description of A
    std::string note;
};

// e is consulted for non-integrable kernels.
PResult check_P(const Kernel& k, const std::vector<Point>& probes, const ConditionOptions& opt,
                const EAlphaResult& e);

struct ConditionReport {
    std::string kernel;
    int dim = 1;
    CheckResult L, K, symmetry;
    KtildeResult Ktilde;
    CancelResult C;
    EAlphaResult E_alpha;
    DResult D;
    PResult P;
    int num_probes = 0;
    ConditionOptions options;
};

ConditionReport check_kernel(const Kernel& k, const std::string& ktilde_id, const ConditionOptions& opt);

// One row of the condition table.
struct TableRow {
    std::string example;   // "Ex8" or "Ex11:g=cone"
    Verdict P, C, Ktilde, K, symmetry;
    std::vector<std::string> question;   // conditions marked "?" in the reference table
    std::vector<std::string> indeterminate_notes;
};

struct TableEntry {
    std::string example;
    std::string id;
    KernelParams params;
    std::string ktilde;
    std::vector<std::string> question;
};

// Catalog instantiation used for the table, including the "?" realizations.
std::vector<TableEntry> table_entries();

TableRow table_row(const TableEntry& e, const ConditionOptions& opt);

std::string table_csv(const std::vector<TableRow>& rows);

}  // namespace nld
