#pragma once

#include "nld/conditions.hpp"
#include "nld/expression.hpp"
#include "nld/kernel.hpp"
#include "nld/mesh.hpp"
#include "nld/solve.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nld {

// Complement data: an expression in t and x, or a named datum.
//   shell_power: (|x| - 1)^exponent on 1 <= |x| <= 2, zero elsewhere
//   zero, one:   constants
struct DataSpec {
    std::string expression = "0";
    std::string datum;          // empty when expression is used
    double exponent = 0.25;

    DataFn at(double t) const;
};

struct RunConfig {
    // kernel
    std::string kernel_id = "Ex8";
    KernelParams params;        // defaults of the id, overridden by the config
    std::string ktilde;         // comparison kernel for (K~); empty selects the catalog witness

    // mesh
    Interval omega;
    double h = 1.0 / 32;
    double halo = 2.0;
    QuadConfig quad;

    // problem
    std::string f = "1";
    DataSpec g;
    std::string path = "auto";
    bool override_preconditions = false;

    // time
    double T = 1.0;
    double dt = 0.0625;
    std::string modulation = "1";
    std::string u0 = "0";       // expression, or "stationary" for the elliptic solution at t = 0

    // study
    double study_alpha = 1.0;
    std::vector<double> study_betas;   // empty: (alpha - 1)/2 +- {0.05, 0.10, 0.15}
    std::vector<double> study_hs;      // empty: mesh h only
    int trials = 1000;
    int samples = 1000;

    // tolerances
    double solver_tol = 1e-8;
    double maxprin_tol = 1e-8;
    double tol_C_rel = 1e-8;
    double tol_D = 1e-3;

    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<std::string> expected_fail;   // condition names downgraded to exit 0
    std::string out;
    std::string report;

    Kernel kernel() const;
    std::string ktilde_id() const;
    Mesh mesh() const;
    AssemblyOptions assembly() const;
    ConditionOptions conditions() const;
    SolveOptions solve_options() const;
};

// Parses and validates a JSON document. Unknown keys, type mismatches and
// out-of-range values raise ConfigError naming the key; syntax errors carry
// line and column.
RunConfig parse_config(const std::string& text);

// Every field with its effective value; keys sorted, two-space indent.
std::string effective_config(const RunConfig& c);

// Table witness for the id: frac for Ex10 and Ex12, frac_ball for Ex11, k_s otherwise.
std::string default_ktilde(const std::string& kernel_id);

}  // namespace nld
