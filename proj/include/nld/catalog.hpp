#pragma once

#include "nld/kernel.hpp"

#include <string>
#include <vector>

namespace nld {

// Identifiers: Ex1 ... Ex14, Ex14t (Ex14 truncated to B_R), intro.
const std::vector<std::string>& catalog_ids();

// Canonical spelling of an identifier ("ex8" -> "Ex8"); throws ConfigError if unknown.
std::string canonical_id(const std::string& id);

// Default dimension of an example: 2 for the cone and cusp examples 4, 9, 12, 13, else 1.
int default_dim(const std::string& id);

// Default parameters; dim = 0 selects default_dim(id). Cone sets are filled in
// for the chosen dimension.
KernelParams default_params(const std::string& id, int dim = 0);

Kernel make_catalog_kernel(const std::string& id, KernelParams params);

// Ex14 profiles.
double variable_alpha(const VariableOrder& v, double x);
double variable_b(const VariableOrder& v, double x);

}  // namespace nld
