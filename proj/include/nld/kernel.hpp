#pragma once

#include "nld/common.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nld {

// Half-open angular interval [lo, hi) in radians, 0 < hi - lo <= 2 pi.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;
};

// Subset I of the unit sphere. In one dimension the sphere is {-1, +1}; the
// direction +1 is angle 0 and -1 is angle pi, so both cases share one representation.
class ConeSet {
public:
    std::vector<Arc> arcs;

    static ConeSet full();
    static ConeSet signs(bool plus, bool minus);
    static ConeSet from_arcs(std::vector<Arc> arcs);

    bool contains_angle(double theta) const;
    bool contains(const Point& z, int dim) const;
    bool empty() const { return arcs.empty(); }
    bool is_full() const;
    ConeSet negated() const;
    bool symmetric() const;                    // I = -I, checked on a fine angle grid
    bool disjoint(const ConeSet& o) const;
    double measure(int dim) const;             // arc length (d=2) or number of directions (d=1)
    std::vector<double> edges() const;
};

struct Perturbation {
    std::string kind = "constant";
    double K = 0.5;   // lower bound -K <= g
    double L = 1.0;   // upper bound g <= L
};

struct VariableOrder {
    double alpha1 = 1.0;
    double alpha2 = 1.5;
    double center = 0.0;
    double width = 1.0;
    double c = 2.0;   // b = 1 + c (alpha - alpha1)
};

struct KernelParams {
    int dim = 1;
    double alpha = 1.0;
    double beta = 0.25;
    double r_inner = 1.0;
    double r_outer = 2.0;
    std::optional<ConeSet> I, I1, I2;
    Perturbation perturbation;
    double truncation_radius = 4.0;
    VariableOrder variable_order;
    double cusp_b = 0.5;
    double alpha_prime = 2.0;
};

// Beyond r_far from x (in direction dir) the kernel is a finite sum of pure
// powers: k_s = sum sym_i r^{-1-p_i}, k_a = sum anti_i r^{-1-p_i}.
struct PowerTerm {
    double sym = 0.0;
    double anti = 0.0;
    double exponent = 1.0;
};
struct FarField {
    double r_far = 0.0;
    std::vector<PowerTerm> terms;
};

struct SymAnti {
    double sym = 0.0;
    double anti = 0.0;
};

class Kernel {
public:
    using Eval = std::function<double(const Point&, const Point&)>;
    using Profile = std::function<double(const Point&)>;

    int dim = 1;
    std::string catalog_id = "custom";
    std::string variant;
    KernelParams params;
    Eval eval;
    Profile profile;                         // set when k(x,y) = h(x - y)
    std::optional<double> singularity_order;
    std::optional<double> support_radius;
    bool integrable = true;
    std::vector<double> radial_breaks;       // |x - y| values where k may jump
    std::vector<double> axis_breaks;         // coordinates where k may jump in x or in y (d = 1)
    std::function<std::vector<double>(double)> angular_breaks;   // d = 2
    std::function<FarField(double, int)> far_field;               // d = 1, unbounded support
    std::string comparison_argument;         // lower-bound argument used when pointwise comparison fails

    double evaluate(const Point& x, const Point& y) const;
    bool is_difference() const { return static_cast<bool>(profile); }
    bool singular() const { return !integrable; }

    // Both orientations come from the same pair of evaluations.
    SymAnti split(const Point& x, const Point& y) const;
    // Same as split(x, x - z); for difference kernels uses h(z), h(-z) directly.
    SymAnti split_z(const Point& x, const Point& z) const;

    // d = 1: integrals of k_s(x,y), k_a(x,y) over y beyond y0 in direction dir.
    SymAnti ray_tail(double x, double y0, int dir) const;

    std::string label() const;
};

struct KernelDecomposition {
    const Kernel* base = nullptr;
    double sym(const Point& x, const Point& y) const { return base->split(x, y).sym; }
    double anti(const Point& x, const Point& y) const { return base->split(x, y).anti; }
};

KernelDecomposition decompose(const Kernel& k);

// Integral of k_s(x, .) over |y - x| > R. +inf when the tail is not integrable.
double tail_mass(const Kernel& k, const Point& x, double R);

// Zero kernel, used as a degenerate test case.
Kernel zero_kernel(int dim = 1);

// Comparison kernels: "frac" = |z|^{-d-alpha}, "frac_ball" = |z|^{-d-alpha} 1_{B1}.
Kernel comparison_kernel(const std::string& name, double alpha, int dim);

// c * k for a constant c > 0.
Kernel scaled(const Kernel& k, double c);

// a(x,y) * k(x,y) for a symmetric positive factor a. Only compactly supported
// kernels are accepted, since the far-field expansion of a * k is unknown.
Kernel modulated(const Kernel& k, std::function<double(const Point&, const Point&)> a);

}  // namespace nld
