#pragma once

#include "nld/common.hpp"

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace nld {

struct Interval {
    double a = -1.0;
    double b = 1.0;
};

// Uniform 1D mesh of Omega = (a,b) extended by an exterior halo on both sides.
struct Mesh {
    Interval omega;
    double halo_radius = 0.0;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<bool> interior;   // strictly inside Omega
    int ia = 0;                   // index of the node at a
    int ib = 0;                   // index of the node at b

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return num_nodes() - 1; }
    int num_interior() const { return ib - ia - 1; }
    int first_interior() const { return ia + 1; }
    double left() const { return nodes.front(); }
    double right() const { return nodes.back(); }
    // Element e spans [nodes[e], nodes[e+1]]; it lies in Omega iff ia <= e < ib.
    bool element_in_omega(int e) const { return e >= ia && e < ib; }
};

Mesh build_mesh(Interval omega, double h, double halo_radius);

// Continuous piecewise-linear function given by nodal values; zero beyond the mesh.
struct DiscreteFunction {
    const Mesh* mesh = nullptr;
    Eigen::VectorXd coeffs;

    double operator()(double x) const;
};

using ScalarFn = std::function<double(double)>;

// Nodal interpolant.
DiscreteFunction interpolate(const ScalarFn& g, const Mesh& mesh);

// Node value = mean of g over the dual cell [x_i - h/2, x_i + h/2], integrated
// with graded Gauss panels toward the given breakpoints. Works for data with
// integrable singularities where nodal values would be infinite.
DiscreteFunction cell_average_interpolate(const ScalarFn& g, const Mesh& mesh,
                                          const std::vector<double>& singular_points);

double hat(const Mesh& m, int node, double x);

}  // namespace nld
