#include "nld/mesh.hpp"

#include "nld/quadrature.hpp"

#include <algorithm>

namespace nld {

Mesh build_mesh(Interval omega, double h, double halo_radius) {
    double len = omega.b - omega.a;
    if (!(len > 0.0)) throw ConfigError("mesh: Omega must be a nonempty interval");
    if (!(h > 0.0)) throw ConfigError("mesh: h must be positive");
    if (!(halo_radius >= h * (1.0 - 1e-12)))
        throw ConfigError("mesh: halo radius must be at least h");
    int n = static_cast<int>(std::ceil(len / h - 1e-9));
    if (n < 2) throw ConfigError("mesh: h >= |Omega| leaves no interior node");
    double step = len / n;
    int nh = static_cast<int>(std::ceil(halo_radius / step - 1e-9));
    Mesh m;
    m.omega = omega;
    m.h = step;
    m.halo_radius = nh * step;
    int total = n + 2 * nh + 1;
    m.nodes.resize(total);
    m.interior.resize(total);
    m.ia = nh;
    m.ib = nh + n;
    for (int i = 0; i < total; ++i) {
        int j = i - nh;
        // exact endpoints, symmetric rounding elsewhere
        double x;
        if (j == 0)
            x = omega.a;
        else if (j == n)
            x = omega.b;
        else
            x = omega.a + j * step;
        m.nodes[i] = x;
        m.interior[i] = (i > m.ia && i < m.ib);
    }
    return m;
}

double hat(const Mesh& m, int i, double x) {
    const auto& X = m.nodes;
    if (i > 0 && x >= X[i - 1] && x <= X[i]) return (x - X[i - 1]) / (X[i] - X[i - 1]);
    if (i + 1 < m.num_nodes() && x >= X[i] && x <= X[i + 1]) return (X[i + 1] - x) / (X[i + 1] - X[i]);
    return 0.0;
}

double DiscreteFunction::operator()(double x) const {
    const auto& X = mesh->nodes;
    if (x < X.front() || x > X.back()) return 0.0;
    auto it = std::upper_bound(X.begin(), X.end(), x);
    int e = static_cast<int>(it - X.begin()) - 1;
    if (e >= mesh->num_elements()) e = mesh->num_elements() - 1;
    double t = (x - X[e]) / (X[e + 1] - X[e]);
    return (1.0 - t) * coeffs[e] + t * coeffs[e + 1];
}

DiscreteFunction interpolate(const ScalarFn& g, const Mesh& mesh) {
    DiscreteFunction f{&mesh, Eigen::VectorXd(mesh.num_nodes())};
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        double v = g(mesh.nodes[i]);
        if (!std::isfinite(v))
            throw NumericError("interpolate: non-finite value at node " + std::to_string(mesh.nodes[i]));
        f.coeffs[i] = v;
    }
    return f;
}

DiscreteFunction cell_average_interpolate(const ScalarFn& g, const Mesh& mesh,
                                          const std::vector<double>& singular_points) {
    DiscreteFunction f{&mesh, Eigen::VectorXd(mesh.num_nodes())};
    const double h = mesh.h;
    // graded panels toward a singular endpoint
    auto graded = [&](double a, double b, bool toward_a) {
        double s = 0.0, len = b - a;
        double r = 0.15;
        double outer = len;
        const double floor = 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
        for (int k = 0; k < 40 && outer > floor; ++k) {
            double inner = outer * r;
            if (toward_a)
                s += integrate(g, a + inner, a + outer, 16);
            else
                s += integrate(g, b - outer, b - inner, 16);
            outer = inner;
        }
        return s;
    };
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        double lo = mesh.nodes[i] - 0.5 * h, hi = mesh.nodes[i] + 0.5 * h;
        std::vector<double> cuts = partition(lo, hi, singular_points);
        double s = 0.0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double a = cuts[c], b = cuts[c + 1];
            bool sa = std::find(singular_points.begin(), singular_points.end(), a) != singular_points.end();
            bool sb = std::find(singular_points.begin(), singular_points.end(), b) != singular_points.end();
            if (sa && sb) {
                double m = 0.5 * (a + b);
                s += graded(a, m, true) + graded(m, b, false);
            } else if (sa) {
                s += graded(a, b, true);
            } else if (sb) {
                s += graded(a, b, false);
            } else {
                s += integrate(g, a, b, 16);
            }
        }
        double v = s / h;
        if (!std::isfinite(v)) throw NumericError("cell_average_interpolate: non-finite cell mean");
        f.coeffs[i] = v;
    }
    return f;
}

}  // namespace nld
