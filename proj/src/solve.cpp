#include "nld/solve.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace nld {

namespace {

bool ok(Verdict v) { return v == Verdict::holds; }

}  // namespace

PathVerdicts compute_path_verdicts(const Kernel& k, const std::string& ktilde_id, const ConditionOptions& opt) {
    std::vector<Point> probes = probes_for(k, opt);
    PathVerdicts v;
    v.L = check_L(k, probes).verdict;
    v.C = check_C(k, probes, opt).verdict;
    v.Ktilde = check_Ktilde(k, ktilde_id, probes, opt).verdict;
    v.K = check_K(k, probes).verdict;
    v.D = check_D(k, probes, opt).verdict;
    v.E_alpha = k.integrable ? Verdict::fails : check_E_alpha(k, 0.0, probes, opt).verdict;
    return v;
}

std::string select_path(const Kernel& k, const SolveOptions& opt, std::vector<std::string>& warnings) {
    if (opt.path != "auto" && opt.path != "coercive" && opt.path != "fredholm")
        throw ConfigError("problem.path must be auto, coercive or fredholm");
    PathVerdicts v = opt.verdicts ? *opt.verdicts : compute_path_verdicts(k, opt.ktilde, opt.conditions);
    bool coercive = ok(v.L) && ok(v.C) && ok(v.Ktilde);
    bool fredholm = ok(v.L) && ok(v.E_alpha) && ok(v.K) && ok(v.D);
    auto refuse = [&](const std::string& path, const std::string& need) {
        std::string msg = k.label() + ": " + path + " path requires " + need;
        if (!opt.override_preconditions) throw PreconditionError(msg);
        warnings.push_back("override: " + msg);
    };
    if (opt.path == "coercive") {
        if (!coercive) refuse("coercive", "(L), (C) and (K~)");
        return "coercive";
    }
    if (opt.path == "fredholm") {
        if (!fredholm) refuse("fredholm", "(L), (E_alpha), (K) and (D)");
        return "fredholm";
    }
    if (coercive) return "coercive";
    if (fredholm) return "fredholm";
    refuse("auto", "either (L), (C), (K~) or (L), (E_alpha), (K), (D)");
    return "coercive";
}

Eigen::VectorXd exterior_data(const DataFn& g, const Mesh& mesh) {
    DiscreteFunction d = g.cell_average ? cell_average_interpolate(g.fn, mesh, g.singular_points)
                                        : interpolate(g.fn, mesh);
    Eigen::VectorXd v = d.coeffs;
    for (int i = 0; i < mesh.num_nodes(); ++i)
        if (mesh.interior[i]) v[i] = 0.0;
    return v;
}

Eigen::VectorXd solve_interior(const DiscreteProblem& p, double solver_tol, double* gamma_used) {
    Eigen::MatrixXd A = p.A_int();
    Eigen::VectorXd rhs = p.F - p.G_lift;
    if (gamma_used) *gamma_used = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rcond() > 1e-13) return lu.solve(rhs);

    // Shifted fixed point u <- (A + gamma M)^{-1} (rhs + gamma M u).
    double gamma = std::max(1.0, A.cwiseAbs().rowwise().sum().maxCoeff() / p.M.diagonal().maxCoeff());
    if (gamma_used) *gamma_used = gamma;
    Eigen::PartialPivLU<Eigen::MatrixXd> lus(A + gamma * p.M);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(rhs.size());
    double checkpoint = kInf;
    for (int it = 0; it < 2000; ++it) {
        Eigen::VectorXd un = lus.solve(rhs + gamma * (p.M * u));
        double diff = (un - u).lpNorm<Eigen::Infinity>();
        u = un;
        if (diff <= solver_tol * std::max(1.0, u.lpNorm<Eigen::Infinity>())) return u;
        if (it % 50 == 49) {
            if (diff > 0.99 * checkpoint) break;
            checkpoint = diff;
        }
    }
    throw DiscreteKernelNontrivial("discrete kernel nontrivial: stiffness matrix is singular and the shifted "
                                   "fixed point stagnates");
}

double residual(const Kernel& k, const Mesh& mesh, const LoadFn& f, const Eigen::VectorXd& u_all,
                const AssemblyOptions& opt) {
    Eigen::VectorXd r = independent_action(k, mesh, u_all, opt);
    r -= assemble_load(f, mesh, refined(opt.quad).order);
    return r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
}

Solution solve_assembled(const Kernel& k, DiscreteProblem& p, const LoadFn& f, const Eigen::VectorXd& g_all,
                         const std::string& path, const SolveOptions& opt) {
    const Mesh& mesh = *p.mesh;
    Solution s;
    s.path_used = path;
    s.x = mesh.nodes;
    p.F = assemble_load(f, mesh, opt.assembly.quad.order);
    p.G_lift = lifting_vector(p.A, mesh, g_all);
    Eigen::VectorXd u_int = solve_interior(p, opt.solver_tol, &s.gamma_used);
    p.gamma = s.gamma_used;
    s.u = g_all + extend_interior(mesh, u_int);
    Eigen::VectorXd r = p.A_int() * u_int - (p.F - p.G_lift);
    s.residual = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
    if (opt.independent_residual) s.residual_independent = residual(k, mesh, f, s.u, opt.assembly);

    s.seminorm = seminorm_V(p, s.u);
    s.g_seminorm = seminorm_V(p, g_all);
    Eigen::LLT<Eigen::MatrixXd> llt(p.M + p.S_full);
    s.dual_norm_sq = p.F.size() ? p.F.dot(llt.solve(p.F)) : 0.0;
    double denom = s.dual_norm_sq + s.g_seminorm;
    if (path == "fredholm") denom += g_all.dot(p.M_all * g_all) + u_int.dot(p.M * u_int);
    s.energy_ratio = denom > 0.0 ? s.seminorm / denom : 0.0;
    double mmin = p.M.size() ? p.M.diagonal().minCoeff() : 1.0;
    s.scale = (p.F.size() ? p.F.lpNorm<Eigen::Infinity>() : 0.0) / mmin;
    return s;
}

Solution solve_elliptic(const Kernel& k, const Mesh& mesh, const LoadFn& f, const DataFn& g,
                        const SolveOptions& opt) {
    std::vector<std::string> warnings;
    std::string path = select_path(k, opt, warnings);
    if (!k.support_radius && !k.far_field)
        throw NumericError(k.label() + ": unbounded support without a far-field form; tails cannot be assembled");
    DiscreteProblem p = assemble_problem(k, mesh, opt.assembly);
    Eigen::VectorXd g_all = exterior_data(g, mesh);
    Solution s = solve_assembled(k, p, f, g_all, path, opt);
    s.warnings = warnings;
    return s;
}

Eigen::VectorXd solve_bordered(const DiscreteProblem& p, const Eigen::VectorXd& g_all) {
    const Mesh& mesh = *p.mesh;
    const int n = mesh.num_nodes(), i0 = mesh.first_interior(), ni = mesh.num_interior();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (mesh.interior[i]) {
            B.row(i) = p.A.row(i - i0);
            rhs[i] = p.F[i - i0];
        } else {
            B(i, i) = 1.0;
            rhs[i] = g_all[i];
        }
    }
    Eigen::VectorXd u = Eigen::PartialPivLU<Eigen::MatrixXd>(B).solve(rhs);
    return u.segment(i0, ni);
}

ParabolicResult solve_parabolic(const ParabolicProblem& pp, const AssemblyOptions& opt) {
    if (!pp.kernel || !pp.mesh) throw ConfigError("parabolic problem needs a kernel and a mesh");
    if (!(pp.dt > 0.0) || !(pp.T > 0.0)) throw ConfigError("time.dt and time.T must be positive");
    const Kernel& k = *pp.kernel;
    const Mesh& mesh = *pp.mesh;
    const int n = mesh.num_nodes(), i0 = mesh.first_interior(), ni = mesh.num_interior();
    const int steps = static_cast<int>(std::llround(pp.T / pp.dt));
    if (std::abs(steps * pp.dt - pp.T) > 1e-9 * pp.T) throw ConfigError("time.T must be a multiple of time.dt");

    auto modulation = pp.modulation ? pp.modulation : [](double, double, double) { return 1.0; };
    // probe the admissible range and symmetry of a
    for (int it = 0; it <= 8; ++it) {
        double t = pp.T * it / 8.0;
        for (int i = 0; i < n; i += std::max(1, n / 16))
            for (int j = 0; j < n; j += std::max(1, n / 16)) {
                double a = modulation(t, mesh.nodes[i], mesh.nodes[j]);
                double b = modulation(t, mesh.nodes[j], mesh.nodes[i]);
                if (!(a >= 0.5 - 1e-12 && a <= 1.0 + 1e-12))
                    throw ConfigError("time.modulation must take values in [1/2, 1]");
                if (std::abs(a - b) > 1e-12) throw ConfigError("time.modulation must be symmetric in x and y");
            }
    }

    DiscreteProblem base = assemble_problem(k, mesh, opt);
    const Eigen::MatrixXd& M = base.M;
    Eigen::MatrixXd Mrow = base.M_all.middleRows(i0, ni);

    auto A_at = [&](double t) -> Eigen::MatrixXd {
        if (pp.time_only) return modulation(t, 0.0, 0.0) * base.A;
        Kernel km = modulated(k, [&, t](const Point& x, const Point& y) { return modulation(t, x[0], y[0]); });
        return assemble_stiffness(km, mesh, opt);
    };
    auto nodal = [&](const std::function<double(double, double)>& fn, double t) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = fn ? fn(t, mesh.nodes[i]) : 0.0;
        return v;
    };
    auto g_dot = [&](double t) {
        if (pp.g_dot) return nodal(pp.g_dot, t);
        double d = pp.dt / 100.0;
        return Eigen::VectorXd((nodal(pp.g, t + d) - nodal(pp.g, t - d)) / (2.0 * d));
    };
    auto load = [&](double t) {
        if (!pp.f) return Eigen::VectorXd(Eigen::VectorXd::Zero(ni));
        return assemble_load([&](double x) { return pp.f(t, x); }, mesh, opt.quad.order);
    };

    ParabolicResult res;
    Eigen::VectorXd g0 = nodal(pp.g, 0.0);
    Eigen::VectorXd u0(n);
    if (pp.u0_nodal) {
        u0 = *pp.u0_nodal;
    } else {
        for (int i = 0; i < n; ++i) u0[i] = mesh.interior[i] ? (pp.u0 ? pp.u0(mesh.nodes[i]) : 0.0) : g0[i];
    }
    double gscale = std::max(1.0, g0.lpNorm<Eigen::Infinity>());
    for (int i = 0; i < n; ++i)
        if (!mesh.interior[i] && std::abs(u0[i] - g0[i]) > 1e-9 * gscale)
            throw ConfigError("initial data differ from g(0) at the exterior node x = " + std::to_string(mesh.nodes[i]));

    Eigen::VectorXd w = (u0 - g0).segment(i0, ni);
    res.t.push_back(0.0);
    res.u.push_back(u0);
    res.l2_norm.push_back(std::sqrt(std::max(0.0, w.dot(M * w))));
    const double w0 = w.dot(M * w);
    double dissipation = 0.0, energy = 0.0, work = 0.0, traj = 0.0, data = w0;

    Eigen::MatrixXd A_cached;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    double cached_a = std::nan("");
    for (int s = 1; s <= steps; ++s) {
        double t = s * pp.dt;
        Eigen::MatrixXd A;
        if (pp.time_only) {
            double a = modulation(t, 0.0, 0.0);
            if (a != cached_a) {
                A_cached = a * base.A;
                lu.compute(M + pp.dt * A_cached.middleCols(i0, ni));
                cached_a = a;
            }
            A = A_cached;
        } else {
            A = A_at(t);
            lu.compute(M + pp.dt * A.middleCols(i0, ni));
        }
        Eigen::VectorXd g = nodal(pp.g, t);
        Eigen::VectorXd F = load(t);
        Eigen::VectorXd rhs = F - Mrow * g_dot(t) - A * g;
        Eigen::VectorXd wn = lu.solve(M * w + pp.dt * rhs);
        Eigen::VectorXd dw = wn - w;
        dissipation += dw.dot(M * dw);
        energy += 2.0 * pp.dt * wn.dot(A.middleCols(i0, ni) * wn);
        work += 2.0 * pp.dt * rhs.dot(wn);
        traj += pp.dt * wn.dot((M + base.S_full) * wn);
        data += pp.dt * F.squaredNorm();
        w = wn;
        Eigen::VectorXd u = g;
        u.segment(i0, ni) += w;
        res.t.push_back(t);
        res.u.push_back(u);
        res.l2_norm.push_back(std::sqrt(std::max(0.0, w.dot(M * w))));
    }
    res.energy_lhs = w.dot(M * w) + dissipation + energy;
    res.energy_rhs = w0 + work;
    double den = std::max(std::abs(res.energy_lhs), std::abs(res.energy_rhs));
    res.energy_rel_error = den > 0.0 ? std::abs(res.energy_lhs - res.energy_rhs) / den : 0.0;
    res.trajectory_H = traj;
    res.data_norm = data;
    return res;
}

}  // namespace nld
