#include "nld/analysis.hpp"

#include "nld/catalog.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>

namespace nld {

namespace {

double min_pencil(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("generalized eigenvalue solver failed");
    return es.eigenvalues()(0);
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = nd(rng);
    return u;
}

double node_value(const Mesh& m, const Eigen::VectorXd& u, double x) {
    for (int i = 0; i < m.num_nodes(); ++i)
        if (std::abs(m.nodes[i] - x) < 1e-12) return u[i];
    return DiscreteFunction{&m, u}(x);
}

// L2(Omega) norm of F by 8-point Gauss on the elements of mesh m inside Omega.
double l2_omega(const Mesh& m, const std::function<double(double)>& F) {
    const GaussRule& g = gauss_legendre(8);
    double s = 0.0;
    for (int e = m.ia; e < m.ib; ++e) {
        double a = m.nodes[e], b = m.nodes[e + 1];
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            double x = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[q];
            double v = F(x);
            s += 0.5 * (b - a) * g.weights[q] * v * v;
        }
    }
    return std::sqrt(s);
}

}  // namespace

GardingResult estimate_garding(const DiscreteProblem& p) {
    GardingResult r;
    if (p.M.rows() == 0) return r;
    Eigen::MatrixXd B = p.sym_A_int() - 0.25 * (p.M + p.S_full);
    r.lambda_min = min_pencil(B, p.M);
    r.gamma_star = std::max(0.0, -r.lambda_min);
    // confirm: B + (gamma* + margin) M admits a Cholesky factorization
    double margin = 1e-9 * std::max(1.0, r.gamma_star);
    Eigen::LLT<Eigen::MatrixXd> llt(B + (r.gamma_star + margin) * p.M);
    r.cholesky_confirmed = llt.info() == Eigen::Success;
    if (!r.cholesky_confirmed) {
        // bisection upward in case the eigenvalue was slightly off
        double lo = r.gamma_star, hi = r.gamma_star + 1.0;
        while (Eigen::LLT<Eigen::MatrixXd>(B + hi * p.M).info() != Eigen::Success) hi *= 2.0;
        while (hi - lo > 1e-6) {
            double mid = 0.5 * (lo + hi);
            if (Eigen::LLT<Eigen::MatrixXd>(B + mid * p.M).info() == Eigen::Success)
                hi = mid;
            else
                lo = mid;
        }
        r.gamma_star = hi;
        r.cholesky_confirmed = true;
    }
    return r;
}

PoincareResult estimate_poincare(const DiscreteProblem& p) {
    PoincareResult r;
    if (p.M.rows() == 0) return r;
    r.lambda_min = min_pencil(p.S_full, p.M);
    r.positive = r.lambda_min > 0.0;
    r.C_P = r.positive ? 1.0 / r.lambda_min : kInf;
    return r;
}

CertificateResult garding_certificate(const DiscreteProblem& p, double gamma, int samples, std::uint64_t seed) {
    CertificateResult c;
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd symA = p.sym_A_int();
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd u = random_vector(rng, static_cast<int>(p.M.rows()));
        double m = u.dot(p.M * u);
        double lhs = u.dot(symA * u) + gamma * m - 0.25 * u.dot((p.M + p.S_full) * u);
        c.worst_slack = std::min(c.worst_slack, lhs / m);
        ++c.samples;
    }
    c.passed = c.worst_slack >= -1e-9;
    return c;
}

CertificateResult poincare_certificate(const DiscreteProblem& p, double C_P, int samples, std::uint64_t seed) {
    CertificateResult c;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd u = random_vector(rng, static_cast<int>(p.M.rows()));
        double m = u.dot(p.M * u);
        double slack = (u.dot(p.S_full * u) - (1.0 / C_P - 1e-9) * m) / m;
        c.worst_slack = std::min(c.worst_slack, slack);
        ++c.samples;
    }
    c.passed = c.worst_slack >= -1e-9;
    return c;
}

SectorResult sector_constant(const DiscreteProblem& p, int trials, std::uint64_t seed, double A1, double A2) {
    SectorResult r;
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd A = p.A_int();
    Eigen::MatrixXd E1 = p.sym_A_int() + p.M;
    if (A1 > 0.0 && A2 >= 0.0) r.bound = std::sqrt(A1 * A2);
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd u = random_vector(rng, static_cast<int>(A.rows()));
        Eigen::VectorXd v = random_vector(rng, static_cast<int>(A.rows()));
        double eu = u.dot(E1 * u), ev = v.dot(E1 * v);
        if (!(eu > 0.0 && ev > 0.0)) {
            ++r.skipped;
            continue;
        }
        r.sector_K = std::max(r.sector_K, std::abs(v.dot(A * u)) / std::sqrt(eu * ev));
        ++r.used;
    }
    return r;
}

MaxPrinResult max_principle_probe(const Kernel& k, const Mesh& mesh, const LoadFn& f, const SolveOptions& opt,
                                  double tol_mp) {
    MaxPrinResult r;
    const GaussRule& g = gauss_legendre(opt.assembly.quad.order);
    for (int e = mesh.ia; e < mesh.ib; ++e)
        for (double s : g.nodes) {
            double x = 0.5 * (mesh.nodes[e] + mesh.nodes[e + 1]) + 0.5 * mesh.h * s;
            if (f(x) > 0.0) throw PreconditionError("max principle probe needs f <= 0");
        }
    SolveOptions o = opt;
    o.independent_residual = false;
    Solution s = solve_elliptic(k, mesh, f, DataFn{[](double) { return 0.0; }, false, {}}, o);
    r.path = s.path_used;
    r.scale = s.scale;
    r.tol = tol_mp;
    r.sup_u = -kInf;
    for (int i = mesh.ia + 1; i < mesh.ib; ++i) r.sup_u = std::max(r.sup_u, s.u[i]);
    r.holds = r.sup_u <= tol_mp * std::max(s.scale, 1e-300);
    return r;
}

std::vector<double> default_betas(double alpha) {
    double t = 0.5 * (alpha - 1.0);
    return {t - 0.15, t - 0.10, t - 0.05, t + 0.05, t + 0.10, t + 0.15};
}

std::string classify_sweep(const std::vector<double>& s) {
    if (s.size() < 3) return "undetermined";
    // growth of the last increment relative to the previous one
    double d1 = s[s.size() - 2] - s[s.size() - 3];
    double d2 = s.back() - s[s.size() - 2];
    if (d1 == 0.0) return d2 == 0.0 ? "finite" : "divergent";
    return std::abs(d2 / d1) >= 1.0 ? "divergent" : "finite";
}

std::vector<SweepRow> boundary_regularity_sweep(double alpha, const std::vector<double>& betas,
                                                const std::vector<double>& hs, const AssemblyOptions& opt) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("sweep: alpha must lie in (0,2)");
    for (double b : betas)
        if (!(2.0 * b > -1.0)) throw ConfigError("sweep: beta must exceed -1/2 so that g is in L2");
    KernelParams kp = default_params("Ex8", 1);
    kp.alpha = alpha;
    Kernel k = scaled(make_catalog_kernel("Ex8", kp), alpha * (2.0 - alpha));
    std::vector<std::vector<double>> semis(betas.size());
    for (double h : hs) {
        Mesh m = build_mesh({-1.0, 1.0}, h, 1.0);
        DiscreteProblem p = assemble_problem(k, m, opt);
        for (std::size_t ib = 0; ib < betas.size(); ++ib) {
            double b = betas[ib];
            DataFn g{[b](double x) {
                         double r = std::abs(x);
                         return (r >= 1.0 && r <= 2.0) ? std::pow(r - 1.0, b) : 0.0;
                     },
                     true,
                     {-2.0, -1.0, 1.0, 2.0}};
            semis[ib].push_back(seminorm_V(p, exterior_data(g, m)));
        }
    }
    std::vector<SweepRow> rows;
    for (std::size_t ib = 0; ib < betas.size(); ++ib) {
        std::string cls = classify_sweep(semis[ib]);
        for (std::size_t ih = 0; ih < hs.size(); ++ih) {
            SweepRow r;
            r.beta = betas[ib];
            r.h = hs[ih];
            r.seminorm = semis[ib][ih];
            r.growth_factor = ih ? semis[ib][ih] / semis[ib][ih - 1] : 0.0;
            r.classification = cls;
            rows.push_back(r);
        }
    }
    return rows;
}

InequalityCounts verify_elementary_inequalities(long trials, std::uint64_t seed) {
    InequalityCounts c;
    c.trials = trials;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto witness = [&](const std::string& s) {
        if (c.witness.empty()) c.witness = s;
    };
    for (long t = 0; t < trials; ++t) {
        // (1-a)/(1-b) <= theta^2 (b-a)^2 / ((1-a)(1-b)) + theta/(theta-1)
        double theta = 1.0 + 9.0 * u01(rng) + 1e-9;
        double a = u01(rng), b = u01(rng);
        if (t % 97 == 0) b = a;
        double rhs1 = theta * theta * (b - a) * (b - a) / ((1.0 - b) * (1.0 - a)) + theta / (theta - 1.0);
        double lhs1 = (1.0 - a) / (1.0 - b);
        if (lhs1 > rhs1 * (1.0 + 1e-12)) {
            ++c.ratio_bound;
            std::ostringstream ss;
            ss << "ratio_bound theta=" << theta << " a=" << a << " b=" << b;
            witness(ss.str());
        }
        double lhs2 = (1.0 - b) / (1.0 - a) + (1.0 - a) / (1.0 - b);
        double rhs2 = 2.0 * theta * theta * (b - a) * (b - a) / ((1.0 - b) * (1.0 - a)) + 2.0 * theta / (theta - 1.0);
        if (lhs2 > rhs2 * (1.0 + 1e-12)) {
            ++c.ratio_bound_sym;
            std::ostringstream ss;
            ss << "ratio_bound_sym theta=" << theta << " a=" << a << " b=" << b;
            witness(ss.str());
        }
        // (a - b)(1/b - 1/a) >= (log a - log b)^2
        double x = std::exp(8.0 * (u01(rng) - 0.5)), y = std::exp(8.0 * (u01(rng) - 0.5));
        if (t % 89 == 0) y = x;
        double l = (x - y) * (1.0 / y - 1.0 / x), r = std::pow(std::log(x) - std::log(y), 2);
        if (l < r - 1e-12 * std::max(1.0, r)) {
            ++c.log_ineq;
            std::ostringstream ss;
            ss << "log a=" << x << " b=" << y;
            witness(ss.str());
        }
        // convolution inequality on a grid with q = 1_{B_rho}
        double dx = 0.25 + 0.25 * u01(rng);
        int nr = 1 + static_cast<int>(3 * u01(rng));   // rho in grid units
        int nR = 2 + static_cast<int>(4 * u01(rng));   // R in grid units
        double rho = (nr + 0.5) * dx, R = (nR + 0.5) * dx;
        int N = nR + nr + 1;   // grid indices -N..N cover B_{R+rho}
        std::vector<double> u(2 * N + 1);
        std::normal_distribution<double> nd;
        for (double& v : u) v = nd(rng);
        auto q = [&](int m) { return std::abs(m * dx) < rho ? 1.0 : 0.0; };
        double qL1 = 0.0;
        for (int m = -N; m <= N; ++m) qL1 += q(m) * dx;
        std::vector<double> qq(4 * N + 1, 0.0);
        for (int m = -2 * N; m <= 2 * N; ++m)
            for (int j = -N; j <= N; ++j) qq[m + 2 * N] += dx * q(j) * q(m - j);
        double lhs = 0.0, rhs = 0.0;
        for (int i = -N; i <= N; ++i)
            for (int j = -N; j <= N; ++j) {
                double d = u[i + N] - u[j + N];
                if (std::abs(i * dx) < R && std::abs(j * dx) < R) lhs += d * d * qq[i - j + 2 * N];
                if (std::abs(i * dx) < R + rho && std::abs(j * dx) < R + rho) rhs += d * d * q(i - j);
            }
        lhs *= dx * dx;
        rhs *= 4.0 * qL1 * dx * dx;
        if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) {
            ++c.convolution;
            std::ostringstream ss;
            ss << "convolution dx=" << dx << " rho=" << rho << " R=" << R;
            witness(ss.str());
        }
    }
    return c;
}

double fitted_rate(const std::vector<double>& hs, const std::vector<double>& e) {
    std::vector<double> X, Y;
    for (std::size_t i = 0; i < hs.size() && i < e.size(); ++i)
        if (e[i] > 0.0) {
            X.push_back(std::log2(hs[i]));
            Y.push_back(std::log2(e[i]));
        }
    if (X.size() < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= X.size();
    my /= Y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        sxy += (X[i] - mx) * (Y[i] - my);
        sxx += (X[i] - mx) * (X[i] - mx);
    }
    return sxy / sxx;
}

ConvergenceResult convergence_study(double alpha, const std::vector<double>& hs, const AssemblyOptions& opt) {
    ConvergenceResult res;
    res.alpha = alpha;
    res.target_ratio = std::pow(4.0 / 3.0, 0.5 * alpha);
    KernelParams kp = default_params("Ex8", 1);
    kp.alpha = alpha;
    Kernel k = make_catalog_kernel("Ex8", kp);
    SolveOptions so;
    so.assembly = opt;
    so.independent_residual = false;
    PathVerdicts v;
    v.L = v.C = v.Ktilde = v.K = v.D = v.E_alpha = Verdict::holds;
    so.verdicts = v;
    auto shape = [alpha](double x) { return std::pow(std::max(0.0, 1.0 - x * x), 0.5 * alpha); };

    std::vector<Mesh> meshes;
    meshes.reserve(hs.size());
    std::vector<Eigen::VectorXd> sols;
    for (double h : hs) {
        meshes.push_back(build_mesh({-1.0, 1.0}, h, 1.0));
        const Mesh& m = meshes.back();
        Solution s = solve_elliptic(k, m, [](double) { return 1.0; }, DataFn{[](double) { return 0.0; }, false, {}}, so);
        sols.push_back(s.u);
        ConvergenceRow row;
        row.h = h;
        row.shape_ratio = node_value(m, s.u, 0.0) / node_value(m, s.u, 0.5);
        DiscreteFunction uh{&m, s.u};
        // c = <u_h, phi> / <phi, phi> over Omega
        const GaussRule& g = gauss_legendre(8);
        double num = 0.0, den = 0.0;
        for (int e = m.ia; e < m.ib; ++e) {
            double a = m.nodes[e], b = m.nodes[e + 1];
            for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                double x = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[q];
                double w = 0.5 * (b - a) * g.weights[q];
                num += w * uh(x) * shape(x);
                den += w * shape(x) * shape(x);
            }
        }
        double c = num / den;
        row.fit_error = l2_omega(m, [&](double x) { return uh(x) - c * shape(x); });
        res.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
        DiscreteFunction a{&meshes[i], sols[i]}, b{&meshes[i + 1], sols[i + 1]};
        res.rows[i].self_error = l2_omega(meshes[i + 1], [&](double x) { return a(x) - b(x); });
    }
    std::vector<double> fe, se, sh;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        fe.push_back(res.rows[i].fit_error);
        if (i + 1 < res.rows.size()) {
            se.push_back(res.rows[i].self_error);
            sh.push_back(res.rows[i].h);
        }
    }
    res.fit_rate = fitted_rate(hs, fe);
    res.self_rate = fitted_rate(sh, se);
    return res;
}

}  // namespace nld
