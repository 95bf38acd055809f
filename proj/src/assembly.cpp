#include "nld/assembly.hpp"

#include "nld/io.hpp"
#include "nld/parallel.hpp"

#include <filesystem>
#include <sstream>

namespace nld {

namespace {

struct LocalBlock {
    int nu = 0;
    int node[4] = {0, 0, 0, 0};
    double S[4][4] = {};
    double K[4][2] = {};
};

PairBreaks pair_breaks(const Kernel& k) {
    PairBreaks br;
    br.singular = k.singular();
    br.t = k.radial_breaks;
    br.axis = k.axis_breaks;
    if (k.support_radius) br.support = *k.support_radius;
    return br;
}

// Integrals over [x0,x1] x [y0,y1]. Node labels are opaque integers; the hat
// at label pe0 is 1 at x0, pe1 at x1, pf0 at y0, pf1 at y1.
LocalBlock compute_block(const Kernel& k, const PairBreaks& br, const AssemblyOptions& opt,
                         double x0, double x1, double y0, double y1, int pe0, int pe1, int pf0,
                         int pf1) {
    LocalBlock b;
    b.node[b.nu++] = pe0;
    b.node[b.nu++] = pe1;
    if (pf0 != pe0 && pf0 != pe1) b.node[b.nu++] = pf0;
    if (pf1 != pe0 && pf1 != pe1) b.node[b.nu++] = pf1;
    int xr[4], yr[4];
    for (int a = 0; a < b.nu; ++a) {
        int v = b.node[a];
        xr[a] = v == pe0 ? 0 : (v == pe1 ? 1 : -1);
        yr[a] = v == pf0 ? 0 : (v == pf1 ? 1 : -1);
    }
    const int nu = b.nu;
    const int ns = nu * (nu + 1) / 2;
    const int m = ns + 2 * nu;
    const double hx = x1 - x0, hy = y1 - y0;
    auto f = [&](double x, double y, double t, double* out) {
        double X[2] = {(x1 - x) / hx, (x - x0) / hx};
        double Y[2] = {(y1 - y) / hy, (y - y0) / hy};
        SymAnti s = k.profile ? k.split_z({x, 0.0}, {-t, 0.0}) : k.split({x, 0.0}, {y, 0.0});
        double d[4];
        for (int a = 0; a < nu; ++a) d[a] = (xr[a] >= 0 ? X[xr[a]] : 0.0) - (yr[a] >= 0 ? Y[yr[a]] : 0.0);
        int c = 0;
        for (int a = 0; a < nu; ++a)
            for (int bb = a; bb < nu; ++bb) out[c++] = d[a] * d[bb] * s.sym;
        for (int a = 0; a < nu; ++a) {
            out[c++] = d[a] * X[0] * s.anti;
            out[c++] = d[a] * X[1] * s.anti;
        }
    };
    double res[18];
    pair_quadrature(x0, x1, y0, y1, br, opt.quad, m, f, res, opt.cutoff);
    int c = 0;
    for (int a = 0; a < nu; ++a)
        for (int bb = a; bb < nu; ++bb) {
            b.S[a][bb] = res[c];
            b.S[bb][a] = res[c];
            ++c;
        }
    for (int a = 0; a < nu; ++a) {
        b.K[a][0] = res[c++];
        b.K[a][1] = res[c++];
    }
    return b;
}

void scatter(const LocalBlock& b, int offset, int e, bool f_in_omega, FormMatrices& out) {
    Eigen::MatrixXd& S = f_in_omega ? out.S_in : out.S_out;
    for (int a = 0; a < b.nu; ++a) {
        int p = b.node[a] + offset;
        for (int c = 0; c < b.nu; ++c) S(p, b.node[c] + offset) += b.S[a][c];
        out.Ka(e, p) += b.K[a][0];
        out.Ka(e + 1, p) += b.K[a][1];
    }
}

void add_tails(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt, FormMatrices& out) {
    const GaussRule& g = gauss_legendre(std::max(2 * opt.quad.order, 10));
    const double left = mesh.left(), right = mesh.right();
    for (int e = mesh.ia; e < mesh.ib; ++e) {
        double x0 = mesh.nodes[e], x1 = mesh.nodes[e + 1], hx = x1 - x0;
        double acc[3][3] = {};   // [X0X0, X0X1, X1X1] x [sym, anti]
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            double x = 0.5 * (x0 + x1) + 0.5 * hx * g.nodes[q];
            double w = 0.5 * hx * g.weights[q];
            double yr = std::max(right, x + opt.cutoff), yl = std::min(left, x - opt.cutoff);
            SymAnti r = k.ray_tail(x, yr, +1), l = k.ray_tail(x, yl, -1);
            double ts = r.sym + l.sym, ta = r.anti + l.anti;
            double X0 = (x1 - x) / hx, X1 = (x - x0) / hx;
            acc[0][0] += w * X0 * X0 * ts;
            acc[0][1] += w * X0 * X1 * ts;
            acc[0][2] += w * X1 * X1 * ts;
            acc[1][0] += w * X0 * X0 * ta;
            acc[1][1] += w * X0 * X1 * ta;
            acc[1][2] += w * X1 * X1 * ta;
        }
        out.S_out(e, e) += acc[0][0];
        out.S_out(e, e + 1) += acc[0][1];
        out.S_out(e + 1, e) += acc[0][1];
        out.S_out(e + 1, e + 1) += acc[0][2];
        out.Ka(e, e) += acc[1][0];
        out.Ka(e, e + 1) += acc[1][1];
        out.Ka(e + 1, e) += acc[1][1];
        out.Ka(e + 1, e + 1) += acc[1][2];
    }
}

}  // namespace

FormMatrices assemble_forms(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt) {
    if (k.dim != 1) throw ConfigError("assembly supports d = 1 kernels only");
    const int n = mesh.num_nodes(), ne = mesh.num_elements();
    FormMatrices out;
    out.S_in = Eigen::MatrixXd::Zero(n, n);
    out.S_out = Eigen::MatrixXd::Zero(n, n);
    out.Ka = Eigen::MatrixXd::Zero(n, n);
    const PairBreaks br = pair_breaks(k);
    const double h = mesh.h;
    const int threads = resolve_threads(opt.threads);

    if (k.is_difference() && k.axis_breaks.empty()) {
        // Translation invariance on the uniform mesh: one block per element offset.
        const int omin = -(mesh.ib - 1), omax = ne - 1 - mesh.ia;
        std::vector<LocalBlock> blocks(omax - omin + 1);
        parallel_for(static_cast<int>(blocks.size()), threads, [&](int idx) {
            int o = omin + idx;
            blocks[idx] = compute_block(k, br, opt, 0.0, h, o * h, (o + 1) * h, 0, 1, o, o + 1);
        });
        for (int e = mesh.ia; e < mesh.ib; ++e)
            for (int f = 0; f < ne; ++f) scatter(blocks[f - e - omin], e, e, mesh.element_in_omega(f), out);
    } else {
        const int batch = std::max(1, 8 * threads);
        std::vector<std::vector<LocalBlock>> rows(batch, std::vector<LocalBlock>(ne));
        for (int e0 = mesh.ia; e0 < mesh.ib; e0 += batch) {
            int cnt = std::min(batch, mesh.ib - e0);
            parallel_for(cnt * ne, threads, [&](int job) {
                int r = job / ne, f = job % ne, e = e0 + r;
                rows[r][f] = compute_block(k, br, opt, mesh.nodes[e], mesh.nodes[e + 1], mesh.nodes[f],
                                           mesh.nodes[f + 1], e, e + 1, f, f + 1);
            });
            for (int r = 0; r < cnt; ++r)
                for (int f = 0; f < ne; ++f) scatter(rows[r][f], 0, e0 + r, mesh.element_in_omega(f), out);
        }
    }
    add_tails(k, mesh, opt, out);
    return out;
}

Eigen::MatrixXd stiffness_from_forms(const FormMatrices& f, const Mesh& mesh) {
    const int ni = mesh.num_interior(), i0 = mesh.first_interior();
    Eigen::MatrixXd A(ni, mesh.num_nodes());
    for (int r = 0; r < ni; ++r) {
        int i = i0 + r;
        A.row(r) = 0.5 * (f.S_in.row(i) + 2.0 * f.S_out.row(i)) + f.Ka.row(i);
    }
    return A;
}

Eigen::MatrixXd full_seminorm_from_forms(const FormMatrices& f, const Mesh& mesh) {
    const int ni = mesh.num_interior(), i0 = mesh.first_interior();
    Eigen::MatrixXd S = f.S_in.block(i0, i0, ni, ni) + 2.0 * f.S_out.block(i0, i0, ni, ni);
    return 0.5 * (S + S.transpose());
}

Eigen::MatrixXd assemble_stiffness(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt) {
    return stiffness_from_forms(assemble_forms(k, mesh, opt), mesh);
}

Eigen::MatrixXd assemble_mass_all(const Mesh& mesh) {
    const int n = mesh.num_nodes();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        double he = mesh.nodes[e + 1] - mesh.nodes[e];
        M(e, e) += he / 3.0;
        M(e + 1, e + 1) += he / 3.0;
        M(e, e + 1) += he / 6.0;
        M(e + 1, e) += he / 6.0;
    }
    return M;
}

Eigen::MatrixXd assemble_mass(const Mesh& mesh) {
    const int ni = mesh.num_interior(), i0 = mesh.first_interior();
    return assemble_mass_all(mesh).block(i0, i0, ni, ni);
}

Eigen::VectorXd assemble_load(const LoadFn& f, const Mesh& mesh, int order) {
    const int ni = mesh.num_interior(), i0 = mesh.first_interior();
    Eigen::VectorXd F = Eigen::VectorXd::Zero(ni);
    const GaussRule& g = gauss_legendre(order);
    for (int e = mesh.ia; e < mesh.ib; ++e) {
        double x0 = mesh.nodes[e], x1 = mesh.nodes[e + 1], he = x1 - x0;
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            double x = 0.5 * (x0 + x1) + 0.5 * he * g.nodes[q];
            double v = f(x);
            if (!std::isfinite(v)) throw NumericError("load: non-finite f at x = " + std::to_string(x));
            double w = 0.5 * he * g.weights[q];
            s0 += w * v * (x1 - x) / he;
            s1 += w * v * (x - x0) / he;
        }
        if (mesh.interior[e]) F[e - i0] += s0;
        if (mesh.interior[e + 1]) F[e + 1 - i0] += s1;
    }
    return F;
}

Eigen::MatrixXd DiscreteProblem::A_int() const {
    return A.middleCols(mesh->first_interior(), mesh->num_interior());
}

Eigen::MatrixXd DiscreteProblem::sym_A_int() const {
    Eigen::MatrixXd a = A_int();
    return 0.5 * (a + a.transpose());
}

DiscreteProblem assemble_problem(const Kernel& k, const Mesh& mesh, const AssemblyOptions& opt) {
    DiscreteProblem p;
    p.mesh = &mesh;
    p.forms = assemble_forms(k, mesh, opt);
    p.A = stiffness_from_forms(p.forms, mesh);
    p.M_all = assemble_mass_all(mesh);
    p.M = assemble_mass(mesh);
    p.S_omega = p.forms.S_in + p.forms.S_out;
    p.S_omega = 0.5 * (p.S_omega + p.S_omega.transpose());
    p.S_full = full_seminorm_from_forms(p.forms, mesh);
    p.F = Eigen::VectorXd::Zero(mesh.num_interior());
    p.G_lift = Eigen::VectorXd::Zero(mesh.num_interior());
    return p;
}

Eigen::VectorXd lifting_vector(const Eigen::MatrixXd& A, const Mesh& mesh, const Eigen::VectorXd& g) {
    Eigen::VectorXd ge = g;
    for (int i = 0; i < mesh.num_nodes(); ++i)
        if (mesh.interior[i]) ge[i] = 0.0;
    return A * ge;
}

double seminorm_V(const DiscreteProblem& p, const Eigen::VectorXd& u_all) {
    return std::max(0.0, u_all.dot(p.S_omega * u_all));
}

Eigen::VectorXd extend_interior(const Mesh& mesh, const Eigen::VectorXd& u_int) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.num_nodes());
    u.segment(mesh.first_interior(), mesh.num_interior()) = u_int;
    return u;
}

double truncated_bilinear(const Kernel& k, const Mesh& mesh, const Eigen::VectorXd& u_all,
                          const Eigen::VectorXd& v_all, double delta, const AssemblyOptions& opt) {
    if (!(delta > mesh.h * 1e-6)) throw NumericError("truncated_bilinear: delta below the resolution floor h*1e-6");
    AssemblyOptions o = opt;
    o.cutoff = delta;
    Eigen::MatrixXd A = assemble_stiffness(k, mesh, o);
    Eigen::VectorXd v_int = v_all.segment(mesh.first_interior(), mesh.num_interior());
    return v_int.dot(A * u_all);
}

Eigen::VectorXd independent_action(const Kernel& k, const Mesh& mesh, const Eigen::VectorXd& u_all,
                                   const AssemblyOptions& opt) {
    AssemblyOptions o = opt;
    o.quad = refined(opt.quad);
    return assemble_stiffness(k, mesh, o) * u_all;
}

void dump_matrices(const DiscreteProblem& p, const std::string& dir) {
    auto dump = [&](const Eigen::MatrixXd& m, const std::string& name) {
        std::ostringstream ss;
        ss << "row,col,value\n";
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0.0) ss << i << ',' << j << ',' << fmt17(m(i, j)) << '\n';
        write_file_atomic((std::filesystem::path(dir) / name).string(), ss.str());
    };
    dump(p.A, "A.csv");
    dump(p.M, "M.csv");
    dump(p.S_omega, "S.csv");
}

}  // namespace nld
