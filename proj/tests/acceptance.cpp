// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "nld/analysis.hpp"
#include "nld/catalog.hpp"
#include "nld/cli.hpp"
#include "nld/config.hpp"
#include "nld/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace nld;
namespace fs = std::filesystem;

namespace {

const std::string kSource = NLD_SOURCE_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string tmpdir() {
    fs::path p = fs::temp_directory_path() / ("nld_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p.string();
}

int cli(std::vector<std::string> args) { return run_cli(args); }

const std::vector<double> kLadder{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};

// Non-"?" cells of the reference table (P, C, K~, K, symmetry), numeric example order,
// with the truncated kernel Ex14t as the fifteenth column.
const std::map<std::string, std::string> kReference{
    {"Ex1", "++++ +"},  {"Ex2", "++++ +"}, {"Ex3", "++++ -"}, {"Ex4", "++++ -"}, {"Ex5", "+?++ ?"},
    {"Ex6", "+-++ -"},  {"Ex7", "++++ -"}, {"Ex8", "++++ +"}, {"Ex9", "++++ +"}, {"Ex10", "++-- -"},
    {"Ex11", "+?+? ?"}, {"Ex12", "+++- -"}, {"Ex13", "++++ +"}, {"Ex14", "+-++ -"}, {"Ex14t", "+-++ -"}};

// "?" directions that cannot be realized: any Ex11 kernel satisfies (K),
// since k_a^2/k_s <= k_s away from the diagonal and <= C|z|^(alpha-2beta-d) near it.
const std::set<std::string> kInfeasible{"Ex11:K:-"};

Outcome criterion1(const std::string& dir) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    std::string out = dir + "/table.csv";
    int code = cli({"table", "--out", out});
    double secs = seconds_since(t0);
    if (code != 0) return {false, "nld table exit " + std::to_string(code)};
    std::string got = read_file(out);
    std::vector<std::string> lines = split(got, '\n');
    const char* names[5] = {"P", "C", "Ktilde", "K", "symmetry"};
    std::set<std::string> checked_cells;
    int mismatched = 0;
    std::map<std::string, std::set<char>> realized;   // "Ex11:K" -> {'+','-'}
    std::string bad;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> cells = split(lines[i], ',');
        if (cells.size() != 6) continue;
        std::string ex = cells[0].substr(0, cells[0].find(':'));
        std::string pat = kReference.at(ex);
        for (int c = 0; c < 5; ++c) {
            char want = pat[c < 4 ? c : 5];
            const std::string& cell = cells[c + 1];
            char sign = cell.find("✓") != std::string::npos ? '+' : (cell.find("−") != std::string::npos ? '-' : '!');
            if (sign == '!') {
                ++mismatched;
                bad += " " + cells[0] + ":" + names[c] + "=!";
                continue;
            }
            if (want == '?') {
                if (cell.rfind("?", 0) != 0) {
                    ++mismatched;
                    bad += " " + cells[0] + ":" + names[c] + " not marked ?";
                }
                realized[ex + ":" + names[c]].insert(sign);
            } else {
                checked_cells.insert(ex + ":" + names[c]);
                if (sign != want) {
                    ++mismatched;
                    bad += " " + cells[0] + ":" + names[c];
                }
            }
        }
    }
    int directions = 0;
    std::string missing;
    for (const auto& [key, signs] : realized)
        for (char s : {'+', '-'}) {
            if (signs.count(s)) {
                ++directions;
            } else if (!kInfeasible.count(key + ":" + std::string(1, s))) {
                missing += " " + key + ":" + s;
            }
        }
    std::string golden = read_file(kSource + "/tests/golden/table.csv");
    bool same = got == golden;
    o.pass = mismatched == 0 && missing.empty() && same && checked_cells.size() == 70 && secs <= 300.0;
    std::ostringstream d;
    d << checked_cells.size() << " fixed cells, " << mismatched << " mismatches" << bad << "; " << directions
      << " '?' directions realized";
    if (!missing.empty()) d << ", missing" << missing;
    d << " (Ex11 K: only holds is realizable); golden " << (same ? "identical" : "differs") << "; " << secs << " s";
    o.detail = d.str();
    return o;
}

Outcome criterion2() {
    int wrong = 0, total = 0;
    std::string bad;
    for (double alpha : {0.5, 1.0, 1.5}) {
        std::vector<double> betas = default_betas(alpha);
        std::vector<SweepRow> rows = boundary_regularity_sweep(alpha, betas, kLadder, AssemblyOptions{});
        double thr = 0.5 * (alpha - 1.0);
        for (const SweepRow& r : rows) {
            if (r.h != kLadder.back()) continue;
            ++total;
            if ((r.classification == "finite") != (r.beta > thr)) {
                ++wrong;
                bad += " alpha=" + fmt17(alpha) + ",beta=" + fmt17(r.beta);
            }
        }
    }
    return {wrong == 0 && total == 18,
            std::to_string(total) + " (alpha, beta) pairs, " + std::to_string(wrong) + " misclassified" + bad};
}

Outcome criterion3() {
    Outcome o;
    std::ostringstream d;
    for (double alpha : {1.0, 1.5}) {
        ConvergenceResult r = convergence_study(alpha, kLadder, AssemblyOptions{});
        bool mono = true;
        for (std::size_t i = 1; i < r.rows.size(); ++i) {
            if (!(r.rows[i].fit_error < r.rows[i - 1].fit_error)) mono = false;
            if (i + 1 < r.rows.size() && !(r.rows[i].self_error < r.rows[i - 1].self_error)) mono = false;
        }
        double ratio = r.rows.back().shape_ratio;
        double dev = std::abs(ratio / r.target_ratio - 1.0);
        bool ok = mono && r.fit_rate > 0.4 && r.self_rate > 0.4 && dev <= 0.02;
        o.pass = o.pass && ok;
        d << "alpha=" << alpha << ": monotone=" << (mono ? "yes" : "no") << " fit_rate=" << r.fit_rate
          << " self_rate=" << r.self_rate << " ratio=" << ratio << " target=" << r.target_ratio
          << " dev=" << dev << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome criterion4() {
    Outcome o;
    int kernels = 0;
    double worst_g = kInf, worst_p = kInf;
    std::string bad;
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 32, 2.0);
    ConditionOptions co;
    for (const TableEntry& e : table_entries()) {
        // the cusp kernel is two dimensional by construction; the solver is one dimensional
        if (e.id == "Ex13") continue;
        KernelParams p = e.params;
        if (p.dim != 1) {
            KernelParams d1 = default_params(e.id, 1);
            d1.perturbation = p.perturbation;
            p = d1;
        }
        // for alpha >= 1 the k_a part of the Ex10 stiffness is not absolutely integrable
        if (e.id == "Ex10") p.alpha = 0.5;
        Kernel k = make_catalog_kernel(e.id, p);
        if (check_L(k, probes_for(k, co)).verdict != Verdict::holds) continue;
        ++kernels;
        try {
            DiscreteProblem dp = assemble_problem(k, m, AssemblyOptions{});
            GardingResult g = estimate_garding(dp);
            PoincareResult pr = estimate_poincare(dp);
            CertificateResult gc = garding_certificate(dp, g.gamma_star, 1000, 11);
            CertificateResult pc = pr.positive ? poincare_certificate(dp, pr.C_P, 1000, 12) : CertificateResult{};
            worst_g = std::min(worst_g, gc.worst_slack);
            worst_p = std::min(worst_p, pc.worst_slack);
            if (!(g.cholesky_confirmed && pr.positive && gc.passed && pc.passed && std::isfinite(g.gamma_star)))
                bad += " " + e.example;
        } catch (const std::exception& ex) {
            bad += " " + e.example + "(" + ex.what() + ")";
        }
    }
    o.pass = bad.empty() && kernels >= 16;
    std::ostringstream d;
    d << kernels << " kernels (d = 1 forms, Ex13 excluded, Ex10 at alpha = 0.5), worst Garding slack " << worst_g
      << ", worst Poincare slack " << worst_p;
    if (!bad.empty()) d << "; failed:" << bad;
    o.detail = d.str();
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::ostringstream d;
    double worst = -kInf;
    auto run = [&](const Kernel& k, const std::string& name) {
        for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
            Mesh m = build_mesh({-1.0, 1.0}, h, 2.0);
            SolveOptions so;
            MaxPrinResult r = max_principle_probe(k, m, [](double) { return -1.0; }, so, 1e-8);
            worst = std::max(worst, r.sup_u / r.scale);
            if (!r.holds) {
                o.pass = false;
                d << name << " h=" << h << " sup=" << r.sup_u << "; ";
            }
        }
    };
    for (double a : {0.5, 1.0, 1.5}) {
        KernelParams p = default_params("Ex8", 1);
        p.alpha = a;
        run(make_catalog_kernel("Ex8", p), "Ex8(alpha=" + fmt17(a) + ")");
    }
    run(make_catalog_kernel("Ex14t", default_params("Ex14t", 1)), "Ex14t");
    d << "12 solves, max sup_u/scale = " << worst;
    o.detail = d.str();
    return o;
}

Outcome criterion6() {
    InequalityCounts c = verify_elementary_inequalities(100000, 2024);
    long total = c.ratio_bound + c.ratio_bound_sym + c.log_ineq + c.convolution;
    std::ostringstream d;
    d << c.trials << " trials each; counterexamples: ratio_bound=" << c.ratio_bound << " ratio_bound_sym=" << c.ratio_bound_sym
      << " log=" << c.log_ineq << " convolution=" << c.convolution;
    if (!c.witness.empty()) d << " first: " << c.witness;
    return {total == 0 && c.trials == 100000, d.str()};
}

Outcome criterion7() {
    Outcome o;
    std::ostringstream d;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const std::string id : {"Ex8", "Ex11"}) {
        Kernel k = make_catalog_kernel(id, default_params(id, 1));
        Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 128, 2.0);
        Eigen::MatrixXd A = assemble_stiffness(k, m, AssemblyOptions{});
        std::vector<Eigen::MatrixXd> Ad;
        for (int j = 4; j <= 10; ++j) {
            AssemblyOptions ao;
            ao.cutoff = std::ldexp(1.0, -j);
            Ad.push_back(assemble_stiffness(k, m, ao));
        }
        int bad = 0, crossings = 0;
        double last = 0.0;
        for (int pair = 0; pair < 20; ++pair) {
            double a[4], b[4];
            for (int i = 0; i < 4; ++i) {
                a[i] = U(rng);
                b[i] = U(rng);
            }
            Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_nodes()), v = u;
            for (int i = 0; i < m.num_nodes(); ++i) {
                if (!m.interior[i]) continue;
                double x = m.nodes[i], w = 1.0 - x * x;
                u[i] = w * (a[0] + a[1] * std::sin(2 * x) + a[2] * std::cos(3 * x) + a[3] * x);
                v[i] = w * (b[0] + b[1] * std::sin(2 * x) + b[2] * std::cos(3 * x) + b[3] * x);
            }
            Eigen::VectorXd vi = v.segment(m.first_interior(), m.num_interior());
            double E = vi.dot(A * u), prev = kInf, first = 0.0;
            bool mono = true, crossed = false;
            for (const auto& Aj : Ad) {
                double signed_diff = vi.dot(Aj * u) - E, diff = std::abs(signed_diff);
                if (&Aj == &Ad.front()) first = signed_diff;
                else if (signed_diff * first < 0) crossed = true;
                if (!(diff < prev)) mono = false;
                prev = diff;
            }
            last = std::max(last, prev);
            if (!mono) ++bad;
            if (!mono && crossed) ++crossings;
        }
        // one pair through the public truncated form as a cross-check of the cutoff assembly
        Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_nodes());
        for (int i = 0; i < m.num_nodes(); ++i)
            if (m.interior[i]) u[i] = std::cos(0.5 * kPi * m.nodes[i]);
        Eigen::VectorXd ui = u.segment(m.first_interior(), m.num_interior());
        double direct = truncated_bilinear(k, m, u, u, 1.0 / 64, AssemblyOptions{});
        double via = ui.dot(Ad[2] * u);
        bool agree = std::abs(direct - via) <= 1e-12 * std::max(1.0, std::abs(via));
        if (bad || !agree) o.pass = false;
        d << id << ": " << bad << "/20 non-monotone (" << crossings << " with E_d - E changing sign), max |E_d - E| at 2^-10 = " << last
          << ", truncated form cross-check " << (agree ? "ok" : "differs") << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome criterion8() {
    Outcome o;
    std::ostringstream d;
    for (const std::string name : {"intro", "ex11-lifting"}) {
        RunConfig c = parse_config(read_file(kSource + "/scenarios/" + name + ".json"));
        Kernel k = c.kernel();
        Mesh m = c.mesh();
        SolveOptions so = c.solve_options();
        so.independent_residual = false;
        Expression f(c.f);
        DataFn g = c.g.at(0.0);
        Solution two = solve_elliptic(k, m, [f](double x) { return f(0.0, x); }, g, so);
        DiscreteProblem p = assemble_problem(k, m, so.assembly);
        p.F = assemble_load([f](double x) { return f(0.0, x); }, m, so.assembly.quad.order);
        Eigen::VectorXd g_all = exterior_data(g, m);
        Eigen::VectorXd one = solve_bordered(p, g_all);
        Eigen::VectorXd tw = two.u.segment(m.first_interior(), m.num_interior());
        double rel = (tw - one).lpNorm<Eigen::Infinity>() / std::max(1e-300, one.lpNorm<Eigen::Infinity>());
        double gnorm = g_all.lpNorm<Eigen::Infinity>();
        bool ok = rel <= 1e-10 && gnorm > 0.0;
        o.pass = o.pass && ok;
        d << name << ": rel diff " << rel << " (|g|_inf = " << gnorm << "); ";
    }
    o.detail = d.str();
    return o;
}

Outcome criterion9() {
    Outcome o;
    std::ostringstream d;
    Kernel k = make_catalog_kernel("Ex8", default_params("Ex8", 1));
    Mesh m = build_mesh({-1.0, 1.0}, 1.0 / 32, 2.0);
    AssemblyOptions ao;

    // energy identity with a(t) = 3/4 + cos(t)/4, nonzero f and g
    ParabolicProblem pp;
    pp.kernel = &k;
    pp.mesh = &m;
    pp.modulation = [](double t, double, double) { return 0.75 + 0.25 * std::cos(t); };
    pp.time_only = true;
    pp.T = 1.0;
    pp.dt = 1.0 / 16;
    pp.u0 = [](double x) { return std::cos(0.5 * kPi * x); };
    pp.f = [](double t, double x) { return std::sin(kPi * x) * std::exp(-t); };
    pp.g = [](double t, double x) {
        double r = std::abs(x);
        return (r >= 1.0 && r <= 3.0) ? (r - 1.0) * std::cos(t) : 0.0;
    };
    ParabolicResult r1 = solve_parabolic(pp, ao);

    // same identity with an x, y dependent modulation on a compactly supported kernel
    Kernel k1 = make_catalog_kernel("Ex1", default_params("Ex1", 1));
    ParabolicProblem pq = pp;
    pq.kernel = &k1;
    pq.modulation = [](double t, double x, double y) { return 0.75 + 0.25 * std::cos(t) * std::cos(x * y); };
    pq.time_only = false;
    ParabolicResult r1b = solve_parabolic(pq, ao);

    // contraction with f = 0, g = 0
    ParabolicProblem pz;
    pz.kernel = &k;
    pz.mesh = &m;
    pz.T = 1.0;
    pz.dt = 1.0 / 16;
    pz.u0 = [](double x) { return 1.0 - x * x + 0.3 * std::sin(5 * x); };
    ParabolicResult r2 = solve_parabolic(pz, ao);
    bool contractive = true;
    for (std::size_t n = 1; n < r2.l2_norm.size(); ++n)
        if (r2.l2_norm[n] > r2.l2_norm[n - 1]) contractive = false;

    // stationary data
    auto f = [](double x) { return 1.0 + x; };
    auto g = [](double x) {
        double r = std::abs(x);
        return (r >= 1.0 && r <= 3.0) ? std::cos(x) : 0.0;
    };
    SolveOptions so;
    so.independent_residual = false;
    Solution st = solve_elliptic(k, m, f, DataFn{g, false, {}}, so);
    ParabolicProblem ps;
    ps.kernel = &k;
    ps.mesh = &m;
    ps.T = 1.0;
    ps.dt = 1.0 / 16;
    ps.u0_nodal = st.u;
    ps.f = [f](double, double x) { return f(x); };
    ps.g = [g](double, double x) {
        // g is sampled at nodes; interior values are irrelevant to u but enter w = u - g
        return g(x);
    };
    ParabolicResult r3 = solve_parabolic(ps, ao);
    double drift = 0.0;
    for (const auto& u : r3.u) drift = std::max(drift, (u - st.u).lpNorm<Eigen::Infinity>());
    drift /= st.u.lpNorm<Eigen::Infinity>();

    o.pass = r1.energy_rel_error <= 1e-6 && r1b.energy_rel_error <= 1e-6 && contractive && drift <= 1e-9;
    d << "energy identity rel error " << r1.energy_rel_error << " (time-only a), " << r1b.energy_rel_error
      << " (a(t,x,y)); L2 nonincreasing: " << (contractive ? "yes" : "no") << "; stationary drift " << drift;
    o.detail = d.str();
    return o;
}

Outcome criterion10() {
    Outcome o;
    std::ostringstream d;
    for (const std::string name : {"intro", "ex8-torsion", "ex11-lifting", "ex14t-maxprin"}) {
        RunConfig c = parse_config(read_file(kSource + "/scenarios/" + name + ".json"));
        Kernel k = c.kernel();
        Expression f(c.f);
        DataFn g = c.g.at(0.0);
        SolveOptions so = c.solve_options();
        so.independent_residual = false;
        std::vector<double> ratios;
        for (double h : kLadder) {
            Mesh m = build_mesh(c.omega, h, c.halo);
            ratios.push_back(solve_elliptic(k, m, [f](double x) { return f(0.0, x); }, g, so).energy_ratio);
        }
        double worst = 0.0;
        for (std::size_t i = 2; i < ratios.size(); ++i) worst = std::max(worst, ratios[i] / ratios[i - 1]);
        bool ok = worst <= 1.1;
        for (double r : ratios) ok = ok && std::isfinite(r) && r > 0.0;
        o.pass = o.pass && ok;
        d << name << ": max growth " << worst << " (finest ratio " << ratios.back() << "); ";
    }
    o.detail = d.str();
    return o;
}

Outcome criterion11(const std::string& dir) {
    const std::string sc = kSource + "/scenarios/";
    struct Run {
        std::string name;
        std::vector<std::string> args;
        std::vector<std::string> files;
    };
    std::vector<Run> runs{
        {"table", {"table", "--out", "@/table.csv", "--report", "@/table.json"}, {"table.csv", "table.json"}},
        {"check-kernel",
         {"check-kernel", "--config", sc + "ex14t-maxprin.json", "--report", "@/check.json"},
         {"check.json"}},
        {"solve",
         {"solve", "--config", sc + "intro.json", "--out", "@/sol.csv", "--report", "@/sol.json",
          "--dump-matrices", "@/mat"},
         {"sol.csv", "sol.json", "mat/A.csv", "mat/M.csv", "mat/S.csv"}},
        {"solve-parabolic",
         {"solve-parabolic", "--config", sc + "parabolic-modulated.json", "--out", "@/traj.csv", "--report",
          "@/traj.json"},
         {"traj.csv", "traj.json"}},
        {"study sector",
         {"study", "sector", "--config", sc + "ex11-lifting.json", "--out", "@/sector.csv", "--seed", "5"},
         {"sector.csv"}},
        {"study lemmas",
         {"study", "lemmas", "--config", sc + "ex8-torsion.json", "--out", "@/lemmas.csv", "--report",
          "@/lemmas.json"},
         {"lemmas.csv", "lemmas.json"}},
        {"study garding",
         {"study", "garding", "--config", sc + "ex14t-maxprin.json", "--out", "@/garding.csv"},
         {"garding.csv"}}};
    std::string bad;
    int compared = 0;
    for (const Run& r : runs) {
        std::vector<std::string> outputs[2];
        int codes[2] = {0, 0};
        for (int rep = 0; rep < 2; ++rep) {
            std::string d = dir + "/det" + std::to_string(rep);
            std::vector<std::string> args;
            for (auto a : r.args) args.push_back(a[0] == '@' ? d + a.substr(1) : a);
            codes[rep] = cli(args);
            // exit 2 is a verdict (Ex14t fails (C)) and still writes its report
            if (codes[rep] != 0 && codes[rep] != 2) {
                bad += " " + r.name + "(exit " + std::to_string(codes[rep]) + ")";
                break;
            }
            for (const auto& f : r.files) outputs[rep].push_back(read_file(d + "/" + f));
        }
        if (codes[0] != codes[1]) bad += " " + r.name + "(exit codes differ)";
        if (outputs[0].size() != r.files.size() || outputs[1].size() != r.files.size()) continue;
        for (std::size_t i = 0; i < r.files.size(); ++i) {
            ++compared;
            if (outputs[0][i] != outputs[1][i]) bad += " " + r.files[i];
        }
    }
    return {bad.empty() && compared == 14,
            std::to_string(compared) + " artifacts compared byte for byte" + (bad.empty() ? "" : ", differing:" + bad)};
}

}  // namespace

int main() {
    std::string dir = tmpdir();
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"table reproduction", [&] { return criterion1(dir); }},
        {"boundary-regularity threshold", criterion2},
        {"fractional torsion shape", criterion3},
        {"Garding/Poincare certificates", criterion4},
        {"weak maximum principle surrogate", criterion5},
        {"elementary inequalities", criterion6},
        {"truncated-form consistency", criterion7},
        {"lifting equivalence", criterion8},
        {"parabolic stability and energy identity", criterion9},
        {"energy-estimate boundedness", criterion10},
        {"determinism", [&] { return criterion11(dir); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    fs::remove_all(dir);
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
