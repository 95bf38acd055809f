#include "nld/cli.hpp"

#include "nld/analysis.hpp"
#include "nld/catalog.hpp"
#include "nld/config.hpp"
#include "nld/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

namespace nld {

using nlohmann::json;

namespace {

struct Globals {
    std::string config_path, out, report, dump_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool print_config = false;
    std::string study;
};

std::string b2s(bool b) { return b ? "true" : "false"; }

// json has no inf or nan; such values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

void emit_report(const std::string& path, const json& j) {
    if (!path.empty()) write_file_atomic(path, j.dump(2) + "\n");
}

RunConfig load(const Globals& g) {
    RunConfig c = g.config_path.empty() ? parse_config("{}") : parse_config(read_file(g.config_path));
    if (g.seed) c.seed = *g.seed;
    if (g.threads) c.threads = *g.threads;
    if (!g.out.empty()) c.out = g.out;
    if (!g.report.empty()) c.report = g.report;
    return c;
}

void require_config(const Globals& g, const std::string& cmd) {
    if (g.config_path.empty()) throw ConfigError(cmd + " needs --config <file>");
}

void require_1d(const RunConfig& c) {
    if (c.params.dim != 1) throw ConfigError("solves and studies run in one dimension; set kernel.dim = 1");
}

json verdict_json(Verdict v) { return to_string(v); }

int cmd_check_kernel(const RunConfig& c) {
    Kernel k = c.kernel();
    ConditionReport r = check_kernel(k, c.ktilde_id(), c.conditions());
    json j;
    j["kernel"] = k.label();
    j["dim"] = r.dim;
    j["verdicts"] = {{"L", verdict_json(r.L.verdict)},           {"K", verdict_json(r.K.verdict)},
                     {"Ktilde", verdict_json(r.Ktilde.verdict)}, {"C", verdict_json(r.C.verdict)},
                     {"E_alpha", verdict_json(r.E_alpha.verdict)}, {"D", verdict_json(r.D.verdict)},
                     {"P", verdict_json(r.P.verdict)},           {"symmetry", verdict_json(r.symmetry.verdict)}};
    j["constants"] = {{"L", num(r.L.value)},
                      {"A", num(r.K.value)},
                      {"A1", num(r.Ktilde.A1)},
                      {"A1_evidence", num(r.Ktilde.A1_evidence)},
                      {"A2", num(r.Ktilde.A2)},
                      {"Theta", num(r.D.Theta)},
                      {"D", num(r.D.D)},
                      {"alpha_ref", num(r.E_alpha.alpha_ref)},
                      {"lambda", num(r.E_alpha.lambda)},
                      {"C_P", num(r.P.C_P)},
                      {"c0", num(r.P.c0)},
                      {"cancel_inf", num(r.C.cancel_inf)}};
    j["notes"] = {{"L", r.L.note},           {"K", r.K.note},         {"Ktilde", r.Ktilde.note},
                  {"C", r.C.note},           {"E_alpha", r.E_alpha.note}, {"P", r.P.note},
                  {"symmetry", r.symmetry.note}};
    j["ktilde"] = r.Ktilde.ktilde_id;
    j["probes"] = r.num_probes;
    j["tolerances"] = {{"C", num(r.C.tol)}, {"C_rel", c.tol_C_rel}, {"D", c.tol_D}};
    j["seed"] = c.seed;

    std::vector<std::pair<std::string, Verdict>> all{{"L", r.L.verdict},       {"K", r.K.verdict},
                                                     {"Ktilde", r.Ktilde.verdict}, {"C", r.C.verdict},
                                                     {"E_alpha", r.E_alpha.verdict}, {"D", r.D.verdict},
                                                     {"P", r.P.verdict}};
    std::vector<std::string> failed, unexpected;
    for (const auto& [name, v] : all) {
        if (v != Verdict::fails) continue;
        failed.push_back(name);
        if (std::find(c.expected_fail.begin(), c.expected_fail.end(), name) == c.expected_fail.end())
            unexpected.push_back(name);
    }
    j["failed"] = failed;
    j["expected_fail"] = c.expected_fail;
    emit_report(c.report, j);
    if (c.report.empty()) std::cout << j.dump(2) << "\n";
    if (!unexpected.empty()) {
        std::string s;
        for (const auto& n : unexpected) s += (s.empty() ? "" : ", ") + n;
        std::cerr << "nld: " << k.label() << " fails " << s << "\n";
        return exit_verdict;
    }
    return exit_ok;
}

int cmd_table(const RunConfig& c) {
    ConditionOptions opt = c.conditions();
    std::vector<TableRow> rows;
    json notes = json::object();
    for (const TableEntry& e : table_entries()) {
        rows.push_back(table_row(e, opt));
        if (!rows.back().indeterminate_notes.empty()) notes[e.example] = rows.back().indeterminate_notes;
    }
    emit(c.out, table_csv(rows));
    emit_report(c.report, json{{"rows", rows.size()}, {"indeterminate", notes}, {"seed", c.seed}});
    return exit_ok;
}

Solution run_solve(const RunConfig& c, const Kernel& k, const Mesh& mesh, const std::string& dump_dir) {
    Expression f(c.f);
    LoadFn load = [f](double x) { return f(0.0, x); };
    DataFn g = c.g.at(0.0);
    SolveOptions so = c.solve_options();
    if (!dump_dir.empty()) {
        DiscreteProblem p = assemble_problem(k, mesh, so.assembly);
        dump_matrices(p, dump_dir);
    }
    return solve_elliptic(k, mesh, load, g, so);
}

int cmd_solve(const RunConfig& c, const Globals& gl) {
    require_1d(c);
    Kernel k = c.kernel();
    Mesh mesh = c.mesh();
    Solution s = run_solve(c, k, mesh, gl.dump_dir);
    std::ostringstream csv;
    csv << "x,u\n";
    for (int i = 0; i < mesh.num_nodes(); ++i) csv << fmt17(mesh.nodes[i]) << "," << fmt17(s.u[i]) << "\n";
    emit(c.out, csv.str());
    json j{{"kernel", k.label()},
           {"path", s.path_used},
           {"h", mesh.h},
           {"interior_nodes", mesh.num_interior()},
           {"residual", num(s.residual)},
           {"residual_independent", num(s.residual_independent)},
           {"seminorm", num(s.seminorm)},
           {"discrete_dual_norm_sq", num(s.dual_norm_sq)},
           {"g_seminorm", num(s.g_seminorm)},
           {"energy_ratio", num(s.energy_ratio)},
           {"gamma_used", num(s.gamma_used)},
           {"scale", num(s.scale)},
           {"warnings", s.warnings}};
    emit_report(c.report, j);
    for (const auto& w : s.warnings) std::cerr << "nld: warning: " << w << "\n";
    return exit_ok;
}

int cmd_solve_parabolic(const RunConfig& c) {
    require_1d(c);
    if (c.g.datum == "shell_power" && c.g.exponent < 0.0)
        throw ConfigError("solve-parabolic samples g at nodes; problem.g.exponent must be nonnegative");
    Kernel k = c.kernel();
    Mesh mesh = c.mesh();
    SolveOptions so = c.solve_options();
    so.path = "coercive";
    std::vector<std::string> warnings;
    select_path(k, so, warnings);
    for (const auto& w : warnings) std::cerr << "nld: warning: " << w << "\n";
    Expression f(c.f), a(c.modulation);
    ParabolicProblem pp;
    pp.kernel = &k;
    pp.mesh = &mesh;
    pp.modulation = [a](double t, double x, double y) { return a(t, x, y); };
    pp.time_only = !a.uses('x') && !a.uses('y');
    pp.T = c.T;
    pp.dt = c.dt;
    pp.f = [f](double t, double x) { return f(t, x); };
    if (c.g.datum.empty()) {
        Expression g(c.g.expression);
        pp.g = [g](double t, double x) { return g(t, x); };
    } else {
        DataFn g = c.g.at(0.0);
        pp.g = [g](double, double x) { return g.fn(x); };
    }
    if (c.u0 == "stationary") {
        // the path check runs here, so the evolution inherits the elliptic preconditions
        pp.u0_nodal = run_solve(c, k, mesh, "").u;
    } else {
        Expression u0(c.u0);
        pp.u0 = [u0](double x) { return u0(0.0, x); };
    }
    ParabolicResult r = solve_parabolic(pp, c.assembly());
    std::ostringstream csv;
    csv << "t,x,u\n";
    for (std::size_t n = 0; n < r.t.size(); ++n)
        for (int i = 0; i < mesh.num_nodes(); ++i)
            csv << fmt17(r.t[n]) << "," << fmt17(mesh.nodes[i]) << "," << fmt17(r.u[n][i]) << "\n";
    emit(c.out, csv.str());
    json l2 = json::array();
    for (double v : r.l2_norm) l2.push_back(num(v));
    emit_report(c.report, json{{"kernel", k.label()},
                               {"steps", r.t.size() - 1},
                               {"energy_lhs", num(r.energy_lhs)},
                               {"energy_rhs", num(r.energy_rhs)},
                               {"energy_rel_error", num(r.energy_rel_error)},
                               {"trajectory_H", num(r.trajectory_H)},
                               {"data_norm", num(r.data_norm)},
                               {"l2_norm", l2},
                               {"time_only_modulation", pp.time_only}});
    return exit_ok;
}

std::vector<double> hs_or(const RunConfig& c, std::vector<double> def) {
    return c.study_hs.empty() ? def : c.study_hs;
}

int cmd_study(const RunConfig& c, const std::string& name) {
    std::ostringstream csv;
    json rep;
    rep["study"] = name;
    rep["seed"] = c.seed;
    int code = exit_ok;
    AssemblyOptions ao = c.assembly();

    if (name == "garding" || name == "poincare" || name == "sector" || name == "maxprin") {
        require_1d(c);
        Kernel k = c.kernel();
        std::vector<double> hs = hs_or(c, {c.h});
        if (name == "garding") csv << "h,gamma_star,lambda_min,cholesky_confirmed,certificate_worst_slack,certificate_passed\n";
        if (name == "poincare") csv << "h,C_P,lambda_min,certificate_worst_slack,certificate_passed\n";
        if (name == "sector") csv << "h,sector_K,bound,used,skipped\n";
        if (name == "maxprin") csv << "h,sup_u,scale,tol,holds,path\n";
        double A1 = 0.0, A2 = 0.0;
        if (name == "sector") {
            ConditionOptions co = c.conditions();
            KtildeResult kt = check_Ktilde(k, c.ktilde_id(), probes_for(k, co), co);
            if (kt.verdict == Verdict::holds) {
                A1 = kt.A1;
                A2 = kt.A2;
            }
            rep["ktilde"] = {{"id", kt.ktilde_id}, {"verdict", to_string(kt.verdict)}, {"A1", num(kt.A1)}, {"A2", num(kt.A2)}};
        }
        for (double h : hs) {
            Mesh m = build_mesh(c.omega, h, c.halo);
            if (name == "maxprin") {
                Expression f(c.f);
                SolveOptions so = c.solve_options();
                MaxPrinResult r = max_principle_probe(k, m, [f](double x) { return f(0.0, x); }, so, c.maxprin_tol);
                csv << fmt17(h) << "," << fmt17(r.sup_u) << "," << fmt17(r.scale) << "," << fmt17(r.tol) << ","
                    << b2s(r.holds) << "," << r.path << "\n";
                if (!r.holds) code = exit_verdict;
                continue;
            }
            DiscreteProblem p = assemble_problem(k, m, ao);
            if (name == "garding") {
                GardingResult g = estimate_garding(p);
                CertificateResult cr = garding_certificate(p, g.gamma_star, c.samples, c.seed);
                csv << fmt17(h) << "," << fmt17(g.gamma_star) << "," << fmt17(g.lambda_min) << ","
                    << b2s(g.cholesky_confirmed) << "," << fmt17(cr.worst_slack) << "," << b2s(cr.passed) << "\n";
                if (!cr.passed) code = exit_verdict;
            } else if (name == "poincare") {
                PoincareResult pr = estimate_poincare(p);
                CertificateResult cr;
                if (pr.positive) cr = poincare_certificate(p, pr.C_P, c.samples, c.seed);
                csv << fmt17(h) << "," << fmt17(pr.C_P) << "," << fmt17(pr.lambda_min) << ","
                    << fmt17(cr.worst_slack) << "," << b2s(pr.positive && cr.passed) << "\n";
                if (!(pr.positive && cr.passed)) code = exit_verdict;
            } else {
                SectorResult s = sector_constant(p, c.trials, c.seed, A1, A2);
                csv << fmt17(h) << "," << fmt17(s.sector_K) << "," << fmt17(s.bound) << "," << s.used << ","
                    << s.skipped << "\n";
            }
        }
    } else if (name == "boundary-regularity") {
        std::vector<double> betas = c.study_betas.empty() ? default_betas(c.study_alpha) : c.study_betas;
        std::vector<double> hs = hs_or(c, {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
        std::vector<SweepRow> rows = boundary_regularity_sweep(c.study_alpha, betas, hs, ao);
        csv << "beta,h,seminorm,growth_factor,classification\n";
        double thr = 0.5 * (c.study_alpha - 1.0);
        int wrong = 0;
        for (const SweepRow& r : rows) {
            csv << fmt17(r.beta) << "," << fmt17(r.h) << "," << fmt17(r.seminorm) << "," << fmt17(r.growth_factor)
                << "," << r.classification << "\n";
            if (r.h == hs.back() && (r.classification == "finite") != (r.beta > thr)) ++wrong;
        }
        rep["alpha"] = c.study_alpha;
        rep["threshold"] = thr;
        rep["rule"] = "divergent iff the last seminorm increment is at least the previous one";
        rep["misclassified"] = wrong;
    } else if (name == "convergence") {
        std::vector<double> hs = hs_or(c, {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
        ConvergenceResult r = convergence_study(c.study_alpha, hs, ao);
        csv << "h,shape_ratio,fit_error,self_error\n";
        for (const ConvergenceRow& row : r.rows)
            csv << fmt17(row.h) << "," << fmt17(row.shape_ratio) << "," << fmt17(row.fit_error) << ","
                << fmt17(row.self_error) << "\n";
        rep["alpha"] = r.alpha;
        rep["fit_rate"] = num(r.fit_rate);
        rep["self_rate"] = num(r.self_rate);
        rep["target_ratio"] = num(r.target_ratio);
    } else if (name == "lemmas") {
        InequalityCounts lc = verify_elementary_inequalities(c.trials, c.seed);
        csv << "check,trials,counterexamples\n";
        csv << "ratio_bound," << lc.trials << "," << lc.ratio_bound << "\n";
        csv << "ratio_bound_sym," << lc.trials << "," << lc.ratio_bound_sym << "\n";
        csv << "log_inequality," << lc.trials << "," << lc.log_ineq << "\n";
        csv << "convolution," << lc.trials << "," << lc.convolution << "\n";
        rep["witness"] = lc.witness;
        if (!lc.witness.empty()) {
            std::cerr << "nld: counterexample: " << lc.witness << "\n";
            code = exit_verdict;
        }
    } else {
        throw ConfigError("unknown study '" + name +
                          "'; expected garding, poincare, sector, maxprin, boundary-regularity, convergence or lemmas");
    }
    emit(c.out, csv.str());
    emit_report(c.report, rep);
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Nonlocal Dirichlet problems: kernel conditions, solves and studies", "nld"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--out", g.out, "output CSV (stdout when omitted)");
    app.add_option("--report", g.report, "JSON report");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* thr_opt = app.add_option("--threads", threads, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    app.add_option("--dump-matrices", g.dump_dir, "directory for A.csv, M.csv, S.csv");
    app.add_flag("--print-effective-config", g.print_config, "print the configuration with defaults and exit");

    auto* check = app.add_subcommand("check-kernel", "check the kernel conditions");
    auto* table = app.add_subcommand("table", "condition table of the catalog");
    auto* solve = app.add_subcommand("solve", "elliptic Dirichlet problem");
    auto* para = app.add_subcommand("solve-parabolic", "parabolic problem by implicit Euler");
    auto* study = app.add_subcommand("study", "quantitative studies");
    study->add_option("name", g.study,
                      "garding | poincare | sector | maxprin | boundary-regularity | convergence | lemmas")
        ->required();
    for (auto* s : {check, table, solve, para, study}) s->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    if (seed_opt->count()) g.seed = seed;
    if (thr_opt->count()) g.threads = threads;

    try {
        RunConfig c = load(g);
        if (g.print_config) {
            std::cout << effective_config(c);
            return exit_ok;
        }
        if (*table) return cmd_table(c);
        if (*check) {
            require_config(g, "check-kernel");
            return cmd_check_kernel(c);
        }
        if (*solve) {
            require_config(g, "solve");
            return cmd_solve(c, g);
        }
        if (*para) {
            require_config(g, "solve-parabolic");
            return cmd_solve_parabolic(c);
        }
        require_config(g, "study");
        return cmd_study(c, g.study);
    } catch (const ConfigError& e) {
        std::cerr << "nld: config error: " << e.what() << "\n";
        return exit_config;
    } catch (const PreconditionError& e) {
        std::cerr << "nld: precondition failed: " << e.what() << "\n";
        return exit_verdict;
    } catch (const NumericError& e) {
        std::cerr << "nld: numeric failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "nld: error: " << e.what() << "\n";
        return exit_numeric;
    }
}

}  // namespace nld
