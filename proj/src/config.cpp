#include "nld/config.hpp"

#include "nld/catalog.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace nld {

using nlohmann::json;

namespace {

// Walks one object, rejecting keys that were never read.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where("") + " must be an object");
    }

    bool has(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k);
    }
    const json& at(const std::string& k) { return j_.at(k); }

    double num(const std::string& k, double def) {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_number()) throw ConfigError(where(k) + " must be a number");
        return v.get<double>();
    }
    int integer(const std::string& k, int def) {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_number_integer()) throw ConfigError(where(k) + " must be an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& k, bool def) {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_boolean()) throw ConfigError(where(k) + " must be true or false");
        return v.get<bool>();
    }
    std::string str(const std::string& k, const std::string& def) {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_string()) throw ConfigError(where(k) + " must be a string");
        return v.get<std::string>();
    }
    std::vector<double> nums(const std::string& k, std::vector<double> def) {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_array()) throw ConfigError(where(k) + " must be an array of numbers");
        std::vector<double> r;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(where(k) + " must be an array of numbers");
            r.push_back(e.get<double>());
        }
        return r;
    }
    std::vector<std::string> strs(const std::string& k) {
        if (!has(k)) return {};
        const json& v = j_.at(k);
        if (!v.is_array()) throw ConfigError(where(k) + " must be an array of strings");
        std::vector<std::string> r;
        for (const auto& e : v) {
            if (!e.is_string()) throw ConfigError(where(k) + " must be an array of strings");
            r.push_back(e.get<std::string>());
        }
        return r;
    }
    Obj sub(const std::string& k) { return Obj(j_.at(k), where(k)); }

    std::string where(const std::string& k) const {
        if (k.empty()) return path_.empty() ? "config" : "'" + path_ + "'";
        return "'" + (path_.empty() ? k : path_ + "." + k) + "'";
    }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown key " + where(it.key()));
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

std::optional<ConeSet> read_cone(Obj& o, const std::string& k, const std::optional<ConeSet>& def) {
    if (!o.has(k)) return def;
    const json& v = o.at(k);
    std::vector<Arc> arcs;
    auto bad = [&] { return ConfigError(o.where(k) + " must be an array of [lo, hi] angle pairs"); };
    if (!v.is_array()) throw bad();
    for (const auto& a : v) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) throw bad();
        Arc arc{a[0].get<double>(), a[1].get<double>()};
        require(arc.hi > arc.lo && arc.hi - arc.lo <= 2 * kPi + 1e-12,
                o.where(k) + ": each arc needs 0 < hi - lo <= 2 pi");
        arcs.push_back(arc);
    }
    require(!arcs.empty(), o.where(k) + " must not be empty");
    return ConeSet::from_arcs(arcs);
}

json cone_json(const ConeSet& c) {
    json a = json::array();
    for (const auto& arc : c.arcs) a.push_back({arc.lo, arc.hi});
    return a;
}

void line_col(const std::string& text, std::size_t byte, int& line, int& col) {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

void check_expression(const std::string& text, const std::string& key, bool allow_t, bool allow_y) {
    Expression e(text);
    require(allow_t || !e.uses('t'), "'" + key + "' may not depend on t");
    require(allow_y || !e.uses('y'), "'" + key + "' may not depend on y");
}

}  // namespace

DataFn DataSpec::at(double t) const {
    if (datum == "shell_power") {
        double b = exponent;
        return DataFn{[b](double x) {
                          double r = std::abs(x);
                          return (r >= 1.0 && r <= 2.0) ? std::pow(r - 1.0, b) : 0.0;
                      },
                      b < 0.0,
                      {-2.0, -1.0, 1.0, 2.0}};
    }
    if (datum == "zero") return DataFn{[](double) { return 0.0; }, false, {}};
    if (datum == "one") return DataFn{[](double) { return 1.0; }, false, {}};
    Expression e(expression);
    return DataFn{[e, t](double x) { return e(t, x); }, false, {}};
}

std::string default_ktilde(const std::string& kernel_id) {
    std::string id = canonical_id(kernel_id);
    if (id == "Ex10" || id == "Ex12") return "frac";
    if (id == "Ex11") return "frac_ball";
    return "k_s";
}

Kernel RunConfig::kernel() const { return make_catalog_kernel(kernel_id, params); }

std::string RunConfig::ktilde_id() const { return ktilde.empty() ? default_ktilde(kernel_id) : ktilde; }

Mesh RunConfig::mesh() const { return build_mesh(omega, h, halo); }

AssemblyOptions RunConfig::assembly() const {
    AssemblyOptions a;
    a.quad = quad;
    a.threads = threads;
    return a;
}

ConditionOptions RunConfig::conditions() const {
    ConditionOptions c;
    c.seed = seed;
    c.threads = threads;
    c.tol_C_rel = tol_C_rel;
    c.tol_D = tol_D;
    c.quad = quad;
    return c;
}

SolveOptions RunConfig::solve_options() const {
    SolveOptions s;
    s.path = path;
    s.solver_tol = solver_tol;
    s.override_preconditions = override_preconditions;
    s.ktilde = ktilde_id();
    s.assembly = assembly();
    s.conditions = conditions();
    return s;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 0, col = 0;
        line_col(text, e.byte == 0 ? 0 : e.byte - 1, line, col);
        throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + e.what());
    }
    RunConfig c;
    Obj root(j, "");

    if (root.has("kernel")) {
        Obj k = root.sub("kernel");
        c.kernel_id = canonical_id(k.str("id", c.kernel_id));
        int dim = k.integer("dim", default_dim(c.kernel_id));
        require(dim == 1 || dim == 2, "'kernel.dim' must be 1 or 2");
        KernelParams p = default_params(c.kernel_id, dim);
        p.alpha = k.num("alpha", p.alpha);
        require(p.alpha > 0.0 && p.alpha < 2.0, "'kernel.alpha' must lie in (0,2), got " + std::to_string(p.alpha));
        p.beta = k.num("beta", p.beta);
        p.r_inner = k.num("r_inner", p.r_inner);
        p.r_outer = k.num("r_outer", p.r_outer);
        p.truncation_radius = k.num("truncation_radius", p.truncation_radius);
        p.cusp_b = k.num("cusp_b", p.cusp_b);
        p.alpha_prime = k.num("alpha_prime", p.alpha_prime);
        if (k.has("cones")) {
            Obj q = k.sub("cones");
            p.I = read_cone(q, "I", p.I);
            p.I1 = read_cone(q, "I1", p.I1);
            p.I2 = read_cone(q, "I2", p.I2);
            q.finish();
        }
        if (k.has("perturbation")) {
            Obj q = k.sub("perturbation");
            p.perturbation.kind = q.str("kind", p.perturbation.kind);
            p.perturbation.K = q.num("K", p.perturbation.K);
            p.perturbation.L = q.num("L", p.perturbation.L);
            q.finish();
        }
        if (k.has("variable_order")) {
            Obj q = k.sub("variable_order");
            VariableOrder& v = p.variable_order;
            v.alpha1 = q.num("alpha1", v.alpha1);
            v.alpha2 = q.num("alpha2", v.alpha2);
            v.center = q.num("center", v.center);
            v.width = q.num("width", v.width);
            v.c = q.num("c", v.c);
            q.finish();
        }
        c.params = p;
        c.ktilde = k.str("ktilde", "");
        require(c.ktilde.empty() || c.ktilde == "k_s" || c.ktilde == "frac" || c.ktilde == "frac_ball",
                "'kernel.ktilde' must be k_s, frac or frac_ball");
        k.finish();
    } else {
        c.params = default_params(c.kernel_id, 0);
    }

    if (root.has("mesh")) {
        Obj m = root.sub("mesh");
        std::vector<double> om = m.nums("omega", {c.omega.a, c.omega.b});
        require(om.size() == 2 && om[1] > om[0], "'mesh.omega' must be [a, b] with a < b");
        c.omega = {om[0], om[1]};
        c.h = m.num("h", c.h);
        c.halo = m.num("halo", c.halo);
        m.finish();
    }
    require(c.h > 0.0 && c.h <= 0.5 * (c.omega.b - c.omega.a), "'mesh.h' must lie in (0, |Omega|/2]");
    require(c.halo >= 0.0, "'mesh.halo' must be nonnegative");
    require(std::ceil((c.omega.b - c.omega.a) / c.h - 1e-9) - 1 <= 2048, "'mesh.h' gives more than 2048 interior nodes");

    if (root.has("quad")) {
        Obj q = root.sub("quad");
        c.quad.order = q.integer("order", c.quad.order);
        c.quad.singular_order = q.integer("singular_order", c.quad.singular_order);
        c.quad.grading = q.num("grading", c.quad.grading);
        c.quad.max_depth = q.integer("max_depth", c.quad.max_depth);
        q.finish();
    }
    require(c.quad.order >= 1 && c.quad.order <= 32, "'quad.order' must lie in [1, 32]");
    require(c.quad.singular_order >= 1 && c.quad.singular_order <= 32, "'quad.singular_order' must lie in [1, 32]");
    require(c.quad.grading > 0.0 && c.quad.grading < 1.0, "'quad.grading' must lie in (0,1)");
    require(c.quad.max_depth >= 1 && c.quad.max_depth <= 60, "'quad.max_depth' must lie in [1, 60]");

    if (root.has("problem")) {
        Obj p = root.sub("problem");
        c.f = p.str("f", c.f);
        if (p.has("g")) {
            const json& g = p.at("g");
            if (g.is_string()) {
                c.g.expression = g.get<std::string>();
            } else {
                Obj gd = p.sub("g");
                c.g.datum = gd.str("datum", "");
                c.g.exponent = gd.num("exponent", c.g.exponent);
                gd.finish();
                require(c.g.datum == "shell_power" || c.g.datum == "zero" || c.g.datum == "one",
                        "'problem.g.datum' must be shell_power, zero or one");
                require(c.g.exponent > -0.5, "'problem.g.exponent' must exceed -1/2 so that g is square integrable");
            }
        }
        c.path = p.str("path", c.path);
        require(c.path == "auto" || c.path == "coercive" || c.path == "fredholm",
                "'problem.path' must be auto, coercive or fredholm");
        c.override_preconditions = p.boolean("override_preconditions", c.override_preconditions);
        p.finish();
    }
    check_expression(c.f, "problem.f", true, false);
    if (c.g.datum.empty()) check_expression(c.g.expression, "problem.g", true, false);

    if (root.has("time")) {
        Obj t = root.sub("time");
        c.T = t.num("T", c.T);
        c.dt = t.num("dt", c.dt);
        c.modulation = t.str("modulation", c.modulation);
        c.u0 = t.str("u0", c.u0);
        t.finish();
    }
    require(c.T > 0.0 && c.dt > 0.0 && c.dt <= c.T, "'time.T' and 'time.dt' need 0 < dt <= T");
    check_expression(c.modulation, "time.modulation", true, true);
    if (c.u0 != "stationary") check_expression(c.u0, "time.u0", false, false);

    if (root.has("study")) {
        Obj s = root.sub("study");
        c.study_alpha = s.num("alpha", c.study_alpha);
        c.study_betas = s.nums("betas", c.study_betas);
        c.study_hs = s.nums("hs", c.study_hs);
        c.trials = s.integer("trials", c.trials);
        c.samples = s.integer("samples", c.samples);
        s.finish();
    }
    require(c.study_alpha > 0.0 && c.study_alpha < 2.0, "'study.alpha' must lie in (0,2)");
    for (double b : c.study_betas) require(b > -0.5, "'study.betas' entries must exceed -1/2");
    for (double hh : c.study_hs) require(hh > 0.0 && hh <= 0.5, "'study.hs' entries must lie in (0, 1/2]");
    require(c.trials >= 1 && c.samples >= 1, "'study.trials' and 'study.samples' must be positive");

    if (root.has("tolerances")) {
        Obj t = root.sub("tolerances");
        c.solver_tol = t.num("solver", c.solver_tol);
        c.maxprin_tol = t.num("maxprin", c.maxprin_tol);
        c.tol_C_rel = t.num("C_rel", c.tol_C_rel);
        c.tol_D = t.num("D", c.tol_D);
        t.finish();
    }
    require(c.solver_tol > 0.0 && c.maxprin_tol > 0.0 && c.tol_C_rel > 0.0 && c.tol_D > 0.0,
            "'tolerances' entries must be positive");

    if (root.has("seed")) {
        const json& s = root.at("seed");
        require(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0),
                "'seed' must be a nonnegative integer");
        c.seed = s.get<std::uint64_t>();
    }
    c.threads = root.integer("threads", c.threads);
    require(c.threads >= 0, "'threads' must be nonnegative (0 = auto)");
    c.expected_fail = root.strs("expected_fail");
    static const std::vector<std::string> names{"L", "K", "Ktilde", "C", "E_alpha", "D", "P"};
    for (const auto& n : c.expected_fail)
        require(std::find(names.begin(), names.end(), n) != names.end(),
                "'expected_fail' entry '" + n + "' is not one of L, K, Ktilde, C, E_alpha, D, P");
    if (root.has("output")) {
        Obj o = root.sub("output");
        c.out = o.str("out", c.out);
        c.report = o.str("report", c.report);
        o.finish();
    }
    root.finish();

    c.kernel();   // range checks of the catalog constructor
    return c;
}

std::string effective_config(const RunConfig& c) {
    const KernelParams& p = c.params;
    json k;
    k["id"] = c.kernel_id;
    k["dim"] = p.dim;
    k["alpha"] = p.alpha;
    k["beta"] = p.beta;
    k["r_inner"] = p.r_inner;
    k["r_outer"] = p.r_outer;
    k["truncation_radius"] = p.truncation_radius;
    k["cusp_b"] = p.cusp_b;
    k["alpha_prime"] = p.alpha_prime;
    json cones = json::object();
    if (p.I) cones["I"] = cone_json(*p.I);
    if (p.I1) cones["I1"] = cone_json(*p.I1);
    if (p.I2) cones["I2"] = cone_json(*p.I2);
    k["cones"] = cones;
    k["perturbation"] = {{"kind", p.perturbation.kind}, {"K", p.perturbation.K}, {"L", p.perturbation.L}};
    const VariableOrder& v = p.variable_order;
    k["variable_order"] = {
        {"alpha1", v.alpha1}, {"alpha2", v.alpha2}, {"center", v.center}, {"width", v.width}, {"c", v.c}};
    k["ktilde"] = c.ktilde_id();

    json g;
    if (c.g.datum.empty())
        g = c.g.expression;
    else
        g = {{"datum", c.g.datum}, {"exponent", c.g.exponent}};

    json j;
    j["kernel"] = k;
    j["mesh"] = {{"omega", {c.omega.a, c.omega.b}}, {"h", c.h}, {"halo", c.halo}};
    j["quad"] = {{"order", c.quad.order},
                 {"singular_order", c.quad.singular_order},
                 {"grading", c.quad.grading},
                 {"max_depth", c.quad.max_depth}};
    j["problem"] = {{"f", c.f}, {"g", g}, {"path", c.path}, {"override_preconditions", c.override_preconditions}};
    j["time"] = {{"T", c.T}, {"dt", c.dt}, {"modulation", c.modulation}, {"u0", c.u0}};
    j["study"] = {{"alpha", c.study_alpha},
                  {"betas", c.study_betas},
                  {"hs", c.study_hs},
                  {"trials", c.trials},
                  {"samples", c.samples}};
    j["tolerances"] = {
        {"solver", c.solver_tol}, {"maxprin", c.maxprin_tol}, {"C_rel", c.tol_C_rel}, {"D", c.tol_D}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["expected_fail"] = c.expected_fail;
    j["output"] = {{"out", c.out}, {"report", c.report}};
    return j.dump(2) + "\n";
}

}  // namespace nld
