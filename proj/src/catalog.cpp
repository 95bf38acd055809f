#include "nld/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace nld {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void require_alpha(double a, const std::string& id) {
    require(a > 0.0 && a < 2.0, id + ": alpha must lie in (0,2), got " + std::to_string(a));
}

void require_dim(int dim, std::initializer_list<int> allowed, const std::string& id) {
    for (int d : allowed)
        if (d == dim) return;
    throw ConfigError(id + ": dimension " + std::to_string(dim) + " is not supported");
}

// Half space {z_d > 0}.
bool upper(const Point& z, int dim) { return dim == 1 ? z[0] > 0.0 : z[1] > 0.0; }

std::function<std::vector<double>(double)> cone_breaks(std::vector<ConeSet> cones) {
    std::vector<double> e;
    for (const auto& c : cones)
        for (double v : c.edges()) e.push_back(v);
    return [e](double) { return e; };
}

// Installs eval from profile so both stay consistent.
void finish_difference(Kernel& k) {
    auto h = k.profile;
    k.eval = [h](const Point& x, const Point& y) { return h(sub(x, y)); };
}

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

// Boundary angle of the cusp region in the first quadrant at radius r:
// r cos(th) = (r sin(th))^b.
double cusp_angle(double r, double b) {
    double lo = 0.0, hi = 0.5 * kPi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double g = r * std::cos(mid) - std::pow(r * std::sin(mid), b);
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void check_nonnegative(const Kernel& k) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), ur(1e-4, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double x = ux(rng);
        double r = (i % 2 == 0) ? ur(rng) : 1.0 - 1e-9 * (i + 1);
        double y = x + ((i % 4 < 2) ? r : -r);
        double v = k.eval(point1(x), point1(y));
        if (v < 0.0)
            throw ConfigError(k.catalog_id + ": parameters make k negative at (" + std::to_string(x) +
                              ", " + std::to_string(y) +
                              "); Ex11 requires a nonnegative kernel");
    }
}

}  // namespace

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids{"Ex1", "Ex2",  "Ex3",  "Ex4",  "Ex5",  "Ex6",
                                              "Ex7", "Ex8",  "Ex9",  "Ex10", "Ex11", "Ex12",
                                              "Ex13", "Ex14", "Ex14t", "intro"};
    return ids;
}

std::string canonical_id(const std::string& id) {
    for (const auto& c : catalog_ids())
        if (lower(c) == lower(id)) return c;
    throw ConfigError("unknown kernel id '" + id + "'");
}

int default_dim(const std::string& id) {
    std::string c = canonical_id(id);
    if (c == "Ex4" || c == "Ex9" || c == "Ex12" || c == "Ex13") return 2;
    return 1;
}

KernelParams default_params(const std::string& raw, int dim) {
    std::string id = canonical_id(raw);
    KernelParams p;
    p.dim = dim == 0 ? default_dim(id) : dim;
    const double q = 0.25 * kPi;
    ConeSet double_cone = ConeSet::from_arcs({{-q, q}, {3 * q, 5 * q}});
    if (id == "Ex4") p.I = p.dim == 1 ? ConeSet::signs(true, false) : ConeSet::from_arcs({{0.0, 2 * q}});
    if (id == "Ex9") p.I = p.dim == 1 ? ConeSet::full() : double_cone;
    if (id == "Ex12" || id == "intro") {
        if (p.dim == 1 || id == "intro") {
            p.I1 = ConeSet::full();
            p.I2 = p.dim == 1 ? ConeSet::signs(true, false) : ConeSet::from_arcs({{kPi / 3, 2 * kPi / 3}});
        } else {
            p.I1 = double_cone;
            p.I2 = ConeSet::from_arcs({{kPi / 3, 2 * kPi / 3}});
        }
    }
    if (id == "Ex11") {
        p.perturbation.kind = "constant";
        p.perturbation.L = 1.0;
        p.perturbation.K = 0.5;
    }
    if (id == "Ex13") p.alpha = 1.0;
    return p;
}

double variable_alpha(const VariableOrder& v, double x) {
    double s = smoothstep((x - v.center) / v.width + 0.5);
    return v.alpha1 + (v.alpha2 - v.alpha1) * s;
}

double variable_b(const VariableOrder& v, double x) {
    return 1.0 + v.c * (variable_alpha(v, x) - v.alpha1);
}

Kernel make_catalog_kernel(const std::string& raw, KernelParams p) {
    const std::string id = canonical_id(raw);
    Kernel k;
    k.catalog_id = id;
    k.dim = p.dim;
    const int d = p.dim;
    require(d == 1 || d == 2, id + ": dim must be 1 or 2");

    if (id == "Ex1") {
        k.profile = [d](const Point& z) { return norm(z, d) < 1.0 ? 1.0 : 0.0; };
        k.support_radius = 1.0;
        k.radial_breaks = {1.0};
    } else if (id == "Ex2") {
        require(p.r_inner >= 0.0 && p.r_outer > p.r_inner, "Ex2: need 0 <= r < R");
        double r0 = p.r_inner, r1 = p.r_outer;
        k.profile = [=](const Point& z) {
            double r = norm(z, d);
            return (r >= r0 && r < r1) ? 1.0 : 0.0;
        };
        k.support_radius = r1;
        k.radial_breaks = {r0, r1};
    } else if (id == "Ex3") {
        k.profile = [d](const Point& z) { return (norm(z, d) < 1.0 && upper(z, d)) ? 1.0 : 0.0; };
        k.support_radius = 1.0;
        k.radial_breaks = {1.0};
        if (d == 2) k.angular_breaks = [](double) { return std::vector<double>{0.0, kPi}; };
    } else if (id == "Ex4") {
        if (!p.I) p.I = default_params(id, d).I;
        require(!p.I->empty(), "Ex4: cone set I must be nonempty");
        ConeSet I = *p.I;
        k.profile = [=](const Point& z) { return (norm(z, d) < 1.0 && I.contains(z, d)) ? 1.0 : 0.0; };
        k.support_radius = 1.0;
        k.radial_breaks = {1.0};
        if (d == 2) k.angular_breaks = cone_breaks({I});
    } else if (id == "Ex5") {
        double L = p.perturbation.L;
        require(L > 0.0, "Ex5: g must be bounded below by a positive constant (L > 0)");
        const std::string kind = p.perturbation.kind;
        k.variant = "g=" + kind;
        if (kind == "constant") {
            k.profile = [=](const Point& z) { return norm(z, d) < 1.0 ? L : 0.0; };
        } else if (kind == "modulated") {
            k.eval = [=](const Point& x, const Point& y) {
                return norm(sub(x, y), d) < 1.0 ? L * (1.0 + 0.5 * std::cos(kPi * x[0])) : 0.0;
            };
        } else {
            throw ConfigError("Ex5: perturbation kind must be constant or modulated");
        }
        k.support_radius = 1.0;
        k.radial_breaks = {1.0};
    } else if (id == "Ex6") {
        require_dim(d, {1}, id);
        k.eval = [](const Point& xp, const Point& yp) {
            double x = xp[0], y = yp[0];
            bool box = x >= -1.0 && x <= 0.0 && y >= 0.0 && y <= 1.0;
            bool strip = x <= y && y <= x + 1.0;
            return (box || strip) ? 2.0 : 0.0;
        };
        k.support_radius = 2.0;
        k.radial_breaks = {1.0, 2.0};
        k.axis_breaks = {-1.0, 0.0, 1.0};
    } else if (id == "Ex7") {
        require_dim(d, {1}, id);
        auto g = [](double s, double t) {
            if (!(s > -1.0 && s < 1.0 && t > -1.0 && t < 1.0)) return 0.0;
            double v = s * t;
            return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
        };
        k.eval = [g](const Point& xp, const Point& yp) {
            double x = xp[0], y = yp[0];
            double base = std::abs(x - y) < 4.0 ? 2.0 : 0.0;
            double ka = x < y ? g(x - 1.0, y - 3.0) : -g(y - 1.0, x - 3.0);
            return base + ka;
        };
        k.support_radius = 4.0;
        k.radial_breaks = {4.0};
        k.axis_breaks = {0.0, 1.0, 2.0, 3.0, 4.0};
    } else if (id == "Ex8") {
        require_alpha(p.alpha, id);
        double e = -d - p.alpha;
        k.profile = [=](const Point& z) { return std::pow(norm(z, d), e); };
        k.integrable = false;
        k.singularity_order = p.alpha;
        double a = p.alpha;
        k.far_field = [a](double, int) { return FarField{0.0, {{1.0, 0.0, a}}}; };
    } else if (id == "Ex9") {
        require_alpha(p.alpha, id);
        if (!p.I) p.I = default_params(id, d).I;
        require(!p.I->empty() && p.I->symmetric(), "Ex9: cone set must be nonempty with I = -I");
        ConeSet I = *p.I;
        double e = -d - p.alpha;
        k.profile = [=](const Point& z) { return I.contains(z, d) ? std::pow(norm(z, d), e) : 0.0; };
        k.integrable = false;
        k.singularity_order = p.alpha;
        double a = p.alpha;
        k.far_field = [a](double, int) { return FarField{0.0, {{1.0, 0.0, a}}}; };
        if (d == 2) {
            k.angular_breaks = cone_breaks({I});
            if (!I.is_full()) k.comparison_argument = "cone comparability";
        }
    } else if (id == "Ex10") {
        require_alpha(p.alpha, id);
        double e = -d - p.alpha;
        k.profile = [=](const Point& z) { return upper(z, d) ? std::pow(norm(z, d), e) : 0.0; };
        k.integrable = false;
        k.singularity_order = p.alpha;
        double a = p.alpha;
        k.far_field = [a](double, int dir) { return FarField{0.0, {{0.5, -0.5 * dir, a}}}; };
        if (d == 2) k.angular_breaks = [](double) { return std::vector<double>{0.0, kPi}; };
    } else if (id == "Ex11") {
        require_alpha(p.alpha, id);
        require(p.beta > 0.0 && p.beta < 0.5 * p.alpha,
                "Ex11: need 0 < beta < alpha/2 (got beta=" + std::to_string(p.beta) +
                    ", alpha=" + std::to_string(p.alpha) + ")");
        const std::string kind = p.perturbation.kind;
        double K = p.perturbation.K, L = p.perturbation.L;
        require(K >= 0.0 && L >= 0.0, "Ex11: bounds K, L must be nonnegative");
        double ea = -d - p.alpha, eb = -d - p.beta;
        k.variant = "g=" + kind;
        if (kind == "constant") {
            k.profile = [=](const Point& z) {
                double r = norm(z, d);
                return std::pow(r, ea) + (r < 1.0 ? L * std::pow(r, eb) : 0.0);
            };
        } else if (kind == "cone") {
            k.profile = [=](const Point& z) {
                double r = norm(z, d);
                return std::pow(r, ea) + ((r < 1.0 && upper(z, d)) ? L * std::pow(r, eb) : 0.0);
            };
            if (d == 2) k.angular_breaks = [](double) { return std::vector<double>{0.0, kPi}; };
        } else if (kind == "alternating") {
            k.eval = [=](const Point& x, const Point& y) {
                double r = norm(sub(x, y), d);
                double g = K * std::cos(kPi * x[0]);
                return std::pow(r, ea) + (r < 1.0 ? g * std::pow(r, eb) : 0.0);
            };
        } else {
            throw ConfigError("Ex11: perturbation kind must be constant, cone or alternating");
        }
        k.integrable = false;
        k.singularity_order = p.alpha;
        k.radial_breaks = {1.0};
        double a = p.alpha;
        k.far_field = [a](double, int) { return FarField{1.0, {{1.0, 0.0, a}}}; };
    } else if (id == "Ex12" || id == "intro") {
        require_alpha(p.alpha, id);
        require(p.beta > 0.0 && p.beta < 0.5 * p.alpha, id + ": need 0 < beta < alpha/2");
        KernelParams dp = default_params(id, d);
        if (!p.I1) p.I1 = dp.I1;
        if (!p.I2) p.I2 = dp.I2;
        ConeSet I1 = *p.I1, I2 = *p.I2;
        require(!I1.empty() && I1.symmetric(), id + ": I1 must be nonempty with I1 = -I1");
        require(!I2.empty(), id + ": I2 must be nonempty");
        require(!I2.symmetric(), id + ": I2 must satisfy |-I2 \\ I2| > 0");
        if (!I1.is_full()) require(I1.disjoint(I2), id + ": I1 and I2 must be disjoint");
        double ea = -d - p.alpha, eb = -d - p.beta;
        k.profile = [=](const Point& z) {
            double r = norm(z, d);
            double v = I1.contains(z, d) ? std::pow(r, ea) : 0.0;
            if (r < 1.0 && I2.contains(z, d)) v += std::pow(r, eb);
            return v;
        };
        k.integrable = false;
        k.singularity_order = p.alpha;
        k.radial_breaks = {1.0};
        if (d == 1) {
            require(I1.is_full(), id + ": in d = 1 the symmetric cone I1 is the full sphere");
            double a = p.alpha;
            k.far_field = [a](double, int) { return FarField{1.0, {{1.0, 0.0, a}}}; };
        } else {
            k.angular_breaks = cone_breaks({I1, I2});
            if (!I1.is_full()) k.comparison_argument = "cone comparability";
        }
    } else if (id == "Ex13") {
        require_dim(d, {2}, id);
        double b = p.cusp_b, ap = p.alpha_prime;
        require(b > 0.0 && b < 1.0, "Ex13: need 0 < b < 1");
        require(ap > 0.0 && ap < 1.0 + 1.0 / b, "Ex13: need 0 < alpha' < 1 + 1/b");
        double eff = ap - (1.0 / b - 1.0);
        require(eff > 0.0 && eff < 2.0, "Ex13: effective order alpha' - (1/b - 1) must lie in (0,2)");
        p.alpha = eff;
        double e = -2.0 - ap;
        k.profile = [=](const Point& z) {
            double r = norm(z, 2);
            if (!(r < 1.0)) return 0.0;
            double a1 = std::abs(z[0]), a2 = std::abs(z[1]);
            bool in = a1 >= std::pow(a2, b) || a2 >= std::pow(a1, b);
            return in ? std::pow(r, e) : 0.0;
        };
        k.integrable = false;
        k.singularity_order = eff;
        k.support_radius = 1.0;
        k.radial_breaks = {1.0};
        k.angular_breaks = [b](double r) {
            if (r >= 1.0) return std::vector<double>{};
            double th = cusp_angle(r, b);
            std::vector<double> v;
            for (int q = 0; q < 4; ++q) {
                v.push_back(q * 0.5 * kPi + th);
                v.push_back(q * 0.5 * kPi + 0.5 * kPi - th);
            }
            return v;
        };
        k.comparison_argument = "cusp comparability";
    } else if (id == "Ex14" || id == "Ex14t") {
        require_dim(d, {1}, id);
        VariableOrder v = p.variable_order;
        require(v.alpha1 > 0.0 && v.alpha1 <= v.alpha2 && v.alpha2 < 2.0,
                id + ": need 0 < alpha1 <= alpha2 < 2");
        require(v.width > 0.0 && v.c >= 0.0, id + ": need width > 0 and c >= 0");
        bool trunc = id == "Ex14t";
        double R = p.truncation_radius;
        if (trunc) require(R > 0.0, "Ex14t: truncation radius must be positive");
        k.eval = [=](const Point& xp, const Point& yp) {
            double x = xp[0], r = std::abs(xp[0] - yp[0]);
            if (trunc && !(r < R)) return 0.0;
            return variable_b(v, x) * std::pow(r, -1.0 - variable_alpha(v, x));
        };
        k.integrable = false;
        k.singularity_order = v.alpha2;
        k.axis_breaks = {v.center - 0.5 * v.width, v.center + 0.5 * v.width};
        if (trunc) {
            k.support_radius = R;
            k.radial_breaks = {R};
        } else {
            k.far_field = [v](double x, int dir) {
                double edge = v.center + dir * 0.5 * v.width;
                FarField f;
                f.r_far = std::max(0.0, dir * (edge - x));
                double ax = variable_alpha(v, x), bx = variable_b(v, x);
                double ae = variable_alpha(v, edge), be = variable_b(v, edge);
                f.terms.push_back({0.5 * bx, 0.5 * bx, ax});
                f.terms.push_back({0.5 * be, -0.5 * be, ae});
                return f;
            };
        }
    }

    if (k.profile) finish_difference(k);
    k.params = p;
    if (id == "Ex11") check_nonnegative(k);
    return k;
}

}  // namespace nld
