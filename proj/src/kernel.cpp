#include "nld/kernel.hpp"

#include "nld/quadrature.hpp"

#include <algorithm>
#include <sstream>

namespace nld {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double th) {
    double a = std::fmod(th, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

double angle_of(const Point& z, int dim) {
    if (dim == 1) return z[0] > 0.0 ? 0.0 : kPi;
    return wrap_angle(std::atan2(z[1], z[0]));
}

}  // namespace

ConeSet ConeSet::full() { return from_arcs({{0.0, kTwoPi}}); }

ConeSet ConeSet::signs(bool plus, bool minus) {
    ConeSet c;
    if (plus) c.arcs.push_back({-0.5 * kPi, 0.5 * kPi});
    if (minus) c.arcs.push_back({0.5 * kPi, 1.5 * kPi});
    return c;
}

ConeSet ConeSet::from_arcs(std::vector<Arc> arcs) {
    ConeSet c;
    for (Arc a : arcs) {
        double len = a.hi - a.lo;
        if (!(len > 0.0) || len > kTwoPi + 1e-12)
            throw ConfigError("cone arc must satisfy 0 < hi - lo <= 2 pi");
        c.arcs.push_back(a);
    }
    return c;
}

bool ConeSet::contains_angle(double theta) const {
    for (const Arc& a : arcs) {
        double len = a.hi - a.lo;
        if (len >= kTwoPi) return true;
        double d = wrap_angle(theta - a.lo);
        if (d < len) return true;
    }
    return false;
}

bool ConeSet::contains(const Point& z, int dim) const { return contains_angle(angle_of(z, dim)); }

bool ConeSet::is_full() const {
    for (int k = 0; k < 720; ++k)
        if (!contains_angle(kTwoPi * (k + 0.5) / 720.0)) return false;
    return true;
}

ConeSet ConeSet::negated() const {
    ConeSet c;
    for (const Arc& a : arcs) c.arcs.push_back({a.lo + kPi, a.hi + kPi});
    return c;
}

bool ConeSet::symmetric() const {
    for (int k = 0; k < 720; ++k) {
        double th = kTwoPi * (k + 0.5) / 720.0;
        if (contains_angle(th) != contains_angle(th + kPi)) return false;
    }
    return true;
}

bool ConeSet::disjoint(const ConeSet& o) const {
    for (int k = 0; k < 720; ++k) {
        double th = kTwoPi * (k + 0.5) / 720.0;
        if (contains_angle(th) && o.contains_angle(th)) return false;
    }
    return true;
}

double ConeSet::measure(int dim) const {
    if (dim == 1) return (contains_angle(0.0) ? 1.0 : 0.0) + (contains_angle(kPi) ? 1.0 : 0.0);
    // union length on a fine grid refined at the arc edges
    std::vector<double> cuts{0.0, kTwoPi};
    for (double e : edges()) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (contains_angle(mid)) m += cuts[i + 1] - cuts[i];
    }
    return m;
}

std::vector<double> ConeSet::edges() const {
    std::vector<double> e;
    for (const Arc& a : arcs) {
        if (a.hi - a.lo >= kTwoPi) continue;
        e.push_back(wrap_angle(a.lo));
        e.push_back(wrap_angle(a.hi));
    }
    return e;
}

double Kernel::evaluate(const Point& x, const Point& y) const {
    if (x == y && !integrable) return kInf;
    return eval(x, y);
}

SymAnti Kernel::split(const Point& x, const Point& y) const {
    if (x == y) {
        double v = evaluate(x, y);
        return {v, 0.0};
    }
    if (profile) return split_z(x, sub(x, y));
    double kxy = eval(x, y), kyx = eval(y, x);
    return {0.5 * (kxy + kyx), 0.5 * (kxy - kyx)};
}

SymAnti Kernel::split_z(const Point& x, const Point& z) const {
    if (profile) {
        if (z[0] == 0.0 && z[1] == 0.0) return {evaluate(x, x), 0.0};
        Point mz{-z[0], -z[1]};
        double a = profile(z), b = profile(mz);
        return {0.5 * (a + b), 0.5 * (a - b)};
    }
    return split(x, sub(x, z));
}

SymAnti Kernel::ray_tail(double x, double y0, int dir) const {
    double r0 = std::abs(y0 - x);
    SymAnti out;
    auto numeric = [&](double ra, double rb) {
        if (!(rb > ra)) return;
        std::vector<double> br;
        for (double r : radial_breaks) br.push_back(r);
        for (double c : axis_breaks) br.push_back(std::abs(c - x));
        // geometric panels keep the power-law integrand well resolved
        double lo = ra;
        while (lo < rb) {
            double hi = std::min(rb, lo > 0.0 ? 2.0 * lo : rb);
            auto fs = [&](double r) { return split({x, 0.0}, {x + dir * r, 0.0}).sym; };
            auto fa = [&](double r) { return split({x, 0.0}, {x + dir * r, 0.0}).anti; };
            out.sym += integrate_split(fs, lo, hi, br, 16);
            out.anti += integrate_split(fa, lo, hi, br, 16);
            lo = hi;
        }
    };
    if (support_radius) {
        numeric(r0, *support_radius);
        return out;
    }
    if (!far_field) throw NumericError("kernel " + label() + " has neither support radius nor far-field form");
    FarField ff = far_field(x, dir);
    double start = r0;
    if (ff.r_far > r0) {
        numeric(r0, ff.r_far);
        start = ff.r_far;
    }
    for (const PowerTerm& t : ff.terms) {
        double m = std::pow(start, -t.exponent) / t.exponent;
        out.sym += t.sym * m;
        out.anti += t.anti * m;
    }
    return out;
}

std::string Kernel::label() const {
    std::string s = catalog_id;
    if (!variant.empty()) s += "[" + variant + "]";
    return s;
}

KernelDecomposition decompose(const Kernel& k) { return KernelDecomposition{&k}; }

double tail_mass(const Kernel& k, const Point& x, double R) {
    if (!(R > 0.0)) throw ConfigError("tail_mass: R must be positive");
    if (k.support_radius && *k.support_radius <= R) return 0.0;
    if (k.dim == 1) {
        if (!k.support_radius && !k.far_field) throw NumericError("tail_mass: unverifiable decay");
        return k.ray_tail(x[0], x[0] + R, +1).sym + k.ray_tail(x[0], x[0] - R, -1).sym;
    }
    AnnulusBreaks br;
    br.radial = k.radial_breaks;
    br.angular = k.angular_breaks;
    auto F = [&](const Point& z) { return k.split_z(x, z).sym; };
    SeriesRule rule;
    rule.rel_tol = 1e-10;
    rule.max_terms = 80;
    auto term = [&](int j) {
        double a = R * std::ldexp(1.0, j), b = 2.0 * a;
        if (k.support_radius) {
            if (a >= *k.support_radius) return std::nan("");
            b = std::min(b, *k.support_radius);
        }
        return integrate_annulus(F, k.dim, a, b, br, 20);
    };
    SeriesResult res = sum_shells(term, rule);
    if (res.status == SeriesStatus::diverged) return kInf;
    if (res.status == SeriesStatus::unresolved) throw NumericError("tail_mass: unverifiable decay");
    return res.value;
}

Kernel zero_kernel(int dim) {
    Kernel k;
    k.dim = dim;
    k.catalog_id = "zero";
    k.eval = [](const Point&, const Point&) { return 0.0; };
    k.profile = [](const Point&) { return 0.0; };
    k.support_radius = 1.0;
    k.params.dim = dim;
    return k;
}

Kernel comparison_kernel(const std::string& name, double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("comparison kernel: alpha must lie in (0,2)");
    Kernel k;
    k.dim = dim;
    k.params.dim = dim;
    k.params.alpha = alpha;
    k.integrable = false;
    k.singularity_order = alpha;
    double p = -dim - alpha;
    if (name == "frac") {
        k.catalog_id = "frac";
        k.profile = [=](const Point& z) { return std::pow(norm(z, dim), p); };
        k.far_field = [=](double, int) { return FarField{0.0, {{1.0, 0.0, alpha}}}; };
    } else if (name == "frac_ball") {
        k.catalog_id = "frac_ball";
        k.profile = [=](const Point& z) {
            double r = norm(z, dim);
            return r < 1.0 ? std::pow(r, p) : 0.0;
        };
        k.support_radius = 1.0;
        k.radial_breaks = {1.0};
    } else {
        throw ConfigError("unknown comparison kernel '" + name + "' (expected frac or frac_ball)");
    }
    auto h = k.profile;
    k.eval = [h](const Point& x, const Point& y) { return h(sub(x, y)); };
    return k;
}

Kernel scaled(const Kernel& k, double c) {
    Kernel s = k;
    auto ev = k.eval;
    s.eval = [ev, c](const Point& x, const Point& y) { return c * ev(x, y); };
    if (k.profile) {
        auto h = k.profile;
        s.profile = [h, c](const Point& z) { return c * h(z); };
    }
    if (k.far_field) {
        auto ff = k.far_field;
        s.far_field = [ff, c](double x, int dir) {
            FarField f = ff(x, dir);
            for (auto& t : f.terms) {
                t.sym *= c;
                t.anti *= c;
            }
            return f;
        };
    }
    return s;
}

Kernel modulated(const Kernel& k, std::function<double(const Point&, const Point&)> a) {
    if (!k.support_radius)
        throw ConfigError("space-dependent modulation needs a compactly supported kernel");
    Kernel s = k;
    auto ev = k.eval;
    s.eval = [ev, a](const Point& x, const Point& y) { return a(x, y) * ev(x, y); };
    s.profile = nullptr;
    s.far_field = nullptr;
    return s;
}

}  // namespace nld
