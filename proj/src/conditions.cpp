#include "nld/conditions.hpp"

#include "nld/assembly.hpp"
#include "nld/catalog.hpp"
#include "nld/mesh.hpp"
#include "nld/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <sstream>

namespace nld {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        default: return "indeterminate";
    }
}

namespace {

std::string fmt_point(const Point& x, int dim) {
    std::ostringstream ss;
    ss.precision(6);
    if (dim == 1)
        ss << x[0];
    else
        ss << "(" << x[0] << ", " << x[1] << ")";
    return ss.str();
}

AnnulusBreaks breaks_at(const Kernel& k, const Point& x) {
    AnnulusBreaks br;
    br.radial = k.radial_breaks;
    if (k.dim == 1)
        for (double c : k.axis_breaks) br.radial.push_back(std::abs(x[0] - c));
    br.angular = k.angular_breaks;
    return br;
}

// Sum of F over dyadic shells starting at R, toward 0 (outward = false) or infinity.
SeriesResult shells(const Kernel& k, const Point& x, const std::function<double(const Point&)>& F,
                    double R, bool outward, SeriesRule rule) {
    AnnulusBreaks br = breaks_at(k, x);
    auto term = [&](int j) {
        double a, b;
        if (outward) {
            a = R * std::ldexp(1.0, j);
            b = 2.0 * a;
            if (k.support_radius) {
                if (a >= *k.support_radius) return std::nan("");
                b = std::min(b, *k.support_radius);
            }
        } else {
            b = R * std::ldexp(1.0, -j);
            a = 0.5 * b;
        }
        return integrate_annulus(F, k.dim, a, b, br, 16);
    };
    if (!outward) {
        // below this radius y = x - z no longer resolves z in floating point
        double floor = 1e-11 * std::max(1.0, std::max(std::abs(x[0]), std::abs(x[1])));
        rule.max_terms = std::min(rule.max_terms, static_cast<int>(std::log2(R / floor)));
    }
    return sum_shells(term, rule);
}

// Sample of offsets z with |z| in [r_min, r_max].
std::vector<Point> offsets(int dim, double r_min, double r_max, int nr = 97) {
    std::vector<Point> out;
    std::vector<double> radii;
    for (int i = 0; i < nr; ++i) {
        double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (nr - 1));
        radii.push_back(r);
        if (i + 1 < nr) radii.push_back(r * 1.0137);
    }
    for (double r : radii) {
        if (dim == 1) {
            out.push_back({r, 0.0});
            out.push_back({-r, 0.0});
        } else {
            for (int a = 0; a < 72; ++a) {
                double th = 2.0 * kPi * (a + 0.013) / 72.0;
                out.push_back({r * std::cos(th), r * std::sin(th)});
            }
        }
    }
    return out;
}

double ratio_or_inf(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den <= 0.0) return kInf;
    return num / den;
}

Mesh evidence_mesh(double h) { return build_mesh({-1.0, 1.0}, h, 1.0); }

Eigen::MatrixXd full_gram(const Kernel& k, const Mesh& m, const ConditionOptions& opt) {
    AssemblyOptions ao;
    ao.quad = opt.quad;
    ao.threads = opt.threads;
    return full_seminorm_from_forms(assemble_forms(k, m, ao), m);
}

// Smallest eigenvalue of the symmetric pencil (A, B), B positive definite.
double min_pencil_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("generalized eigenvalue solver failed");
    return es.eigenvalues()(0);
}

Kernel witness(const Kernel& k, const std::string& id) {
    if (id == "k_s") {
        Kernel s = k;
        auto base = k;
        s.eval = [base](const Point& x, const Point& y) { return base.split(x, y).sym; };
        if (k.profile) {
            auto h = k.profile;
            s.profile = [h](const Point& z) { return 0.5 * (h(z) + h({-z[0], -z[1]})); };
        }
        if (k.far_field) {
            auto ff = k.far_field;
            s.far_field = [ff](double x, int dir) {
                FarField f = ff(x, dir);
                for (auto& t : f.terms) t.anti = 0.0;
                return f;
            };
        }
        s.catalog_id = "k_s";
        return s;
    }
    double a = k.singularity_order.value_or(k.params.alpha);
    return comparison_kernel(id, a, k.dim);
}

struct Reduction {
    Verdict verdict = Verdict::holds;
    double value = 0.0;
    Point worst{0.0, 0.0};
    std::string note;
};

// Per-probe series results combined: any divergence fails, any unresolved is indeterminate.
Reduction reduce(const std::vector<SeriesStatus>& st, const std::vector<double>& v,
                 const std::vector<Point>& probes, int dim, const std::string& what) {
    Reduction r;
    r.value = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < st.size(); ++i) {
        if (st[i] == SeriesStatus::diverged) {
            if (r.verdict != Verdict::fails) {
                r.verdict = Verdict::fails;
                r.worst = probes[i];
                r.note = what + " diverges at x = " + fmt_point(probes[i], dim);
            }
            r.value = kInf;
            continue;
        }
        if (st[i] == SeriesStatus::unresolved && r.verdict == Verdict::holds) {
            r.verdict = Verdict::indeterminate;
            r.worst = probes[i];
            r.note = what + " did not converge at x = " + fmt_point(probes[i], dim);
        }
        if (r.value != kInf && (first || v[i] > r.value)) {
            r.value = v[i];
            if (r.verdict == Verdict::holds) r.worst = probes[i];
            first = false;
        }
    }
    return r;
}

}  // namespace

std::vector<Point> default_probes(int dim, const ConditionOptions& opt) {
    std::vector<Point> p;
    int n = opt.probes_per_dim;
    auto coord = [&](int i) { return n == 1 ? 0.0 : -opt.box + 2.0 * opt.box * i / (n - 1); };
    if (dim == 1) {
        for (int i = 0; i < n; ++i) p.push_back({coord(i), 0.0});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p.push_back({coord(i), coord(j)});
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-opt.box, opt.box);
    for (int i = 0; i < opt.random_probes; ++i) {
        double a = u(rng), b = u(rng);
        p.push_back({a, dim == 1 ? 0.0 : b});
    }
    return p;
}

std::vector<Point> probes_for(const Kernel& k, const ConditionOptions& opt) {
    if (k.is_difference()) return {Point{0.0, 0.0}};
    return default_probes(k.dim, opt);
}

CheckResult check_L(const Kernel& k, const std::vector<Point>& probes) {
    std::vector<SeriesStatus> st(probes.size());
    std::vector<double> v(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Point x = probes[i];
        auto inner = [&](const Point& z) {
            double r = norm(z, k.dim);
            return r * r * k.split_z(x, z).sym;
        };
        auto outer = [&](const Point& z) { return k.split_z(x, z).sym; };
        SeriesRule rule;
        SeriesResult a = shells(k, x, inner, 1.0, false, rule);
        SeriesResult b;
        if (k.dim == 1 && (k.support_radius || k.far_field)) {
            b.value = k.ray_tail(x[0], x[0] + 1.0, +1).sym + k.ray_tail(x[0], x[0] - 1.0, -1).sym;
            b.status = std::isfinite(b.value) ? SeriesStatus::converged : SeriesStatus::diverged;
        } else {
            b = shells(k, x, outer, 1.0, true, rule);
        }
        SeriesStatus s = SeriesStatus::converged;
        if (a.status == SeriesStatus::diverged || b.status == SeriesStatus::diverged)
            s = SeriesStatus::diverged;
        else if (a.status != SeriesStatus::converged || b.status != SeriesStatus::converged)
            s = SeriesStatus::unresolved;
        st[i] = s;
        v[i] = a.value + b.value;
    }
    Reduction r = reduce(st, v, probes, k.dim, "integral of (1 ^ |z|^2) k_s");
    return {r.verdict, r.value, r.worst, r.note};
}

CheckResult check_K(const Kernel& k, const std::vector<Point>& probes) {
    std::vector<SeriesStatus> st(probes.size());
    std::vector<double> v(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Point x = probes[i];
        auto F = [&](const Point& z) {
            SymAnti s = k.split_z(x, z);
            if (s.anti == 0.0) return 0.0;
            if (s.sym <= 0.0) return kInf;
            return s.anti * s.anti / s.sym;
        };
        SeriesRule rule;
        SeriesResult a = shells(k, x, F, 1.0, false, rule);
        SeriesResult b = shells(k, x, F, 1.0, true, rule);
        if (a.status == SeriesStatus::diverged || b.status == SeriesStatus::diverged)
            st[i] = SeriesStatus::diverged;
        else if (a.status != SeriesStatus::converged || b.status != SeriesStatus::converged)
            st[i] = SeriesStatus::unresolved;
        else
            st[i] = SeriesStatus::converged;
        v[i] = a.value + b.value;
    }
    Reduction r = reduce(st, v, probes, k.dim, "integral of k_a^2 / k_s");
    return {r.verdict, r.value, r.worst, r.note};
}

CheckResult check_symmetry(const Kernel& k, const std::vector<Point>& probes) {
    CheckResult res;
    res.verdict = Verdict::holds;
    double rmax = k.support_radius ? 10.0 * *k.support_radius : 10.0;
    std::vector<Point> zs = offsets(k.dim, 1e-6, rmax);
    for (const Point& x : probes)
        for (const Point& z : zs) {
            SymAnti s = k.split_z(x, z);
            double t = ratio_or_inf(std::abs(s.anti), s.sym);
            if (t > res.value) {
                res.value = t;
                res.worst = x;
            }
        }
    if (res.value > 1e-14) {
        res.verdict = Verdict::fails;
        res.note = "k_a does not vanish at x = " + fmt_point(res.worst, k.dim);
    }
    return res;
}

KtildeResult check_Ktilde(const Kernel& k, const std::string& ktilde_id, const std::vector<Point>& probes,
                          const ConditionOptions& opt) {
    if (ktilde_id != "k_s" && ktilde_id != "frac" && ktilde_id != "frac_ball")
        throw ConfigError("unknown comparison kernel '" + ktilde_id + "' (expected k_s, frac or frac_ball)");
    KtildeResult res;
    res.ktilde_id = ktilde_id;
    Kernel kt = witness(k, ktilde_id);

    // (K~2): sup_x integral of k_a^2 / k~.
    std::vector<SeriesStatus> st(probes.size());
    std::vector<double> v(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Point x = probes[i];
        auto F = [&](const Point& z) {
            double a = k.split_z(x, z).anti;
            if (a == 0.0) return 0.0;
            double t = kt.split_z(x, z).sym;
            if (t <= 0.0) return kInf;
            return a * a / t;
        };
        SeriesRule rule;
        SeriesResult a = shells(k, x, F, 1.0, false, rule);
        SeriesResult b = shells(k, x, F, 1.0, true, rule);
        if (a.status == SeriesStatus::diverged || b.status == SeriesStatus::diverged)
            st[i] = SeriesStatus::diverged;
        else if (a.status != SeriesStatus::converged || b.status != SeriesStatus::converged)
            st[i] = SeriesStatus::unresolved;
        else
            st[i] = SeriesStatus::converged;
        v[i] = a.value + b.value;
    }
    Reduction r2 = reduce(st, v, probes, k.dim, "integral of k_a^2 / k~");
    res.A2 = r2.value;

    // (K~1): pointwise domination k~ <= c k_s, else the kernel's own comparison argument.
    bool certified = false;
    if (ktilde_id == "k_s") {
        res.A1 = 1.0;
        certified = true;
    } else {
        double c = 0.0;
        double rmax = k.support_radius ? 10.0 * *k.support_radius : 10.0;
        std::vector<Point> zs = offsets(k.dim, 1e-6, rmax);
        for (const Point& x : probes)
            for (const Point& z : zs) {
                double t = kt.split_z(x, z).sym;
                if (t == 0.0) continue;
                c = std::max(c, ratio_or_inf(t, k.split_z(x, z).sym));
            }
        if (std::isfinite(c)) {
            res.A1 = std::max(1.0, c);
            certified = true;
            res.note = "pointwise domination k~ <= A1 k_s";
        } else if (!k.comparison_argument.empty()) {
            res.A1 = 1.0;
            certified = true;
            res.note = "A1 by " + k.comparison_argument;
        }
    }

    if (k.dim == 1) {
        Mesh m = evidence_mesh(opt.evidence_h);
        Eigen::MatrixXd St = full_gram(kt, m, opt);
        Eigen::MatrixXd Ss = full_gram(witness(k, "k_s"), m, opt);
        std::mt19937_64 rng(opt.seed);
        std::normal_distribution<double> nd;
        double best = 0.0;
        for (int t = 0; t < opt.trials; ++t) {
            Eigen::VectorXd u(St.rows());
            for (int j = 0; j < u.size(); ++j) u[j] = nd(rng);
            double den = u.dot(Ss * u);
            if (den > 0.0) best = std::max(best, u.dot(St * u) / den);
        }
        res.A1_evidence = best;
    }

    if (r2.verdict == Verdict::fails) {
        res.verdict = Verdict::fails;
        res.note = r2.note;
    } else if (r2.verdict == Verdict::indeterminate) {
        res.verdict = Verdict::indeterminate;
        res.note = r2.note;
    } else if (!certified) {
        res.verdict = Verdict::indeterminate;
        res.note = "no certificate for k~ <= A1 k_s (Gram evidence only)";
    } else {
        res.verdict = Verdict::holds;
    }
    return res;
}

CancelResult check_C(const Kernel& k, const std::vector<Point>& probes, const ConditionOptions& opt) {
    CancelResult res;
    res.eps = opt.eps;
    if (res.eps.empty())
        for (int j = 1; j <= 12; ++j) res.eps.push_back(std::ldexp(1.0, -j));
    for (std::size_t i = 1; i < res.eps.size(); ++i)
        if (!(res.eps[i] < res.eps[i - 1])) throw ConfigError("eps sequence must be strictly decreasing");
    CheckResult Lr = check_L(k, probes);
    double mass = std::isfinite(Lr.value) ? Lr.value : 1.0;
    res.tol = opt.tol_C_rel * mass;

    const double e0 = res.eps.front();
    bool any_fail = false, any_open = false;
    bool first = true;
    for (const Point& x : probes) {
        auto Fa = [&](const Point& z) { return k.split_z(x, z).anti; };
        double outer;
        if (k.dim == 1 && (k.support_radius || k.far_field)) {
            outer = k.ray_tail(x[0], x[0] + e0, +1).anti + k.ray_tail(x[0], x[0] - e0, -1).anti;
        } else {
            SeriesRule rule;
            rule.abs_floor = res.tol;
            SeriesResult o = shells(k, x, Fa, e0, true, rule);
            if (o.status != SeriesStatus::converged) {
                any_open = true;
                continue;
            }
            outer = o.value;
        }
        AnnulusBreaks br = breaks_at(k, x);
        auto term = [&](int j) {
            if (j + 1 >= static_cast<int>(res.eps.size())) return std::nan("");
            return integrate_annulus(Fa, k.dim, res.eps[j + 1], res.eps[j], br, 16);
        };
        // Partial sums over the eps sequence, then a geometric extrapolation of the tail.
        double sum = outer, last = 0.0, prev = 0.0;
        int n = 0;
        for (int j = 0;; ++j) {
            double t = term(j);
            if (std::isnan(t)) break;
            prev = last;
            last = t;
            sum += t;
            ++n;
        }
        double limit = sum;
        bool settled = true;
        if (last != 0.0) {
            double rho = prev != 0.0 ? last / prev : 1.0;
            if (std::abs(rho) < 0.95) {
                double corr = last * rho / (1.0 - rho);
                limit += corr;
                settled = std::abs(corr) <= std::max(1e-3 * std::abs(limit), res.tol);
            } else {
                settled = false;
            }
        }
        if (!settled) {
            any_open = true;
            if (limit < -res.tol && !any_fail && n > 0 && last < 0.0 && prev < 0.0) {
                // monotonically decreasing partial sums below zero: liminf < 0
                any_fail = true;
                res.worst = x;
                res.cancel_inf = limit;
                first = false;
            }
            continue;
        }
        if (first || limit < res.cancel_inf) {
            res.cancel_inf = limit;
            res.worst = x;
            first = false;
        }
        if (limit < -res.tol) any_fail = true;
    }
    if (any_fail) {
        res.verdict = Verdict::fails;
        res.note = "cancellation integral negative at x = " + fmt_point(res.worst, k.dim);
    } else if (any_open) {
        res.verdict = Verdict::indeterminate;
        res.note = "epsilon sequence did not settle at some probe";
    } else {
        res.verdict = Verdict::holds;
    }
    return res;
}

EAlphaResult check_E_alpha(const Kernel& k, double alpha, const std::vector<Point>& probes,
                           const ConditionOptions& opt) {
    EAlphaResult res;
    double a = alpha > 0.0 ? alpha : k.singularity_order.value_or(1.0);
    if (alpha <= 0.0 && k.catalog_id.rfind("Ex14", 0) == 0) a = k.params.variable_order.alpha1;
    if (!(a > 0.0 && a < 2.0)) throw ConfigError("E_alpha: alpha must lie in (0,2)");
    res.alpha_ref = a;
    const int d = k.dim;
    const double norm_c = a * (2.0 - a);

    // Tier 1: pointwise lower bound near the diagonal.
    double rmax = std::min(k.support_radius.value_or(4.0), 4.0) * (1.0 - 1e-9);
    std::vector<Point> zs = offsets(d, 1e-6, rmax);
    double lam = kInf, lam_small = kInf, lam_mid = kInf;
    for (const Point& x : probes)
        for (const Point& z : zs) {
            double r = norm(z, d);
            double q = k.split_z(x, z).sym / (norm_c * std::pow(r, -d - a));
            lam = std::min(lam, q);
            if (r <= 1e-5) lam_small = std::min(lam_small, q);
            if (r >= 1e-4 && r <= 1e-3) lam_mid = std::min(lam_mid, q);
        }
    bool tier1 = lam > 0.0 && lam_small >= 0.5 * lam_mid;
    if (tier1) {
        res.lambda = lam;
        res.verdict = Verdict::holds;
        res.note = "pointwise k_s >= lambda alpha(2-alpha) |z|^(-d-alpha) for |z| <= " + std::to_string(rmax);
        return res;
    }
    if (!k.comparison_argument.empty()) {
        res.verdict = Verdict::holds;
        res.note = "no pointwise bound; holds by " + k.comparison_argument;
        return res;
    }
    if (d != 1) {
        if (k.integrable) {
            res.verdict = Verdict::fails;
            res.note = "integrable kernel: the k_s energy is bounded by the L2 norm";
        } else {
            res.note = "no pointwise bound and no Gram ladder in d = 2";
        }
        return res;
    }
    Kernel frac = comparison_kernel("frac", a, 1);
    for (double h : opt.ladder) {
        Mesh m = evidence_mesh(h);
        Eigen::MatrixXd Sk = full_gram(witness(k, "k_s"), m, opt);
        Eigen::MatrixXd Sf = norm_c * full_gram(frac, m, opt);
        res.lambda_form.push_back(min_pencil_eig(Sk, Sf));
    }
    const auto& lf = res.lambda_form;
    int decays = 0;
    for (std::size_t i = 1; i < lf.size(); ++i)
        if (lf[i] < 0.8 * lf[i - 1]) ++decays;
        else decays = 0;
    if (decays >= 2) {
        res.verdict = Verdict::fails;
        res.note = "Gram ratio decays under mesh refinement";
    } else {
        res.verdict = Verdict::indeterminate;
        res.note = "no pointwise bound; Gram ratio does not decay (evidence only)";
    }
    return res;
}

DResult check_D(const Kernel& k, const std::vector<Point>& probes, const ConditionOptions& opt) {
    DResult res;
    double rmax = k.support_radius ? 10.0 * *k.support_radius : 10.0;
    std::vector<Point> zs = offsets(k.dim, 1e-6, rmax);
    for (const Point& x : probes)
        for (const Point& z : zs) {
            SymAnti s = k.split_z(x, z);
            double t = ratio_or_inf(std::abs(s.anti), s.sym);
            if (t > res.Theta) {
                res.Theta = t;
                res.worst_x = x;
                res.worst_z = z;
            }
        }
    res.D = res.Theta > 0.0 ? 1.0 / res.Theta : kInf;
    res.verdict = res.Theta <= 1.0 - opt.tol_D ? Verdict::holds : Verdict::fails;
    return res;
}

PResult check_P(const Kernel& k, const std::vector<Point>& probes, const ConditionOptions& opt,
                const EAlphaResult& e) {
    PResult res;
    const int d = k.dim;
    if (k.integrable) {
        // Grid search over L = 1_A, A a symmetric annulus (and double sector in d = 2).
        double best = 0.0;
        for (int ih = -4; ih <= 2; ++ih) {
            double r_hi = std::ldexp(1.0, ih);
            for (double f : {0.0, 0.25, 0.5}) {
                double r_lo = f * r_hi;
                int nsec = d == 1 ? 1 : 17;
                for (int s = 0; s < nsec; ++s) {
                    bool full = d == 1 || s == 16;
                    double th0 = full ? 0.0 : s * kPi / 16.0, w = full ? kPi : kPi / 8.0;
                    double c0 = kInf;
                    for (const Point& x : probes) {
                        for (int ir = 0; ir < 24 && c0 > 0.0; ++ir) {
                            double r = r_lo + (r_hi - r_lo) * (ir + 0.5) / 24.0;
                            int na = d == 1 ? 2 : 16;
                            for (int ia = 0; ia < na; ++ia) {
                                Point z;
                                if (d == 1) {
                                    z = {ia == 0 ? r : -r, 0.0};
                                } else {
                                    double th = th0 + w * (ia % 8 + 0.5) / 8.0 + (ia >= 8 ? kPi : 0.0);
                                    z = {r * std::cos(th), r * std::sin(th)};
                                }
                                c0 = std::min(c0, k.split_z(x, z).sym);
                            }
                        }
                    }
                    double meas = (r_hi - r_lo) * (d == 1 ? 2.0 : (r_hi + r_lo) * w);
                    if (c0 > 0.0 && c0 * meas > best) {
                        best = c0 * meas;
                        res.c0 = c0;
                        std::ostringstream ss;
                        ss << r_lo << " < |z| < " << r_hi;
                        if (!full) ss << ", angle in [" << th0 << ", " << th0 + w << ") mod pi";
                        res.set = ss.str();
                    }
                }
            }
        }
        if (res.c0 > 0.0) {
            res.verdict = Verdict::holds;
            res.note = "k_s >= c0 1_A pointwise on probes";
        } else {
            res.verdict = Verdict::indeterminate;
            res.note = "no annulus or sector comparison found";
        }
    } else {
        res.verdict = e.verdict;
        res.note = "via (E_alpha): " + e.note;
    }
    if (d == 1) {
        Mesh m = evidence_mesh(opt.evidence_h);
        Eigen::MatrixXd S = full_gram(witness(k, "k_s"), m, opt);
        Eigen::MatrixXd M = assemble_mass(m);
        double lmin = min_pencil_eig(S, M);
        res.C_P = lmin > 0.0 ? 1.0 / lmin : kInf;
    }
    return res;
}

ConditionReport check_kernel(const Kernel& k, const std::string& ktilde_id, const ConditionOptions& opt) {
    ConditionReport rep;
    rep.kernel = k.label();
    rep.dim = k.dim;
    rep.options = opt;
    std::vector<Point> probes = probes_for(k, opt);
    rep.num_probes = static_cast<int>(probes.size());
    rep.L = check_L(k, probes);
    rep.K = check_K(k, probes);
    rep.symmetry = check_symmetry(k, probes);
    rep.Ktilde = check_Ktilde(k, ktilde_id, probes, opt);
    rep.C = check_C(k, probes, opt);
    rep.E_alpha = check_E_alpha(k, 0.0, probes, opt);
    rep.D = check_D(k, probes, opt);
    rep.P = check_P(k, probes, opt, rep.E_alpha);
    return rep;
}

std::vector<TableEntry> table_entries() {
    std::vector<TableEntry> out;
    auto add = [&](const std::string& id, const std::string& label, KernelParams p, const std::string& kt,
                   std::vector<std::string> q) { out.push_back({label, id, p, kt, std::move(q)}); };
    for (const std::string id : {"Ex1", "Ex2", "Ex3", "Ex4"}) add(id, id, default_params(id), "k_s", {});
    for (const std::string kind : {"constant", "modulated"}) {
        KernelParams p = default_params("Ex5");
        p.perturbation.kind = kind;
        add("Ex5", "Ex5:g=" + kind, p, "k_s", {"C", "symmetry"});
    }
    for (const std::string id : {"Ex6", "Ex7", "Ex8", "Ex9"}) add(id, id, default_params(id), "k_s", {});
    add("Ex10", "Ex10", default_params("Ex10"), "frac", {});
    for (const std::string kind : {"constant", "cone", "alternating"}) {
        KernelParams p = default_params("Ex11");
        p.perturbation.kind = kind;
        add("Ex11", "Ex11:g=" + kind, p, "frac_ball", {"C", "K", "symmetry"});
    }
    add("Ex12", "Ex12", default_params("Ex12"), "frac", {});
    for (const std::string id : {"Ex13", "Ex14", "Ex14t"}) add(id, id, default_params(id), "k_s", {});
    return out;
}

TableRow table_row(const TableEntry& e, const ConditionOptions& opt) {
    Kernel k = make_catalog_kernel(e.id, e.params);
    std::vector<Point> probes = probes_for(k, opt);
    TableRow row;
    row.example = e.example;
    row.question = e.question;
    CheckResult K = check_K(k, probes);
    KtildeResult Kt = check_Ktilde(k, e.ktilde, probes, opt);
    CancelResult C = check_C(k, probes, opt);
    CheckResult S = check_symmetry(k, probes);
    EAlphaResult E;
    if (!k.integrable) E = check_E_alpha(k, 0.0, probes, opt);
    PResult P = check_P(k, probes, opt, E);
    row.P = P.verdict;
    row.C = C.verdict;
    row.Ktilde = Kt.verdict;
    row.K = K.verdict;
    row.symmetry = S.verdict;
    auto note = [&](const std::string& c, Verdict v, const std::string& n) {
        if (v == Verdict::indeterminate) row.indeterminate_notes.push_back(e.example + " " + c + ": " + n);
    };
    note("P", P.verdict, P.note);
    note("C", C.verdict, C.note);
    note("Ktilde", Kt.verdict, Kt.note);
    note("K", K.verdict, K.note);
    note("symmetry", S.verdict, S.note);
    return row;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream ss;
    ss << "example,P,C,Ktilde,K,symmetry\n";
    for (const TableRow& r : rows) {
        auto cell = [&](const std::string& c, Verdict v) {
            if (v == Verdict::indeterminate) return std::string("!");
            std::string mark = v == Verdict::holds ? "✓" : "−";
            bool q = std::find(r.question.begin(), r.question.end(), c) != r.question.end();
            return q ? "?→" + mark : mark;
        };
        ss << r.example << ',' << cell("P", r.P) << ',' << cell("C", r.C) << ',' << cell("Ktilde", r.Ktilde)
           << ',' << cell("K", r.K) << ',' << cell("symmetry", r.symmetry) << '\n';
    }
    return ss.str();
}

}  // namespace nld
