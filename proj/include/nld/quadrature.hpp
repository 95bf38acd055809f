#pragma once

#include "nld/common.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace nld {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Cached Gauss-Legendre rule with n points (1 <= n <= 64).
const GaussRule& gauss_legendre(int n);

struct QuadConfig {
    int order = 5;             // tensor / x-direction Gauss points
    int singular_order = 16;   // points per graded panel next to the diagonal
    double grading = 0.15;     // ratio between consecutive graded panels
    int max_depth = 12;        // number of graded panels
};

// Rule used for independent re-evaluation (residual checks).
QuadConfig refined(const QuadConfig& q);

double integrate(const std::function<double(double)>& f, double a, double b, int n);

// Composite Gauss over [a,b], split at every break strictly inside.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& breaks, int n);

// Sorted unique values of v restricted to the open interval (a,b), with a and b added.
std::vector<double> partition(double a, double b, const std::vector<double>& v);

// Integral of F over the annulus r_lo < |z| < r_hi in dimension dim. The
// integrand is always evaluated in antipodal pairs F(z) + F(-z) so that odd
// integrands cancel exactly.
struct AnnulusBreaks {
    std::vector<double> radial;
    std::function<std::vector<double>(double)> angular;   // d = 2, angles of possible jumps at radius r
};
double integrate_annulus(const std::function<double(const Point&)>& F, int dim, double r_lo,
                         double r_hi, const AnnulusBreaks& br, int n = 16);

// Sums a series of dyadic shell contributions J_0, J_1, ... The limit is
// estimated by Wynn's epsilon algorithm on the partial sums, which is exact for
// geometric tails and handles power-times-log tails well. Used both toward the
// diagonal and toward infinity.
enum class SeriesStatus { converged, diverged, unresolved };

struct SeriesRule {
    double rel_tol = 1e-6;      // successive extrapolated sums must agree to this
    double div_ratio = 0.999;   // J_k / J_{k-1} at or above this counts as non-decay
    int div_run = 3;            // consecutive non-decaying ratios meaning divergence
    int div_start = 8;          // ratios of earlier terms are not counted (log factors)
    int min_terms = 4;
    int max_terms = 64;
    double abs_floor = 0.0;     // absolute tolerance floor for values near zero
};

struct SeriesResult {
    double value = 0.0;
    SeriesStatus status = SeriesStatus::unresolved;
    int terms = 0;
    double last_ratio = 0.0;
    std::vector<double> partial;   // extrapolated sum after each term
};

// Wynn epsilon estimate from partial sums, using at most the last `window` entries.
double wynn_estimate(const std::vector<double>& sums, int window = 9);

// term(k) returns J_k, or NaN when the series has ended (e.g. past a support radius).
SeriesResult sum_shells(const std::function<double(int)>& term, const SeriesRule& rule);

// ---------------------------------------------------------------------------
// Element-pair quadrature.
//
// Integrates a vector-valued f(x, y, t, out) with t = y - x over the rectangle
// [x0,x1] x [y0,y1]. Pairs away from the diagonal and from kernel jumps use a
// tensor rule. Otherwise the integral is written as an outer integral over t
// (split at the corner values of t, at kernel jumps and at 0) and an inner
// Gauss rule in x. For singular kernels the t-panels adjacent to 0 are
// geometrically graded and the remainder is extrapolated from the last two
// panels.

struct PairBreaks {
    bool singular = false;
    std::vector<double> t;       // jumps of the kernel in t = y - x (0 is always added)
    std::vector<double> axis;    // absolute coordinates where k jumps in x or in y
    double support = kInf;       // k vanishes for |t| > support
};

struct PairStats {
    bool tensor = false;
    double worst_tail_ratio = 0.0;
};

namespace detail {

template <class Fn>
void accumulate_x(double t, double wt, double x0, double x1, double y0, double y1,
                  const PairBreaks& br, const GaussRule& gx, int m, Fn& f, double* acc,
                  double* tmp) {
    double lo = std::max(x0, y0 - t);
    double hi = std::min(x1, y1 - t);
    if (!(hi > lo)) return;
    double cuts[64];
    int nc = 0;
    cuts[nc++] = lo;
    for (double c : br.axis) {
        if (c > lo && c < hi && nc < 62) cuts[nc++] = c;
        double cy = c - t;
        if (cy > lo && cy < hi && nc < 62) cuts[nc++] = cy;
    }
    std::sort(cuts + 1, cuts + nc);
    cuts[nc++] = hi;
    for (int s = 0; s + 1 < nc; ++s) {
        double a = cuts[s], b = cuts[s + 1];
        if (!(b > a)) continue;
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < gx.nodes.size(); ++k) {
            double x = mid + half * gx.nodes[k];
            f(x, x + t, t, tmp);
            double w = wt * half * gx.weights[k];
            for (int c = 0; c < m; ++c) acc[c] += w * tmp[c];
        }
    }
}

}  // namespace detail

template <class Fn>
PairStats pair_quadrature(double x0, double x1, double y0, double y1, const PairBreaks& br,
                          const QuadConfig& qc, int m, Fn&& f, double* result,
                          double cutoff = 0.0) {
    PairStats st;
    for (int c = 0; c < m; ++c) result[c] = 0.0;
    const double tmin = y0 - x1, tmax = y1 - x0;
    if (tmin >= br.support || tmax <= -br.support) return st;
    if (cutoff > 0.0 && tmin >= -cutoff && tmax <= cutoff) return st;

    std::vector<double> tb;
    tb.push_back(0.0);
    for (double v : br.t) {
        tb.push_back(v);
        tb.push_back(-v);
    }
    if (br.support < kInf) {
        tb.push_back(br.support);
        tb.push_back(-br.support);
    }
    if (cutoff > 0.0) {
        tb.push_back(cutoff);
        tb.push_back(-cutoff);
    }
    bool inside_break = false;
    for (double v : tb)
        if (v > tmin && v < tmax) inside_break = true;
    bool axis_inside = false;
    for (double c : br.axis)
        if ((c > x0 && c < x1) || (c > y0 && c < y1)) axis_inside = true;
    double dist = std::max(0.0, std::max(x0 - y1, y0 - x1));
    double width = std::max(x1 - x0, y1 - y0);
    bool near = br.singular && dist < 2.0 * width;

    std::vector<double> tmp(m);
    const GaussRule& gx = gauss_legendre(qc.order);
    if (!inside_break && !axis_inside && !near) {
        st.tensor = true;
        double hx = 0.5 * (x1 - x0), mx = 0.5 * (x0 + x1);
        double hy = 0.5 * (y1 - y0), my = 0.5 * (y0 + y1);
        for (std::size_t i = 0; i < gx.nodes.size(); ++i) {
            double x = mx + hx * gx.nodes[i];
            for (std::size_t j = 0; j < gx.nodes.size(); ++j) {
                double y = my + hy * gx.nodes[j];
                f(x, y, y - x, tmp.data());
                double w = hx * hy * gx.weights[i] * gx.weights[j];
                for (int c = 0; c < m; ++c) result[c] += w * tmp[c];
            }
        }
        return st;
    }

    // t-breaks: corners, kernel jumps, axis crossings.
    std::vector<double> cand = tb;
    cand.push_back(y0 - x0);
    cand.push_back(y1 - x1);
    for (double c : br.axis) {
        if (c > y0 && c < y1) {
            cand.push_back(c - x1);
            cand.push_back(c - x0);
        }
        if (c > x0 && c < x1) {
            cand.push_back(y0 - c);
            cand.push_back(y1 - c);
        }
    }
    std::vector<double> tp = partition(tmin, tmax, cand);

    const int nt = std::max(2 * qc.order, 10);
    const GaussRule& gt = gauss_legendre(nt);
    const GaussRule& gs = gauss_legendre(qc.singular_order);
    std::vector<double> panel(m), prev(m), last(m);

    auto plain_panel = [&](double a, double b, const GaussRule& g, double* acc) {
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            double t = mid + half * g.nodes[k];
            detail::accumulate_x(t, half * g.weights[k], x0, x1, y0, y1, br, gx, m, f, acc,
                                 tmp.data());
        }
    };

    for (std::size_t s = 0; s + 1 < tp.size(); ++s) {
        double a = tp[s], b = tp[s + 1];
        if (!(b > a)) continue;
        if (cutoff > 0.0 && a >= -cutoff && b <= cutoff) continue;
        if (a >= br.support || b <= -br.support) continue;
        bool touches_zero = (a == 0.0 || b == 0.0);
        if (br.singular && touches_zero && cutoff == 0.0) {
            // graded panels toward t = 0
            double tau = (a == 0.0) ? b : -a;
            double sgn = (a == 0.0) ? 1.0 : -1.0;
            double r = qc.grading;
            double outer = tau;
            for (int c = 0; c < m; ++c) prev[c] = last[c] = 0.0;
            for (int k = 0; k < qc.max_depth; ++k) {
                double inner = outer * r;
                for (int c = 0; c < m; ++c) panel[c] = 0.0;
                if (sgn > 0)
                    plain_panel(inner, outer, gs, panel.data());
                else
                    plain_panel(-outer, -inner, gs, panel.data());
                for (int c = 0; c < m; ++c) {
                    result[c] += panel[c];
                    prev[c] = last[c];
                    last[c] = panel[c];
                }
                outer = inner;
            }
            for (int c = 0; c < m; ++c) {
                if (last[c] == 0.0 || prev[c] == 0.0) continue;
                double rho = last[c] / prev[c];
                if (rho > 0.0 && rho < 1.0) {
                    result[c] += last[c] * rho / (1.0 - rho);
                    st.worst_tail_ratio = std::max(st.worst_tail_ratio, rho);
                } else if (std::abs(rho) >= 1.0) {
                    double scale = std::abs(result[c]);
                    if (std::abs(last[c]) > 1e-6 * scale)
                        throw NumericError("pair quadrature: graded panels do not decay near the diagonal");
                }
            }
            continue;
        }
        if (br.singular) {
            // dyadic panels: each panel no longer than its distance to t = 0
            if (a >= 0.0) {
                double lo = a;
                while (lo < b) {
                    double hi = (lo > 0.0) ? std::min(b, 2.0 * lo) : b;
                    plain_panel(lo, hi, gt, result);
                    lo = hi;
                }
            } else {
                double hi = b;
                while (hi > a) {
                    double lo = (hi < 0.0) ? std::max(a, 2.0 * hi) : a;
                    plain_panel(lo, hi, gt, result);
                    hi = lo;
                }
            }
            continue;
        }
        plain_panel(a, b, gt, result);
    }
    return st;
}

}  // namespace nld
