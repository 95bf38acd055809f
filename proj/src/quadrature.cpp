#include "nld/quadrature.hpp"

#include <map>
#include <mutex>

namespace nld {

namespace {

GaussRule compute_rule(int n) {
    GaussRule g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) g.nodes[n / 2] = 0.0;
    return g;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 64) throw NumericError("Gauss rule order out of range: " + std::to_string(n));
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        if (n == 1)
            it = cache.emplace(n, GaussRule{{0.0}, {2.0}}).first;
        else
            it = cache.emplace(n, compute_rule(n)).first;
    }
    return it->second;
}

QuadConfig refined(const QuadConfig& q) {
    QuadConfig r = q;
    r.order = q.order + 2;
    r.singular_order = std::min(q.singular_order + 4, 64);
    r.grading = std::min(0.2, q.grading + 0.05);
    r.max_depth = q.max_depth + 2;
    return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& g = gauss_legendre(n);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b), s = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) s += g.weights[k] * f(mid + half * g.nodes[k]);
    return s * half;
}

std::vector<double> partition(double a, double b, const std::vector<double>& v) {
    std::vector<double> p{a, b};
    for (double c : v)
        if (c > a && c < b) p.push_back(c);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& breaks, int n) {
    if (!(b > a)) return 0.0;
    std::vector<double> p = partition(a, b, breaks);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) s += integrate(f, p[i], p[i + 1], n);
    return s;
}

double integrate_annulus(const std::function<double(const Point&)>& F, int dim, double r_lo,
                         double r_hi, const AnnulusBreaks& br, int n) {
    if (!(r_hi > r_lo)) return 0.0;
    if (dim == 1) {
        auto g = [&](double r) { return F({r, 0.0}) + F({-r, 0.0}); };
        return integrate_split(g, r_lo, r_hi, br.radial, n);
    }
    auto ring = [&](double r) {
        std::vector<double> cuts{0.25 * kPi, 0.5 * kPi, 0.75 * kPi};
        if (br.angular) {
            for (double th : br.angular(r)) {
                double a = std::fmod(th, kPi);
                if (a < 0) a += kPi;
                cuts.push_back(a);
            }
        }
        auto h = [&](double th) {
            Point z{r * std::cos(th), r * std::sin(th)};
            Point mz{-z[0], -z[1]};
            return F(z) + F(mz);
        };
        return r * integrate_split(h, 0.0, kPi, cuts, n);
    };
    return integrate_split(ring, r_lo, r_hi, br.radial, n);
}

double wynn_estimate(const std::vector<double>& sums, int window) {
    int n = static_cast<int>(sums.size());
    if (n == 0) return 0.0;
    int m = std::min(n, window);
    std::vector<double> prev(m + 1, 0.0), cur(sums.end() - m, sums.end()), next;
    double best = cur.back();
    for (int k = 1; k < m; ++k) {
        next.assign(m - k, 0.0);
        for (int i = 0; i + 1 < static_cast<int>(cur.size()); ++i) {
            double d = cur[i + 1] - cur[i];
            if (d == 0.0 || !std::isfinite(d)) return best;
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (k % 2 == 0) {
            if (!std::isfinite(next.back())) return best;
            best = next.back();
        }
        prev = cur;
        cur = next;
    }
    return best;
}

SeriesResult sum_shells(const std::function<double(int)>& term, const SeriesRule& rule) {
    SeriesResult res;
    double sum = 0.0, prev_term = 0.0;
    int nondecay = 0, zeros = 0, agree = 0;
    std::vector<double> sums;
    for (int k = 0; k < rule.max_terms; ++k) {
        double j = term(k);
        if (std::isnan(j)) {
            res.value = sum;
            res.status = SeriesStatus::converged;
            res.terms = k;
            return res;
        }
        if (!std::isfinite(j)) {
            res.value = kInf;
            res.status = SeriesStatus::diverged;
            res.terms = k + 1;
            return res;
        }
        sum += j;
        sums.push_back(sum);
        if (k > 0 && prev_term != 0.0) {
            double rho = j / prev_term;
            res.last_ratio = rho;
            if (k >= rule.div_start && rho >= rule.div_ratio && std::abs(j) > 0.0)
                ++nondecay;
            else
                nondecay = 0;
        } else if (k > 0) {
            res.last_ratio = j == 0.0 ? 0.0 : kInf;
        }
        zeros = (j == 0.0) ? zeros + 1 : 0;
        double est = zeros > 0 ? sum : wynn_estimate(sums);
        res.partial.push_back(est);
        res.terms = k + 1;
        if (nondecay >= rule.div_run) {
            res.value = kInf;
            res.status = SeriesStatus::diverged;
            return res;
        }
        if (k + 1 >= rule.min_terms) {
            if (zeros >= 3) {
                res.value = sum;
                res.status = SeriesStatus::converged;
                return res;
            }
            double prev_est = res.partial[res.partial.size() - 2];
            double tol = std::max(rule.rel_tol * std::abs(est), rule.abs_floor);
            // an antilimit of a growing series can look stable, so only decaying tails count
            bool decaying = k >= rule.div_start && std::abs(res.last_ratio) < rule.div_ratio;
            agree = (decaying && std::abs(est - prev_est) <= tol) ? agree + 1 : 0;
            if (agree >= 2) {
                res.value = est;
                res.status = SeriesStatus::converged;
                return res;
            }
        }
        prev_term = j;
    }
    res.value = res.partial.empty() ? 0.0 : res.partial.back();
    res.status = SeriesStatus::unresolved;
    return res;
}

}  // namespace nld
