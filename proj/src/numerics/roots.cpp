#include "nlcavity/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlcavity/errors.hpp"

namespace nlcavity::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTripleTol = 1e-9;
constexpr double kDoubleTol = 1e-12;

struct Depressed {
    double scale;  // substitution E = scale * (t - c2 / (3 scale))
    double p, q;   // t^3 + p t + q in scaled units
};

Depressed depress(double c2, double c1, double c0) {
    const double scale = std::max({std::abs(c2), std::sqrt(std::abs(c1)), std::cbrt(std::abs(c0))});
    if (scale == 0.0) return {0.0, 0.0, 0.0};
    const double b2 = c2 / scale, b1 = c1 / (scale * scale), b0 = c0 / (scale * scale * scale);
    const double p = b1 - b2 * b2 / 3.0;
    const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    return {scale, p, q};
}

double polish(double x, double c2, double c1, double c0) {
    for (int it = 0; it < 8; ++it) {
        const double f = ((x + c2) * x + c1) * x + c0;
        const double df = (3.0 * x + 2.0 * c2) * x + c1;
        if (df == 0.0 || !std::isfinite(f)) break;
        const double step = f / df;
        const double trial = x - step;
        const double ft = ((trial + c2) * trial + c1) * trial + c0;
        if (std::abs(ft) >= std::abs(f)) break;
        x = trial;
        if (std::abs(step) <= 4.0 * kEps * std::abs(x)) break;
    }
    return x;
}

}  // namespace

double cubic_discriminant(double c2, double c1, double c0) {
    const Depressed d = depress(c2, c1, c0);
    return 0.25 * d.q * d.q + d.p * d.p * d.p / 27.0;
}

std::vector<CubicRoot> solve_cubic_real(double c2, double c1, double c0) {
    if (!std::isfinite(c2) || !std::isfinite(c1) || !std::isfinite(c0)) {
        throw DomainError("solve_cubic_real: coefficients must be finite");
    }
    const Depressed d = depress(c2, c1, c0);
    if (d.scale == 0.0) return {{0.0, 3}};
    const double shift = -c2 / (3.0 * d.scale);
    auto to_e = [&](double t) { return d.scale * (t + shift); };

    std::vector<CubicRoot> roots;
    const double disc = 0.25 * d.q * d.q + d.p * d.p * d.p / 27.0;
    if (std::abs(d.p) < kTripleTol && std::abs(d.q) < kTripleTol) {
        roots.push_back({to_e(0.0), 3});
    } else if (std::abs(disc) < kDoubleTol) {
        // t1 simple, t2 double; 3q/p form is well conditioned once p is away from zero.
        const double t1 = 3.0 * d.q / d.p;
        const double t2 = -1.5 * d.q / d.p;
        roots.push_back({polish(to_e(t1), c2, c1, c0), 1});
        roots.push_back({to_e(t2), 2});
    } else if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-0.5 * d.q + (d.q <= 0 ? sq : -sq));
        const double t = u == 0.0 ? 0.0 : u - d.p / (3.0 * u);
        roots.push_back({polish(to_e(t), c2, c1, c0), 1});
    } else {
        const double r = 2.0 * std::sqrt(-d.p / 3.0);
        const double arg = std::clamp(3.0 * d.q / (d.p * r), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
            roots.push_back({polish(to_e(t), c2, c1, c0), 1});
        }
    }
    std::sort(roots.begin(), roots.end(), [](const CubicRoot& a, const CubicRoot& b) { return a.value < b.value; });
    return roots;
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, const Tolerance& tol) {
    tol.validate();
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(fa * fb < 0.0)) throw BracketError("find_root_bracketed: no sign change on bracket");

    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if (fb * fc > 0.0) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double xtol = 2.0 * kEps * std::abs(b) + 0.5 * std::max(tol.abs_tol, tol.rel_tol * std::abs(b));
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= xtol || fb == 0.0) return b;
        if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > xtol ? d : (m > 0 ? xtol : -xtol);
        fb = f(b);
    }
    throw ConvergenceError("find_root_bracketed: iteration budget exhausted", b);
}

double minimize_bracketed(const std::function<double(double)>& f, double lo, double hi, double x_tol, int max_iter) {
    constexpr double golden = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + golden * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = x_tol + kEps * std::abs(x), tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) return x;
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x >= xm) ? a - x : b - x;
            d = golden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x;
            else b = x;
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x) a = u;
            else b = u;
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return x;
}

}  // namespace nlcavity::numerics
