#include "nlcavity/numerics/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "nlcavity/errors.hpp"

namespace nlcavity::numerics {

namespace {

struct Panel {
    double a, m, b;
    double fa, fm, fb;
    double whole;   // Simpson estimate on [a, b]
    double refined; // composite Simpson on the two halves
    double err;
    double fl, fr;  // midpoints of the halves
};

Panel make_panel(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb) {
    Panel p{};
    p.a = a;
    p.b = b;
    p.m = 0.5 * (a + b);
    p.fa = fa;
    p.fm = fm;
    p.fb = fb;
    const double h = b - a;
    p.fl = f(0.5 * (a + p.m));
    p.fr = f(0.5 * (p.m + b));
    p.whole = h / 6.0 * (fa + 4.0 * fm + fb);
    p.refined = h / 12.0 * (fa + 4.0 * p.fl + 2.0 * fm + 4.0 * p.fr + fb);
    p.err = std::abs(p.refined - p.whole) / 15.0;
    return p;
}

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

}  // namespace

QuadratureResult integrate_adaptive_ex(const std::function<double(double)>& f, double a, double b,
                                       const Tolerance& tol) {
    tol.validate();
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");

    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
        throw DomainError("integrate_adaptive: integrand not finite");
    }
    Panel root = make_panel(f, a, b, fa, fm, fb);
    double value = root.refined + (root.refined - root.whole) / 15.0;
    double err = root.err;
    heap.push(root);

    int splits = 0;
    constexpr int min_splits = 4;
    while (splits < min_splits || err > std::max(tol.abs_tol, tol.rel_tol * std::abs(value))) {
        if (splits >= tol.max_iter) {
            throw ConvergenceError("integrate_adaptive: subdivision budget exhausted", value);
        }
        Panel p = heap.top();
        heap.pop();
        value -= p.refined + (p.refined - p.whole) / 15.0;
        err -= p.err;
        Panel left = make_panel(f, p.a, p.m, p.fa, p.fl, p.fm);
        Panel right = make_panel(f, p.m, p.b, p.fm, p.fr, p.fb);
        if (!std::isfinite(left.refined) || !std::isfinite(right.refined)) {
            throw DomainError("integrate_adaptive: integrand not finite");
        }
        for (const Panel* q : {&left, &right}) {
            value += q->refined + (q->refined - q->whole) / 15.0;
            err += q->err;
            heap.push(*q);
        }
        ++splits;
        // Re-sum periodically so cancellation in the running totals cannot drift.
        if (splits % 256 == 0) {
            auto copy = heap;
            value = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                const Panel& q = copy.top();
                value += q.refined + (q.refined - q.whole) / 15.0;
                err += q.err;
                copy.pop();
            }
        }
    }
    return {value, err, static_cast<int>(heap.size())};
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, const Tolerance& tol) {
    return integrate_adaptive_ex(f, a, b, tol).value;
}

}  // namespace nlcavity::numerics
