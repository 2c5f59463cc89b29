#include "nlcavity/numerics/special.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "nlcavity/errors.hpp"

namespace nlcavity::numerics {

namespace {

constexpr int kAgmMaxDepth = 32;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Series for the regularized lower gamma P(s, x), valid for x <= s + 1.
double lower_regularized_series(double s, double x) {
    if (x == 0.0) return 0.0;
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::exp(s * std::log(x) - x - std::lgamma(s)) * sum;
}

// Modified Lentz continued fraction; returns ln(e^x Γ(s, x)) for x > s + 1.
double log_scaled_upper_cf(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double hcf = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        hcf *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return s * std::log(x) + std::log(hcf);
}

}  // namespace

double jacobi_dn(double u, double m) {
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("jacobi_dn: parameter m must lie in [0, 1]");
    if (m == 0.0) return 1.0;
    if (m == 1.0) return 1.0 / std::cosh(u);

    std::array<double, kAgmMaxDepth + 1> a{};
    std::array<double, kAgmMaxDepth + 1> c{};
    a[0] = 1.0;
    double b = std::sqrt(1.0 - m);
    c[0] = std::sqrt(m);
    int n = 0;
    while (std::abs(c[n]) > kEps * a[n]) {
        if (n == kAgmMaxDepth) throw ConvergenceError("jacobi_dn: AGM did not converge", 1.0);
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    if (n == 0) return 1.0;
    double phi = std::ldexp(a[n] * u, n);
    double phi_prev = phi;
    for (int k = n; k > 0; --k) {
        phi_prev = phi;
        phi = 0.5 * (phi + std::asin(c[k] * std::sin(phi) / a[k]));
    }
    return std::cos(phi) / std::cos(phi_prev - phi);
}

double log_scaled_upper_gamma(double s, double x) {
    if (!(s > 0.0)) throw DomainError("incomplete gamma: s must be positive");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be nonnegative");
    if (x > s + 1.0) return log_scaled_upper_cf(s, x);
    const double q = 1.0 - lower_regularized_series(s, x);
    return x + std::lgamma(s) + std::log(q);
}

double upper_incomplete_gamma(double s, double x) {
    if (!(s > 0.0)) throw DomainError("incomplete gamma: s must be positive");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be nonnegative");
    if (x > s + 1.0) return std::exp(log_scaled_upper_cf(s, x) - x);
    return std::tgamma(s) * (1.0 - lower_regularized_series(s, x));
}

}  // namespace nlcavity::numerics
