#include "nlcavity/numerics/tolerance.hpp"

#include <cmath>
#include <string>

#include "nlcavity/errors.hpp"

namespace nlcavity::numerics {

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
        throw DomainError("tolerance requires abs_tol > 0, rel_tol > 0, max_iter >= 1");
    }
}

RealGrid::RealGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("grid is empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) throw DomainError("grid point " + std::to_string(i) + " is not finite");
        if (i > 0 && !(points_[i] > points_[i - 1])) {
            throw DomainError("grid is not strictly increasing at index " + std::to_string(i));
        }
    }
}

RealGrid RealGrid::linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("linspace needs n >= 1");
    if (n == 1) return RealGrid({lo});
    std::vector<double> p(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = lo + step * i;
    p.back() = hi;
    return RealGrid(std::move(p));
}

RealGrid RealGrid::logspace(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("logspace needs positive endpoints");
    if (n == 1) return RealGrid({lo});
    std::vector<double> p(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    p.front() = lo;
    p.back() = hi;
    return RealGrid(std::move(p));
}

}  // namespace nlcavity::numerics
