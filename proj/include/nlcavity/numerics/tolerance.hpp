#pragma once

#include <vector>

namespace nlcavity::numerics {

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_iter = 10000;

    /// Throws DomainError unless all three fields are positive.
    void validate() const;
};

/// Strictly increasing, nonempty sequence of abscissae.
class RealGrid {
public:
    RealGrid() = default;
    explicit RealGrid(std::vector<double> points);

    static RealGrid linspace(double lo, double hi, int n);
    static RealGrid logspace(double lo, double hi, int n);

    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] double front() const { return points_.front(); }
    [[nodiscard]] double back() const { return points_.back(); }
    [[nodiscard]] auto begin() const noexcept { return points_.begin(); }
    [[nodiscard]] auto end() const noexcept { return points_.end(); }

private:
    std::vector<double> points_;
};

}  // namespace nlcavity::numerics
