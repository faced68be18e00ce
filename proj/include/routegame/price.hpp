#pragma once

#include <stdexcept>
#include <vector>

namespace routegame {

/// Per-link transmission price as a function of link traffic. Either linear
/// with positive slope, or a monotone piecewise-linear table anchored at
/// traffic 0 and extended past the last breakpoint with its final slope.
class PriceModel {
public:
    PriceModel() = default;  // linear with unit slope
    static PriceModel linear(double slope);
    static PriceModel piecewise(std::vector<double> traffic, std::vector<double> price);

    // Price at traffic v. Defined on all of R (left extension of the first
    // segment) so callers never have to special-case tiny negative noise.
    double operator()(double v) const;

    // Integral of the price from 0 to v, per segment in closed form.
    // Throws std::domain_error for v < 0.
    double integral(double v) const;

    double lipschitz() const { return lipschitz_; }
    bool is_linear() const { return xs_.empty(); }

private:
    double slope_ = 1.0;              // linear mode
    std::vector<double> xs_, ys_;     // piecewise breakpoints
    std::vector<double> cum_;         // integral at each breakpoint
    double tail_slope_ = 0.0;         // slope beyond the last breakpoint
    double lipschitz_ = 1.0;
};

}  // namespace routegame
