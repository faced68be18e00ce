#include "routegame/price.hpp"

#include <cmath>

namespace routegame {

PriceModel PriceModel::linear(double slope) {
    if (!(slope > 0.0) || !std::isfinite(slope))
        throw std::invalid_argument("price slope must be positive and finite");
    PriceModel m;
    m.slope_ = slope;
    m.lipschitz_ = slope;
    return m;
}

PriceModel PriceModel::piecewise(std::vector<double> traffic, std::vector<double> price) {
    if (traffic.size() != price.size() || traffic.size() < 2)
        throw std::invalid_argument("piecewise price needs at least two (traffic, price) points");
    if (traffic.front() != 0.0)
        throw std::invalid_argument("piecewise price table must start at traffic 0");
    double lip = 0.0;
    for (size_t k = 0; k + 1 < traffic.size(); ++k) {
        if (!(traffic[k + 1] > traffic[k]))
            throw std::invalid_argument("piecewise price traffic values must increase");
        if (price[k + 1] < price[k])
            throw std::invalid_argument("piecewise price must be nondecreasing");
        lip = std::max(lip, (price[k + 1] - price[k]) / (traffic[k + 1] - traffic[k]));
    }
    for (double y : price)
        if (!std::isfinite(y)) throw std::invalid_argument("piecewise price values must be finite");
    if (!(lip > 0.0))
        throw std::invalid_argument("piecewise price must not be globally flat");

    PriceModel m;
    m.xs_ = std::move(traffic);
    m.ys_ = std::move(price);
    m.tail_slope_ = (m.ys_.back() - m.ys_[m.ys_.size() - 2]) /
                    (m.xs_.back() - m.xs_[m.xs_.size() - 2]);
    m.lipschitz_ = std::max(lip, m.tail_slope_);
    m.cum_.assign(m.xs_.size(), 0.0);
    for (size_t k = 0; k + 1 < m.xs_.size(); ++k) {
        const double w = m.xs_[k + 1] - m.xs_[k];
        m.cum_[k + 1] = m.cum_[k] + w * (m.ys_[k] + m.ys_[k + 1]) * 0.5;
    }
    return m;
}

double PriceModel::operator()(double v) const {
    if (is_linear()) return slope_ * v;
    if (v <= xs_.front()) {
        const double s0 = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
        return ys_.front() + s0 * (v - xs_.front());
    }
    if (v >= xs_.back()) return ys_.back() + tail_slope_ * (v - xs_.back());
    size_t k = 1;
    while (xs_[k] < v) ++k;
    const double s = (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return ys_[k - 1] + s * (v - xs_[k - 1]);
}

double PriceModel::integral(double v) const {
    if (v < 0.0) throw std::domain_error("price integral undefined for negative traffic");
    if (is_linear()) return slope_ * v * v * 0.5;
    if (v >= xs_.back()) {
        const double d = v - xs_.back();
        return cum_.back() + ys_.back() * d + tail_slope_ * d * d * 0.5;
    }
    size_t k = 1;
    while (xs_[k] < v) ++k;
    const double d = v - xs_[k - 1];
    const double s = (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return cum_[k - 1] + ys_[k - 1] * d + s * d * d * 0.5;
}

}  // namespace routegame
