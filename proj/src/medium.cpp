#include "thermotomo/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thermotomo/errors.hpp"

namespace thermotomo {

Medium::Medium(const Grid& g, std::vector<Layer> layers, double mollify_width)
    : grid_(g), layers_(std::move(layers)), c_(g, 1.0) {
    double prev_radius = std::numeric_limits<double>::infinity();
    double outer_speed = 1.0;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const Layer& l = layers_[k];
        if (!(l.radius > 0.0) || !std::isfinite(l.radius)) {
            throw ConfigError("layer " + std::to_string(k + 1) + ": radius must be positive");
        }
        if (!(l.speed > 0.0) || !std::isfinite(l.speed)) {
            throw ConfigError("layer " + std::to_string(k + 1) + ": speed must be positive");
        }
        if (!(l.radius < prev_radius)) {
            throw ConfigError("layer " + std::to_string(k + 1) + ": disks must be nested (radii strictly decreasing)");
        }
        if (l.speed == outer_speed) {
            throw ConfigError("layer " + std::to_string(k + 1) + ": speed must differ across the interface");
        }
        interfaces_.push_back({Circle{0.0, 0.0, l.radius}, l.speed, outer_speed});
        prev_radius = l.radius;
        outer_speed = l.speed;
    }
    if (!(mollify_width >= 0.0)) throw ConfigError("mollify width must be nonnegative");

    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            c_.at(i, j) = speed_at_radius(std::hypot(g.x(i), g.y(j)));
        }
    }
    if (mollify_width > 0.0) {
        const auto reach = static_cast<std::ptrdiff_t>(std::floor(mollify_width));
        const double w2 = mollify_width * mollify_width;
        ScalarField smooth(g);
        const auto nx = static_cast<std::ptrdiff_t>(g.nx), ny = static_cast<std::ptrdiff_t>(g.ny);
        for (std::ptrdiff_t j = 0; j < ny; ++j) {
            for (std::ptrdiff_t i = 0; i < nx; ++i) {
                double sum = 0.0;
                double count = 0.0;
                for (std::ptrdiff_t dj = -reach; dj <= reach; ++dj) {
                    for (std::ptrdiff_t di = -reach; di <= reach; ++di) {
                        if (static_cast<double>(di * di + dj * dj) > w2) continue;
                        const std::ptrdiff_t ii = std::clamp(i + di, std::ptrdiff_t{0}, nx - 1);
                        const std::ptrdiff_t jj = std::clamp(j + dj, std::ptrdiff_t{0}, ny - 1);
                        sum += c_.at(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
                        count += 1.0;
                    }
                }
                smooth.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = sum / count;
            }
        }
        c_ = std::move(smooth);
    }
    c2_.resize(g.size());
    c_max_ = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        c2_[k] = c_[k] * c_[k];
        c_max_ = std::max(c_max_, c_[k]);
    }
}

std::size_t Medium::layer_at_radius(double r) const noexcept {
    std::size_t layer = 0;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        if (r <= layers_[k].radius) layer = k + 1;
    }
    return layer;
}

double Medium::speed_at_radius(double r) const noexcept { return layer_speed(layer_at_radius(r)); }

double Medium::speed_at(double x, double y) const {
    if (!grid_.contains_point(x, y)) {
        throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) + ") lies outside the grid");
    }
    return speed_at_radius(std::hypot(x, y));
}

double Medium::distance_to_interfaces(double x, double y) const noexcept {
    const double r = std::hypot(x, y);
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : interfaces_) d = std::min(d, std::abs(r - f.circle.r));
    return d;
}

Medium build_medium(std::span<const Layer> layers, const Grid& g, double mollify_width) {
    return Medium(g, std::vector<Layer>(layers.begin(), layers.end()), mollify_width);
}

std::optional<double> critical_angle(const InterfaceDescriptor& iface) {
    if (iface.c_int < iface.c_ext) return std::asin(iface.c_int / iface.c_ext);
    return std::nullopt;
}

double interface_gamma(const InterfaceDescriptor& iface) { return iface.c_int / iface.c_ext; }

}  // namespace thermotomo
