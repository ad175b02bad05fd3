#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "thermotomo/grid.hpp"

namespace thermotomo {

/// One disk of a concentric layered medium: speed inside radius `radius`
/// (up to the next inner disk).
struct Layer {
    double radius;
    double speed;
};

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
};

/// Circle across which the speed jumps from c_int (inside) to c_ext (outside).
struct InterfaceDescriptor {
    Circle circle;
    double c_int;
    double c_ext;
};

/// Piecewise-constant sound speed built from nested disks centered at the
/// physical origin, with speed 1 outside the outermost disk.
class Medium {
public:
    /// Validates nesting (radii strictly decreasing), positivity, and that each
    /// circle actually changes the speed. `mollify_width` (in units of h)
    /// averages the cached node speeds over a disk of that radius; 0 keeps the
    /// jump sharp.
    Medium(const Grid& g, std::vector<Layer> layers, double mollify_width = 0.0);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<Layer>& layers() const noexcept { return layers_; }
    const std::vector<InterfaceDescriptor>& interfaces() const noexcept { return interfaces_; }

    /// Cached per-node speed.
    const ScalarField& c_field() const noexcept { return c_; }
    std::span<const double> c_squared() const noexcept { return c2_; }
    double c_max() const noexcept { return c_max_; }

    /// Exact speed at a physical point; throws DomainError outside the grid.
    double speed_at(double x, double y) const;
    /// Exact speed at distance r from the center (no bounds check).
    double speed_at_radius(double r) const noexcept;
    /// 0 for the background, k for the k-th disk (1-based, innermost last).
    std::size_t layer_at_radius(double r) const noexcept;
    double layer_speed(std::size_t layer) const noexcept { return layer == 0 ? 1.0 : layers_[layer - 1].speed; }

    /// Smallest distance from a physical point to any interface circle.
    double distance_to_interfaces(double x, double y) const noexcept;

private:
    Grid grid_;
    std::vector<Layer> layers_;
    std::vector<InterfaceDescriptor> interfaces_;
    ScalarField c_;
    std::vector<double> c2_;
    double c_max_ = 1.0;
};

Medium build_medium(std::span<const Layer> layers, const Grid& g, double mollify_width = 0.0);

/// arcsin(c_int / c_ext) when c_int < c_ext; nullopt when a transmitted ray
/// always exists (c_int > c_ext).
std::optional<double> critical_angle(const InterfaceDescriptor& iface);

/// c_int / c_ext.
double interface_gamma(const InterfaceDescriptor& iface);

}  // namespace thermotomo
