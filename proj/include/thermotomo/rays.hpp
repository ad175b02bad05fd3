#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "thermotomo/grid.hpp"
#include "thermotomo/medium.hpp"

namespace thermotomo {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
    Vec2 operator-() const noexcept { return {-x, -y}; }
    Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
    double dot(Vec2 o) const noexcept { return x * o.x + y * o.y; }
    double cross(Vec2 o) const noexcept { return x * o.y - y * o.x; }
    double norm() const noexcept { return std::hypot(x, y); }
    Vec2 normalized() const noexcept { return *this * (1.0 / norm()); }
};

inline constexpr double kTangencyTol = 1e-9;
inline constexpr double kCriticalAngleTol = 1e-12;

/// Mirror d about the plane with unit normal n: d - 2 (d.n) n.
/// Throws GeometryError when d is tangential (d.n == 0).
Vec2 reflect(Vec2 d, Vec2 n);

/// Snell refraction of unit d through an interface with unit normal n (either
/// orientation) from speed c_in into c_out. nullopt signals full internal
/// reflection. Throws GeometryError for tangential incidence or incidence
/// within 1e-12 rad of the critical angle.
std::optional<Vec2> snell_transmit(Vec2 d, Vec2 n, double c_in, double c_out);

/// Normal phase derivatives with tau = 1 for a ray meeting the interface at
/// angle alpha: a = sqrt(c_in^-2 - s^2), b = sqrt(c_out^-2 - s^2) with the
/// tangential slowness s = sin(alpha) / c_in. b = 0 and
/// total_internal_reflection = true when the transmitted phase is not real.
struct NormalSlowness {
    double a;
    double b;
    bool total_internal_reflection;
};
NormalSlowness normal_slowness(double c_in, double c_out, double sin_alpha);

struct AmplitudeCoeffs {
    double reflected;    // (a - b) / (a + b)
    double transmitted;  // 2a / (a + b)
};
AmplitudeCoeffs amplitude_coeffs(double a, double b);

/// Transmitted high-frequency energy fraction 4ab / (a + b)^2; 0 when b = 0.
double energy_split(double a, double b);

struct RayCaps {
    std::size_t max_depth = 16;
    double min_weight = 1e-6;
};

enum class RayEventKind { launch, reflect, transmit, exit, expiry, truncation, tangent_undetermined };

const char* to_string(RayEventKind kind) noexcept;

/// One node of a branch graph. Launch/reflect/transmit start a segment with
/// direction `d`; the remaining kinds are leaves.
struct RayEvent {
    RayEventKind kind;
    Vec2 x;
    Vec2 d;
    double t;
    double angle;   // incidence angle from the normal for interface events
    double weight;
    long parent;    // -1 for the two launch events
    std::size_t depth;
};

struct RayBranchGraph {
    std::vector<RayEvent> events;

    /// True when some exit leaf has no tangent_undetermined event on its path.
    bool has_clean_exit() const noexcept;
    std::vector<std::size_t> children(std::size_t id) const;
    /// One line per event: kind x y t angle weight parent.
    void write(std::ostream& os) const;
};

/// Grows the reflect/transmit tree from x0 in both directions +d0 and -d0 up
/// to time T. Segments are straight at the layer speed; exits are crossings of
/// the rectangle omega's physical boundary.
RayBranchGraph trace_branches(Vec2 x0, Vec2 d0, const Medium& m, const Region& omega, double T,
                              const RayCaps& caps = {});

struct VisibilitySampling {
    std::size_t n_pos = 64;
    std::size_t n_dir = 128;
    RayCaps caps;
};

struct VisibilitySample {
    Vec2 x;
    Vec2 d;
    bool covered;
};

struct VisibilityReport {
    bool visible = false;
    std::vector<VisibilitySample> samples;
    std::vector<VisibilitySample> uncovered;
    /// Smallest transmitted energy fraction met on any interface crossing.
    double min_transmitted_fraction = 1.0;

    /// CSV: x,y,dx,dy,covered per sample.
    void write_csv(std::ostream& os) const;
};

/// Deterministic boundary-biased sample points of kset.
std::vector<Vec2> sample_points(const Region& kset, std::size_t n_pos);

/// Every sampled (x, d) must have a clean exit from +d or -d before T.
VisibilityReport check_visibility(const Region& kset, const Medium& m, const Region& omega, double T,
                                  const VisibilitySampling& sampling = {});

}  // namespace thermotomo
