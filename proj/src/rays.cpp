#include "thermotomo/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "thermotomo/errors.hpp"

namespace thermotomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Vec2 reflect(Vec2 d, Vec2 n) {
    const double dn = d.dot(n);
    if (std::abs(dn) < 1e-15) throw GeometryError("reflect: tangential incidence");
    return d - n * (2.0 * dn);
}

std::optional<Vec2> snell_transmit(Vec2 d, Vec2 n, double c_in, double c_out) {
    if (!(c_in > 0.0) || !(c_out > 0.0)) throw ConfigError("snell_transmit: speeds must be positive");
    double dn = d.dot(n);
    if (std::abs(dn) < 1e-15) throw GeometryError("snell_transmit: tangential incidence");
    const Vec2 nn = dn > 0.0 ? n : -n;  // normal pointing to the outgoing side
    dn = std::abs(dn);
    const Vec2 tang = d - nn * dn;
    const double sin_a = tang.norm();
    const double alpha = std::atan2(sin_a, dn);
    if (c_in < c_out) {
        const double alpha0 = std::asin(c_in / c_out);
        if (std::abs(alpha - alpha0) < kCriticalAngleTol) {
            throw GeometryError("snell_transmit: incidence at the critical angle");
        }
        if (alpha > alpha0) return std::nullopt;
    }
    if (sin_a == 0.0) return d;
    const double sin_b = sin_a * c_out / c_in;
    const double cos_b = std::sqrt((1.0 - sin_b) * (1.0 + sin_b));
    return tang * (sin_b / sin_a) + nn * cos_b;
}

NormalSlowness normal_slowness(double c_in, double c_out, double sin_alpha) {
    if (!(c_in > 0.0) || !(c_out > 0.0)) throw ConfigError("normal_slowness: speeds must be positive");
    if (!(sin_alpha >= 0.0 && sin_alpha <= 1.0)) throw ConfigError("normal_slowness: sin(alpha) must lie in [0, 1]");
    const double s = sin_alpha / c_in;
    const double a = std::sqrt((1.0 - sin_alpha) * (1.0 + sin_alpha)) / c_in;
    const double q = (1.0 / c_out - s) * (1.0 / c_out + s);
    if (q <= 0.0) return {a, 0.0, true};
    return {a, std::sqrt(q), false};
}

AmplitudeCoeffs amplitude_coeffs(double a, double b) {
    if (a < 0.0 || b < 0.0) throw ConfigError("amplitude_coeffs: a and b must be nonnegative");
    if (a + b == 0.0) throw DegenerateError("amplitude_coeffs: a = b = 0");
    return {(a - b) / (a + b), 2.0 * a / (a + b)};
}

double energy_split(double a, double b) {
    if (!(a > 0.0)) throw ConfigError("energy_split: a must be positive");
    if (b < 0.0) throw ConfigError("energy_split: b must be nonnegative");
    if (b == 0.0) return 0.0;
    const double s = a + b;
    return 4.0 * a * b / (s * s);
}

const char* to_string(RayEventKind kind) noexcept {
    switch (kind) {
        case RayEventKind::launch: return "launch";
        case RayEventKind::reflect: return "reflect";
        case RayEventKind::transmit: return "transmit";
        case RayEventKind::exit: return "exit";
        case RayEventKind::expiry: return "expiry";
        case RayEventKind::truncation: return "truncation";
        case RayEventKind::tangent_undetermined: return "tangent-undetermined";
    }
    return "unknown";
}

bool RayBranchGraph::has_clean_exit() const noexcept {
    for (const RayEvent& e : events) {
        if (e.kind != RayEventKind::exit) continue;
        bool clean = true;
        for (long p = e.parent; p >= 0; p = events[static_cast<std::size_t>(p)].parent) {
            if (events[static_cast<std::size_t>(p)].kind == RayEventKind::tangent_undetermined) clean = false;
        }
        if (clean) return true;
    }
    return false;
}

std::vector<std::size_t> RayBranchGraph::children(std::size_t id) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < events.size(); ++k) {
        if (events[k].parent == static_cast<long>(id)) out.push_back(k);
    }
    return out;
}

void RayBranchGraph::write(std::ostream& os) const {
    const auto old = os.precision(17);
    for (const RayEvent& e : events) {
        os << to_string(e.kind) << ' ' << e.x.x << ' ' << e.x.y << ' ' << e.t << ' ' << e.angle << ' ' << e.weight
           << ' ' << e.parent << '\n';
    }
    os.precision(old);
}

void VisibilityReport::write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "x,y,dx,dy,covered\n";
    for (const auto& s : samples) {
        os << s.x.x << ',' << s.x.y << ',' << s.d.x << ',' << s.d.y << ',' << (s.covered ? 1 : 0) << '\n';
    }
    os.precision(old);
}

namespace {

// Circles are numbered 1..n from the outside in; layer L sits between circle
// L (outside) and circle L + 1 (inside), layer 0 is the background.
class Tracer {
public:
    Tracer(const Medium& m, const Region& omega, double T, const RayCaps& caps, bool stop_at_exit)
        : m_(m), omega_(omega), T_(T), caps_(caps), stop_at_exit_(stop_at_exit) {
        if (omega.kind() != Region::Kind::rectangle) throw ConfigError("ray tracing needs a rectangular omega");
        if (!(caps.min_weight >= 0.0)) throw ConfigError("min_weight must be nonnegative");
        if (!m.layers().empty()) {
            const double r = m.layers().front().radius;
            if (r >= -omega.xmin() || r >= omega.xmax() || r >= -omega.ymin() || r >= omega.ymax()) {
                throw ConfigError("interfaces must lie inside omega");
            }
        }
    }

    void launch(Vec2 x0, Vec2 d0) {
        if (!omega_.contains_point(x0.x, x0.y)) throw ConfigError("ray origin lies outside omega");
        if (m_.distance_to_interfaces(x0.x, x0.y) < 1e-12) throw ConfigError("ray origin lies on an interface");
        const double len = d0.norm();
        if (!(len > 0.0)) throw ConfigError("ray direction must be nonzero");
        const Vec2 d = d0 * (1.0 / len);
        const std::size_t layer = m_.layer_at_radius(x0.norm());
        for (Vec2 dir : {d, -d}) {
            const long id = add({RayEventKind::launch, x0, dir, 0.0, 0.0, 1.0, -1, 0});
            stack_.push_back({dir, x0, 0.0, 1.0, 0, id, layer, 0});
        }
        while (!stack_.empty() && !(stop_at_exit_ && found_exit_)) {
            Pending p = stack_.back();
            stack_.pop_back();
            advance(p);
        }
    }

    RayBranchGraph graph;
    bool found_exit_ = false;
    double min_split = 1.0;

private:
    struct Pending {
        Vec2 d;
        Vec2 x;
        double t;
        double w;
        std::size_t depth;
        long id;
        std::size_t layer;
        std::size_t on_circle;  // circle the start point lies on, 0 if none
    };

    long add(const RayEvent& e) {
        graph.events.push_back(e);
        return static_cast<long>(graph.events.size() - 1);
    }

    double radius(std::size_t circle) const { return m_.layers()[circle - 1].radius; }

    static double hit_circle(Vec2 p, Vec2 d, double R, bool starts_on) {
        const double b = p.dot(d);
        if (starts_on) {
            const double s = -2.0 * b;
            return s > 1e-13 ? s : kInf;
        }
        const double c = p.dot(p) - R * R;
        const double disc = b * b - c;
        if (disc < 0.0) return kInf;
        const double sq = std::sqrt(disc);
        // stable pair of roots of s^2 + 2 b s + c = 0
        const double q = b > 0.0 ? -b - sq : -b + sq;
        double r1 = q, r2 = q != 0.0 ? c / q : 0.0;
        if (r1 > r2) std::swap(r1, r2);
        if (r1 > 1e-13) return r1;
        if (r2 > 1e-13) return r2;
        return kInf;
    }

    double hit_box(Vec2 p, Vec2 d) const {
        double s = kInf;
        if (d.x > 0.0) s = std::min(s, (omega_.xmax() - p.x) / d.x);
        if (d.x < 0.0) s = std::min(s, (omega_.xmin() - p.x) / d.x);
        if (d.y > 0.0) s = std::min(s, (omega_.ymax() - p.y) / d.y);
        if (d.y < 0.0) s = std::min(s, (omega_.ymin() - p.y) / d.y);
        return std::max(s, 0.0);
    }

    void leaf(RayEventKind kind, Vec2 x, Vec2 d, double t, double angle, double w, long parent, std::size_t depth) {
        add({kind, x, d, t, angle, w, parent, depth});
        if (kind == RayEventKind::exit) found_exit_ = true;
    }

    void advance(const Pending& p) {
        const std::size_t n = m_.layers().size();
        const double speed = m_.layer_speed(p.layer);
        double s_best = kInf;
        std::size_t circle = 0;
        if (p.layer >= 1) {  // outer circle of this layer
            const double s = hit_circle(p.x, p.d, radius(p.layer), p.on_circle == p.layer);
            if (s < s_best) {
                s_best = s;
                circle = p.layer;
            }
        }
        if (p.layer < n) {  // inner circle
            const double s = hit_circle(p.x, p.d, radius(p.layer + 1), p.on_circle == p.layer + 1);
            if (s < s_best) {
                s_best = s;
                circle = p.layer + 1;
            }
        }
        bool exits = false;
        if (p.layer == 0) {
            const double s = hit_box(p.x, p.d);
            if (s < s_best) {
                s_best = s;
                exits = true;
            }
        }
        const double t_event = p.t + s_best / speed;
        if (!(t_event < T_)) {
            const double remaining = std::max(T_ - p.t, 0.0);
            leaf(RayEventKind::expiry, p.x + p.d * (remaining * speed), p.d, std::max(T_, p.t), 0.0, p.w, p.id,
                 p.depth);
            return;
        }
        const Vec2 hit = p.x + p.d * s_best;
        if (exits) {
            leaf(RayEventKind::exit, hit, p.d, t_event, 0.0, p.w, p.id, p.depth);
            return;
        }

        const double R = radius(circle);
        const Vec2 normal = hit * (1.0 / hit.norm());
        const Vec2 at = normal * R;  // snap onto the circle
        const double dn = p.d.dot(normal);
        const double alpha = std::atan2(std::abs(p.d.cross(normal)), std::abs(dn));
        const bool outward = dn > 0.0;
        const std::size_t next_layer = outward ? p.layer - 1 : p.layer + 1;
        const double c_in = speed;
        const double c_out = m_.layer_speed(next_layer);

        bool glancing = std::numbers::pi / 2 - alpha < kTangencyTol;
        if (c_in < c_out && std::abs(alpha - std::asin(c_in / c_out)) < kTangencyTol) glancing = true;
        if (glancing) {
            leaf(RayEventKind::tangent_undetermined, at, p.d, t_event, alpha, p.w, p.id, p.depth);
            return;
        }

        const NormalSlowness ns = normal_slowness(c_in, c_out, std::sin(alpha));
        const AmplitudeCoeffs amp = amplitude_coeffs(ns.a, ns.b);
        const double w_reflect = p.w * amp.reflected * amp.reflected;
        const double w_transmit = ns.total_internal_reflection ? 0.0 : p.w * energy_split(ns.a, ns.b);
        if (!ns.total_internal_reflection) min_split = std::min(min_split, energy_split(ns.a, ns.b));

        const std::size_t depth = p.depth + 1;
        auto spawn = [&](RayEventKind kind, Vec2 dir, double w, std::size_t layer) {
            if (depth > caps_.max_depth || w < caps_.min_weight) {
                leaf(RayEventKind::truncation, at, dir, t_event, alpha, w, p.id, depth);
                return;
            }
            const long id = add({kind, at, dir, t_event, alpha, w, p.id, depth});
            stack_.push_back({dir, at, t_event, w, depth, id, layer, circle});
        };
        spawn(RayEventKind::reflect, reflect(p.d, normal), w_reflect, p.layer);
        if (!ns.total_internal_reflection) {
            const auto dir = snell_transmit(p.d, normal, c_in, c_out);
            spawn(RayEventKind::transmit, *dir, w_transmit, next_layer);
        }
    }

    const Medium& m_;
    const Region& omega_;
    double T_;
    RayCaps caps_;
    bool stop_at_exit_;
    std::vector<Pending> stack_;
};

double frac(double v) { return v - std::floor(v); }

}  // namespace

RayBranchGraph trace_branches(Vec2 x0, Vec2 d0, const Medium& m, const Region& omega, double T,
                              const RayCaps& caps) {
    Tracer tr(m, omega, T, caps, false);
    tr.launch(x0, d0);
    return std::move(tr.graph);
}

std::vector<Vec2> sample_points(const Region& kset, std::size_t n_pos) {
    constexpr double g1 = 0.6180339887498949;  // golden-ratio sequences
    constexpr double g2 = 0.7548776662466927;
    constexpr double g3 = 0.5698402909980532;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Vec2> pts;
    pts.reserve(n_pos);
    for (std::size_t p = 0; p < n_pos; ++p) {
        const double k = static_cast<double>(p);
        const double u = frac(0.5 + k * g2), v = frac(0.5 + k * g3);
        switch (kset.kind()) {
            case Region::Kind::disk: {
                const double ang = two_pi * frac(k * g1);
                const double r = p % 2 == 0 ? kset.r_outer() : kset.r_outer() * std::sqrt(u);
                pts.push_back({kset.cx() + r * std::cos(ang), kset.cy() + r * std::sin(ang)});
                break;
            }
            case Region::Kind::annulus: {
                const double ang = two_pi * frac(k * g1);
                const double ri = kset.r_inner(), ro = kset.r_outer();
                double r = std::sqrt(ri * ri + u * (ro * ro - ri * ri));
                if (p % 3 == 0) r = ro;
                if (p % 3 == 1) r = ri;
                pts.push_back({kset.cx() + r * std::cos(ang), kset.cy() + r * std::sin(ang)});
                break;
            }
            case Region::Kind::rectangle: {
                const double w = kset.xmax() - kset.xmin(), h = kset.ymax() - kset.ymin();
                if (p % 2 == 0) {
                    double s = frac(k * g1) * 2.0 * (w + h);
                    Vec2 q;
                    if (s < w) {
                        q = {kset.xmin() + s, kset.ymin()};
                    } else if ((s -= w) < h) {
                        q = {kset.xmax(), kset.ymin() + s};
                    } else if ((s -= h) < w) {
                        q = {kset.xmax() - s, kset.ymax()};
                    } else {
                        q = {kset.xmin(), kset.ymax() - (s - w)};
                    }
                    pts.push_back(q);
                } else {
                    pts.push_back({kset.xmin() + u * w, kset.ymin() + v * h});
                }
                break;
            }
        }
    }
    return pts;
}

VisibilityReport check_visibility(const Region& kset, const Medium& m, const Region& omega, double T,
                                  const VisibilitySampling& sampling) {
    if (sampling.n_pos < 1 || sampling.n_dir < 1) throw ConfigError("visibility sampling counts must be positive");
    VisibilityReport report;
    const auto pts = sample_points(kset, sampling.n_pos);
    for (const Vec2& x : pts) {
        for (std::size_t q = 0; q < sampling.n_dir; ++q) {
            const double ang = 2.0 * std::numbers::pi * (static_cast<double>(q) + 0.5) / static_cast<double>(sampling.n_dir);
            const Vec2 d{std::cos(ang), std::sin(ang)};
            Tracer tr(m, omega, T, sampling.caps, true);
            tr.launch(x, d);
            report.min_transmitted_fraction = std::min(report.min_transmitted_fraction, tr.min_split);
            const VisibilitySample s{x, d, tr.graph.has_clean_exit()};
            report.samples.push_back(s);
            if (!s.covered) report.uncovered.push_back(s);
        }
    }
    report.visible = report.uncovered.empty();
    return report;
}

}  // namespace thermotomo
