#include "thermotomo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermotomo/errors.hpp"

namespace thermotomo {

Grid::Grid(std::size_t nx_, std::size_t ny_, double h_, double ox_, double oy_)
    : nx(nx_), ny(ny_), h(h_), ox(ox_), oy(oy_) {
    if (nx < 3 || ny < 3) {
        throw ConfigError("grid needs at least 3x3 nodes, got " + std::to_string(nx) + "x" + std::to_string(ny));
    }
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid spacing must be positive and finite");
    if (!std::isfinite(ox) || !std::isfinite(oy)) throw ConfigError("grid origin must be finite");
}

bool Grid::contains_point(double px, double py) const noexcept {
    return px >= ox && px <= x_max() && py >= oy && py <= y_max();
}

ScalarField::ScalarField(const Grid& g, double value) : grid_(g), data_(g.size(), value) {}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid_(g), data_(std::move(values)) {
    if (data_.size() != grid_.size()) {
        throw ConfigError("field has " + std::to_string(data_.size()) + " values, grid needs " +
                          std::to_string(grid_.size()));
    }
    if (!all_finite()) throw ConfigError("field contains non-finite values");
}

void ScalarField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double ScalarField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) { return axpy(1.0, other); }

ScalarField& ScalarField::operator-=(const ScalarField& other) { return axpy(-1.0, other); }

ScalarField& ScalarField::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "ScalarField arithmetic");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) throw ConfigError(std::string(where) + ": grid mismatch");
}

WaveState::WaveState(ScalarField u0, ScalarField ut0) : u(std::move(u0)), ut(std::move(ut0)) {
    require_same_grid(u.grid(), ut.grid(), "WaveState");
}

// ---------------------------------------------------------------------------
// Region

Region Region::rectangle(const Grid& g, std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    if (i0 == 0 || j0 == 0 || i1 + 1 >= g.nx || j1 + 1 >= g.ny) {
        throw ConfigError("rectangle region must lie strictly inside the grid");
    }
    if (i1 < i0 + 2 || j1 < j0 + 2) {
        throw ConfigError("rectangle region needs at least one interior node");
    }
    Region r;
    r.kind_ = Kind::rectangle;
    r.grid_ = g;
    r.i0_ = i0;
    r.j0_ = j0;
    r.i1_ = i1;
    r.j1_ = j1;
    r.labels_.assign(g.size(), Label::outside);
    for (std::size_t j = j0; j <= j1; ++j) {
        for (std::size_t i = i0; i <= i1; ++i) {
            const bool edge = i == i0 || i == i1 || j == j0 || j == j1;
            r.labels_[g.index(i, j)] = edge ? Label::boundary : Label::interior;
            if (!edge) r.interior_.push_back(g.index(i, j));
        }
    }
    // counter-clockwise ring starting at (i0, j0)
    for (std::size_t i = i0; i < i1; ++i) r.boundary_.push_back(g.index(i, j0));
    for (std::size_t j = j0; j < j1; ++j) r.boundary_.push_back(g.index(i1, j));
    for (std::size_t i = i1; i > i0; --i) r.boundary_.push_back(g.index(i, j1));
    for (std::size_t j = j1; j > j0; --j) r.boundary_.push_back(g.index(i0, j));
    return r;
}

Region Region::disk(const Grid& g, double cx, double cy, double radius) {
    if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
    Region r;
    r.kind_ = Kind::disk;
    r.grid_ = g;
    r.cx_ = cx;
    r.cy_ = cy;
    r.r_inner_ = 0.0;
    r.r_outer_ = radius;
    r.finalize();
    return r;
}

Region Region::annulus(const Grid& g, double cx, double cy, double r_inner, double r_outer) {
    if (!(r_inner > 0.0) || !(r_outer > r_inner)) throw ConfigError("annulus needs 0 < r_inner < r_outer");
    Region r;
    r.kind_ = Kind::annulus;
    r.grid_ = g;
    r.cx_ = cx;
    r.cy_ = cy;
    r.r_inner_ = r_inner;
    r.r_outer_ = r_outer;
    r.finalize();
    return r;
}

void Region::finalize() {
    const Grid& g = grid_;
    const double half = 0.5 * g.h;
    labels_.assign(g.size(), Label::outside);
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double d = std::hypot(g.x(i) - cx_, g.y(j) - cy_);
            Label lab = Label::outside;
            if (std::abs(d - r_outer_) <= half || (kind_ == Kind::annulus && std::abs(d - r_inner_) <= half)) {
                lab = Label::boundary;
            } else if (d < r_outer_ && d > r_inner_) {
                lab = Label::interior;
            }
            if (lab != Label::outside && g.on_outer_ring(i, j)) {
                throw ConfigError("region must lie strictly inside the grid");
            }
            labels_[g.index(i, j)] = lab;
            if (lab == Label::interior) interior_.push_back(g.index(i, j));
            if (lab == Label::boundary) boundary_.push_back(g.index(i, j));
        }
    }
    if (boundary_.empty()) throw ConfigError("region has no boundary nodes");
    i0_ = g.nx;
    j0_ = g.ny;
    for (std::size_t idx : boundary_) {
        i0_ = std::min(i0_, g.col(idx));
        j0_ = std::min(j0_, g.row(idx));
        i1_ = std::max(i1_, g.col(idx));
        j1_ = std::max(j1_, g.row(idx));
    }
}

double Region::xmin() const noexcept { return kind_ == Kind::rectangle ? grid_.x(i0_) : cx_ - r_outer_; }
double Region::xmax() const noexcept { return kind_ == Kind::rectangle ? grid_.x(i1_) : cx_ + r_outer_; }
double Region::ymin() const noexcept { return kind_ == Kind::rectangle ? grid_.y(j0_) : cy_ - r_outer_; }
double Region::ymax() const noexcept { return kind_ == Kind::rectangle ? grid_.y(j1_) : cy_ + r_outer_; }

bool Region::contains_point(double x, double y) const noexcept {
    if (kind_ == Kind::rectangle) return x >= xmin() && x <= xmax() && y >= ymin() && y <= ymax();
    const double d = std::hypot(x - cx_, y - cy_);
    return d <= r_outer_ && d >= r_inner_;
}

Region Region::on(const Grid& g) const {
    switch (kind_) {
        case Kind::disk:
            return disk(g, cx_, cy_, r_outer_);
        case Kind::annulus:
            return annulus(g, cx_, cy_, r_inner_, r_outer_);
        case Kind::rectangle:
            break;
    }
    auto snap = [&](double v, double o) {
        const double k = std::round((v - o) / g.h);
        if (k < 0.0) throw ConfigError("rectangle does not fit the target grid");
        return static_cast<std::size_t>(k);
    };
    return rectangle(g, snap(xmin(), g.ox), snap(ymin(), g.oy), snap(xmax(), g.ox), snap(ymax(), g.oy));
}

}  // namespace thermotomo
