#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace thermotomo {

/// Uniform isotropic 2-D lattice. Node (i, j) sits at (ox + i*h, oy + j*h);
/// storage is row-major with i (the x index) varying fastest.
struct Grid {
    std::size_t nx = 3;
    std::size_t ny = 3;
    double h = 1.0;
    double ox = 0.0;
    double oy = 0.0;

    Grid() = default;
    Grid(std::size_t nx, std::size_t ny, double h, double ox = 0.0, double oy = 0.0);

    std::size_t size() const noexcept { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx + i; }
    std::size_t col(std::size_t idx) const noexcept { return idx % nx; }
    std::size_t row(std::size_t idx) const noexcept { return idx / nx; }
    double x(std::size_t i) const noexcept { return ox + static_cast<double>(i) * h; }
    double y(std::size_t j) const noexcept { return oy + static_cast<double>(j) * h; }
    double x_max() const noexcept { return x(nx - 1); }
    double y_max() const noexcept { return y(ny - 1); }
    bool on_outer_ring(std::size_t i, std::size_t j) const noexcept {
        return i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
    }
    bool contains_point(double px, double py) const noexcept;

    bool operator==(const Grid&) const = default;
};

/// Real field sampled on every node of a grid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double value = 0.0);
    /// Throws ConfigError if the size does not match or any value is non-finite.
    ScalarField(const Grid& g, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator[](std::size_t idx) noexcept { return data_[idx]; }
    double operator[](std::size_t idx) const noexcept { return data_[idx]; }
    double& at(std::size_t i, std::size_t j) noexcept { return data_[grid_.index(i, j)]; }
    double at(std::size_t i, std::size_t j) const noexcept { return data_[grid_.index(i, j)]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    void fill(double v);
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s) noexcept;
    /// this += s * other
    ScalarField& axpy(double s, const ScalarField& other);

private:
    Grid grid_;
    std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Throws ConfigError when the two grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// [u, u_t] at one time level.
struct WaveState {
    ScalarField u;
    ScalarField ut;

    WaveState() = default;
    explicit WaveState(const Grid& g) : u(g), ut(g) {}
    WaveState(ScalarField u0, ScalarField ut0);

    const Grid& grid() const noexcept { return u.grid(); }
};

/// Rasterized subset of the grid: disjoint interior and boundary node sets.
///
/// Rectangles are index-aligned (boundary = the node ring of the box, listed
/// counter-clockwise from the lower-left corner). Disks and annuli use the
/// nodes within h/2 of a circle as boundary and the nodes strictly inside as
/// interior; their boundary lists are in ascending node order.
class Region {
public:
    enum class Kind { rectangle, disk, annulus };
    enum class Label : std::uint8_t { outside = 0, interior = 1, boundary = 2 };

    /// Empty placeholder; use the factories below.
    Region() = default;

    static Region rectangle(const Grid& g, std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1);
    static Region disk(const Grid& g, double cx, double cy, double radius);
    static Region annulus(const Grid& g, double cx, double cy, double r_inner, double r_outer);

    Kind kind() const noexcept { return kind_; }
    const Grid& grid() const noexcept { return grid_; }

    const std::vector<std::size_t>& interior() const noexcept { return interior_; }
    const std::vector<std::size_t>& boundary() const noexcept { return boundary_; }
    Label label(std::size_t idx) const noexcept { return labels_[idx]; }
    std::span<const Label> labels() const noexcept { return labels_; }
    bool is_interior(std::size_t idx) const noexcept { return labels_[idx] == Label::interior; }
    bool is_boundary(std::size_t idx) const noexcept { return labels_[idx] == Label::boundary; }
    bool contains(std::size_t idx) const noexcept { return labels_[idx] != Label::outside; }
    std::size_t node_count() const noexcept { return interior_.size() + boundary_.size(); }

    // Shape parameters. Rectangle: index range (inclusive) and its physical
    // extent. Disk/annulus: center and radii (r_inner = 0 for a disk).
    std::size_t i0() const noexcept { return i0_; }
    std::size_t j0() const noexcept { return j0_; }
    std::size_t i1() const noexcept { return i1_; }
    std::size_t j1() const noexcept { return j1_; }
    double xmin() const noexcept;
    double xmax() const noexcept;
    double ymin() const noexcept;
    double ymax() const noexcept;
    double cx() const noexcept { return cx_; }
    double cy() const noexcept { return cy_; }
    double r_inner() const noexcept { return r_inner_; }
    double r_outer() const noexcept { return r_outer_; }

    /// Exact (unrasterized) membership of a physical point in the closed shape.
    bool contains_point(double x, double y) const noexcept;

    /// Same region on another grid: rectangles are re-snapped by physical extent.
    Region on(const Grid& g) const;

private:
    void finalize();

    Kind kind_ = Kind::rectangle;
    Grid grid_;
    std::size_t i0_ = 0, j0_ = 0, i1_ = 0, j1_ = 0;
    double cx_ = 0.0, cy_ = 0.0, r_inner_ = 0.0, r_outer_ = 0.0;
    std::vector<Label> labels_;
    std::vector<std::size_t> interior_;
    std::vector<std::size_t> boundary_;
};

}  // namespace thermotomo
