// Core geometry and field containers: structured 2D cell-centered grid with a
// one-cell ghost border, boundary face enumeration, small vector helpers.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// 2x2 tensor, row-major: t[r][c].
struct Mat2 {
    double xx = 0.0, xy = 0.0;
    double yx = 0.0, yy = 0.0;

    double trace() const { return xx + yy; }
    // Frobenius inner product A:B
    double contract(const Mat2& o) const {
        return xx * o.xx + xy * o.xy + yx * o.yx + yy * o.yy;
    }
    Mat2 sym() const {
        const double off = 0.5 * (xy + yx);
        return {xx, off, off, yy};
    }
};

// Rectangular cell-centered grid: domain [origin.x, origin.x + nx*dx] x
// [origin.y, origin.y + ny*dy], cells indexed (i,j), i fastest.
struct Grid {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    Vec2 origin{0.0, 0.0};

    Grid() = default;
    Grid(int nx_, int ny_, double dx_, double dy_, Vec2 org = {0.0, 0.0})
        : nx(nx_), ny(ny_), dx(dx_), dy(dy_), origin(org) {
        if (nx < 4 || ny < 4) throw std::invalid_argument("Grid: nx, ny must be >= 4");
        if (dx <= 0.0 || dy <= 0.0) throw std::invalid_argument("Grid: dx, dy must be > 0");
    }

    static Grid unit_square(int nx_, int ny_) {
        return Grid(nx_, ny_, 1.0 / nx_, 1.0 / ny_);
    }

    double lx() const { return nx * dx; }
    double ly() const { return ny * dy; }
    double cell_area() const { return dx * dy; }
    double xc(int i) const { return origin.x + (i + 0.5) * dx; }
    double yc(int j) const { return origin.y + (j + 0.5) * dy; }
    Vec2 center(int i, int j) const { return {xc(i), yc(j)}; }
    int cell_count() const { return nx * ny; }
};

// Scalar field on a Grid with one ghost layer; valid indices i in [-1, nx],
// j in [-1, ny].
class Field {
  public:
    Field() = default;
    explicit Field(const Grid& g, double init = 0.0)
        : nx_(g.nx), ny_(g.ny), data_((g.nx + 2) * (g.ny + 2), init) {}
    Field(int nx, int ny, double init = 0.0)
        : nx_(nx), ny_(ny), data_((nx + 2) * (ny + 2), init) {}

    double& operator()(int i, int j) { return data_[(j + 1) * (nx_ + 2) + (i + 1)]; }
    double operator()(int i, int j) const { return data_[(j + 1) * (nx_ + 2) + (i + 1)]; }

    int nx() const { return nx_; }
    int ny() const { return ny_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    // Interior extrema (ghosts excluded).
    double min_interior() const {
        double m = (*this)(0, 0);
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i) m = std::min(m, (*this)(i, j));
        return m;
    }
    double max_interior() const {
        double m = (*this)(0, 0);
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i) m = std::max(m, (*this)(i, j));
        return m;
    }

    // Interior cell sum in extended precision (budget sums must not drown in
    // round-off; mass-balance checks run at 1e-12 relative).
    double sum_interior() const {
        long double s = 0.0L;
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i) s += (*this)(i, j);
        return static_cast<double>(s);
    }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

  private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> data_;
};

enum class Side : int { Left = 0, Right = 1, Bottom = 2, Top = 3 };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Bottom: return "bottom";
        case Side::Top: return "top";
    }
    return "?";
}

// One boundary face of the rectangle: adjacent interior cell (i,j), face
// midpoint, outward normal, face length.
struct BoundaryFace {
    Side side;
    int i;
    int j;
    Vec2 pos;
    Vec2 normal;
    double length;
};

// Deterministic enumeration: left column bottom-up, right column bottom-up,
// bottom row left-right, top row left-right.
inline std::vector<BoundaryFace> boundary_faces(const Grid& g) {
    std::vector<BoundaryFace> faces;
    faces.reserve(2 * (g.nx + g.ny));
    for (int j = 0; j < g.ny; ++j)
        faces.push_back({Side::Left, 0, j, {g.origin.x, g.yc(j)}, {-1.0, 0.0}, g.dy});
    for (int j = 0; j < g.ny; ++j)
        faces.push_back({Side::Right, g.nx - 1, j, {g.origin.x + g.lx(), g.yc(j)}, {1.0, 0.0}, g.dy});
    for (int i = 0; i < g.nx; ++i)
        faces.push_back({Side::Bottom, i, 0, {g.xc(i), g.origin.y}, {0.0, -1.0}, g.dx});
    for (int i = 0; i < g.nx; ++i)
        faces.push_back({Side::Top, i, g.ny - 1, {g.xc(i), g.origin.y + g.ly()}, {0.0, 1.0}, g.dx});
    return faces;
}

// FNV-1a over bytes; used to stamp snapshots with the physics configuration.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
        h ^= p[k];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
    return fnv1a(s.data(), s.size(), h);
}

}  // namespace nsf
