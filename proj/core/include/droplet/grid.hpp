#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "droplet/errors.hpp"

namespace droplet {

using Complex = std::complex<double>;

/// Uniform cell-centered grid on the square [-L, L]^2.
/// Node (ix, iy) sits at (-L + (ix + 1/2) h, -L + (iy + 1/2) h) with
/// h = 2L / M. Values are stored row-major, im-major / re-minor:
/// index = iy * M + ix.
class BoxGrid {
  public:
    BoxGrid(double half_width, int nodes_per_side);

    double half_width() const { return half_width_; }
    int nodes_per_side() const { return m_; }
    double spacing() const { return h_; }
    std::size_t node_count() const { return std::size_t(m_) * m_; }

    double x(int ix) const { return -half_width_ + (ix + 0.5) * h_; }
    double y(int iy) const { return -half_width_ + (iy + 0.5) * h_; }
    Complex node(int ix, int iy) const { return {x(ix), y(iy)}; }
    Complex node(std::size_t idx) const {
        return node(int(idx % m_), int(idx / m_));
    }
    std::size_t index(int ix, int iy) const {
        return std::size_t(iy) * m_ + ix;
    }

    /// Nearest node indices for a point; throws DomainError outside the box.
    std::pair<int, int> locate(Complex z) const;
    bool contains(Complex z) const;

    bool operator==(const BoxGrid& o) const {
        return half_width_ == o.half_width_ && m_ == o.m_;
    }

  private:
    double half_width_;
    int m_;
    double h_;
};

/// Grid-sampled real function.
struct ScalarField {
    BoxGrid grid;
    std::vector<double> values; // size M^2, row-major (im-major, re-minor)

    explicit ScalarField(const BoxGrid& g, double fill = 0.0)
        : grid(g), values(g.node_count(), fill) {}

    double& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    double at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
};

/// Nonnegative weights per grid cell; total() = h^2 * sum of weights.
struct DiscreteMeasure {
    BoxGrid grid;
    std::vector<double> weights; // density per unit area at each node

    explicit DiscreteMeasure(const BoxGrid& g)
        : grid(g), weights(g.node_count(), 0.0) {}

    double total() const;
};

/// ScalarField persistence (.f64): one-line JSON header
/// {"half_width":..,"nodes_per_side":..,"dtype":"f64-le"}, then a raw
/// little-endian float64 block in row-major (im-major, re-minor) order.
void write_field(const std::string& path, const ScalarField& field);
ScalarField read_field(const std::string& path);

} // namespace droplet
