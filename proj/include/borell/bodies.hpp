#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "ext_real.hpp"
#include "means.hpp"

namespace borell {

// Symmetric set of unit directions.  The first m/2 entries are generated, the
// second half is their exact negation, so neg_index(i) = (i + m/2) mod m holds
// bit-exactly.  Planar grids enumerate the angles 2 pi k / m in increasing
// order; higher-dimensional grids draw normalized Gaussian directions.
class DirectionGrid {
public:
    static std::shared_ptr<const DirectionGrid> planar(std::int64_t m);
    static std::shared_ptr<const DirectionGrid> sampled(std::size_t dim, std::int64_t m,
                                                        std::uint64_t seed);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dirs_.size(); }
    const std::vector<double>& direction(std::size_t i) const { return dirs_[i]; }
    std::size_t neg_index(std::size_t i) const { return (i + dirs_.size() / 2) % dirs_.size(); }
    std::uint64_t seed() const { return seed_; }

    bool same_grid(const DirectionGrid& other) const;

private:
    DirectionGrid() = default;
    std::size_t dim_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::vector<double>> dirs_;
};

// Positive, symmetric per-direction halfspace bounds h(u).  For a body built
// from a polytope this is its support function on the grid; a p-combination
// yields a valid halfspace-bound family that need not be a support function,
// and every consumer here only relies on the bound semantics.
class SupportBody {
public:
    SupportBody(std::shared_ptr<const DirectionGrid> grid, std::vector<double> values);

    const DirectionGrid& grid() const { return *grid_; }
    std::shared_ptr<const DirectionGrid> grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::shared_ptr<const DirectionGrid> grid_;
    std::vector<double> values_;
};

// Strictly convex-ordered vertex loop, counter-clockwise.
struct Polygon2D {
    std::vector<std::array<double, 2>> vertices;

    explicit Polygon2D(std::vector<std::array<double, 2>> v);
};

// Support values of the convex hull of a symmetric vertex set (validated
// symmetric within 1e-9 and full-dimensional).
SupportBody support_of_polytope(const std::vector<std::vector<double>>& vertices,
                                std::shared_ptr<const DirectionGrid> grid);

// Per-direction power-mean combination M_p^lambda(h_K(u), h_L(u)), p in [0, 1].
SupportBody p_combination(const Weight& lambda, const ExtReal& p, const SupportBody& K,
                          const SupportBody& L);

// Planar halfplane intersection of { <x,u> <= h(u) }: sorted-by-angle deque
// sweep, O(m log m).  Angle ties keep the smaller offset.
Polygon2D wulff_polygon(const SupportBody& body);

// Same sweep over raw constraint rows {nx, ny, h} meaning <x,n> <= h; rows are
// normalized internally, so n need not be unit length.
Polygon2D halfplane_intersection(const std::vector<std::array<double, 3>>& constraints);

double polygon_area(const Polygon2D& poly);

// Membership with fixed slack 1e-12: <x,u> <= h(u) + 1e-12 for every grid direction.
bool membership(const std::vector<double>& x, const SupportBody& body);

// Axis-aligned sampling box half-widths: support value at the grid direction
// nearest each coordinate axis.
std::vector<double> bounding_halfwidths(const SupportBody& body);

struct McVolume {
    double estimate = 0.0;
    double stderr_estimate = 0.0;
    std::int64_t samples = 0;
};

// Monte Carlo volume of the membership region inside the bounding box.  Sample
// indices are partitioned into fixed blocks with per-block derived seeds, so
// the result depends only on (seed, n_samples).
McVolume mc_volume(const SupportBody& body, std::int64_t n_samples, std::uint64_t seed);

// Symmetric random polygon: k direction/radius draws in [0.5, 2], symmetrized,
// convex hull.  Used by the planar conjecture sweeps.
Polygon2D random_symmetric_polygon(std::int64_t k, std::uint64_t seed);

std::vector<std::vector<double>> polygon_vertex_list(const Polygon2D& poly);

}  // namespace borell
