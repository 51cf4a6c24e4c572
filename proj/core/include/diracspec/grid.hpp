#pragma once

#include <array>
#include <cstddef>

namespace dirac {

struct ProblemSpec;

inline constexpr int kSegments = 3;

/// Uniform nodes on one closed segment [x0, x1]; `steps` is always even so that
/// composite Simpson applies without end corrections.
struct SegmentGrid {
    double x0 = 0.0;
    double x1 = 0.0;
    int steps = 0;

    double h() const { return (x1 - x0) / steps; }
    double node(int k) const { return k == steps ? x1 : x0 + k * h(); }
    int size() const { return steps + 1; }

    friend bool operator==(const SegmentGrid&, const SegmentGrid&) = default;
};

/// Shared abscissae for trajectories, quadrature and resolvent sums.
struct Grid {
    std::array<SegmentGrid, kSegments> segments{};

    const SegmentGrid& operator[](int i) const { return segments[static_cast<std::size_t>(i)]; }
    std::size_t node_count() const {
        std::size_t n = 0;
        for (const auto& s : segments) n += static_cast<std::size_t>(s.size());
        return n;
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct GridOptions {
    /// Minimum number of RK4 steps (and Simpson intervals) per segment.
    int steps_per_segment = 2048;
    /// Steps per oscillation wavelength 2*pi/(rho_i*|lambda|); never below 20.
    int steps_per_wavelength = 1024;
};

/// Builds the integration grid valid for every |lambda| <= lambda_bound.
///
/// Segment i gets n_i = max(steps_per_segment, ceil(len_i / h_cap)) steps with
/// h_cap = min(len_i / 512, 2*pi / (W * rho_i * max(1, lambda_bound))), rounded up
/// to an even count. Fixing the grid for a whole window keeps char_delta a smooth
/// function of lambda inside that window.
Grid make_grid(const ProblemSpec& spec, double lambda_bound, const GridOptions& options = {});

}  // namespace dirac
