#pragma once

#include "ccm/neighbor_index.hpp"
#include "ccm/timeseries.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ccm {

struct PearsonResult {
    double rho = 0.0;
    bool degenerate = false;  // either input had variance below 1e-15
};

/// Throws Error(LengthMismatch) or Error(TooFewPoints).
PearsonResult pearson(std::span<const double> a, std::span<const double> b);

/// Simplex projection weights for ascending neighbor distances:
/// u_i = exp(-d_i / d_1), w_i = u_i / sum(u). If d_1 == 0 the weight is spread
/// uniformly over the zero-distance neighbors.
std::vector<double> simplex_weights(std::span<const double> distances);
void simplex_weights(std::span<const double> distances, std::span<double> weights);

struct CrossMapResult {
    std::vector<double> predicted;
    std::vector<double> observed;
    std::vector<std::size_t> query_times;
    double rho = 0.0;
    bool degenerate = false;
};

/// Predicts `source` at each query time from the E+1 nearest library neighbors
/// of the target manifold point at that time. query_times are series times,
/// each must be a valid manifold time.
CrossMapResult cross_map(const TimeSeries& source, const ShadowManifold& target,
                         const NeighborSearch& search, const LibraryMask& mask,
                         std::span<const std::size_t> query_times);

CrossMapResult cross_map(const TimeSeries& source, const ShadowManifold& target,
                         const NeighborTable& table, const LibraryMask& mask,
                         std::span<const std::size_t> query_times);

}  // namespace ccm
