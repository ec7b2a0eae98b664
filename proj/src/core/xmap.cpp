#include "ccm/xmap.hpp"

#include "ccm/error.hpp"

#include <algorithm>
#include <cmath>

namespace ccm {

namespace {

constexpr double kMinVariance = 1e-15;

}  // namespace

PearsonResult pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(Errc::LengthMismatch, "pearson inputs have lengths " +
                                              std::to_string(a.size()) + " and " +
                                              std::to_string(b.size()));
    }
    const std::size_t n = a.size();
    if (n < 2) {
        throw Error(Errc::TooFewPoints, "pearson needs at least 2 pairs");
    }
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);

    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    // Variances are compared per sample so the flag does not depend on n.
    const auto count = static_cast<double>(n);
    if (saa / count < kMinVariance || sbb / count < kMinVariance) {
        return {0.0, true};
    }
    const double rho = sab / std::sqrt(saa * sbb);
    return {std::clamp(rho, -1.0, 1.0), false};
}

void simplex_weights(std::span<const double> distances, std::span<double> weights) {
    const std::size_t k = distances.size();
    if (k == 0) {
        return;
    }
    const double nearest = distances[0];
    if (nearest == 0.0) {
        std::size_t zeros = 0;
        for (const double d : distances) {
            zeros += d == 0.0 ? 1 : 0;
        }
        const double share = 1.0 / static_cast<double>(zeros);
        for (std::size_t i = 0; i < k; ++i) {
            weights[i] = distances[i] == 0.0 ? share : 0.0;
        }
        return;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        weights[i] = std::exp(-distances[i] / nearest);
        total += weights[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
        weights[i] /= total;
    }
}

std::vector<double> simplex_weights(std::span<const double> distances) {
    std::vector<double> w(distances.size());
    simplex_weights(distances, w);
    return w;
}

CrossMapResult cross_map(const TimeSeries& source, const ShadowManifold& target,
                         const NeighborSearch& search, const LibraryMask& mask,
                         std::span<const std::size_t> query_times) {
    const std::size_t offset = target.params().span();
    const std::size_t k = target.dim() + 1;
    if (source.size() < offset + target.size()) {
        throw Error(Errc::LengthMismatch, "source series shorter than the target manifold's times");
    }

    CrossMapResult result;
    result.predicted.reserve(query_times.size());
    result.observed.reserve(query_times.size());
    result.query_times.assign(query_times.begin(), query_times.end());

    std::vector<Neighbor> neighbors;
    std::vector<double> dists(k);
    std::vector<double> weights(k);
    for (const std::size_t t : query_times) {
        if (t < offset || t - offset >= target.size()) {
            throw Error(Errc::InvalidArgument,
                        "query time " + std::to_string(t) + " is not a manifold time");
        }
        search.find(t - offset, mask, k, neighbors);
        for (std::size_t i = 0; i < k; ++i) {
            dists[i] = neighbors[i].distance;
        }
        simplex_weights(dists, weights);
        double estimate = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            estimate += weights[i] * source[target.time(neighbors[i].index)];
        }
        result.predicted.push_back(estimate);
        result.observed.push_back(source[t]);
    }

    if (result.predicted.size() >= 2) {
        const auto skill = pearson(result.observed, result.predicted);
        result.rho = skill.rho;
        result.degenerate = skill.degenerate;
    } else {
        result.degenerate = true;
    }
    return result;
}

CrossMapResult cross_map(const TimeSeries& source, const ShadowManifold& target,
                         const NeighborTable& table, const LibraryMask& mask,
                         std::span<const std::size_t> query_times) {
    return cross_map(source, target, NeighborSearch::indexed(table), mask, query_times);
}

}  // namespace ccm
