#include "ccm/neighbor_index.hpp"

#include "ccm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ccm {

double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

LibraryMask::LibraryMask(std::size_t universe, std::span<const std::size_t> members)
    : flags_(universe, 0), members_(members.begin(), members.end()) {
    for (const auto i : members) {
        flag(i);
    }
    std::sort(members_.begin(), members_.end());
}

LibraryMask LibraryMask::full(std::size_t universe) {
    LibraryMask mask;
    mask.flags_.assign(universe, 1);
    mask.members_.resize(universe);
    std::iota(mask.members_.begin(), mask.members_.end(), std::size_t{0});
    return mask;
}

void LibraryMask::flag(std::size_t i) {
    if (i >= flags_.size()) {
        throw Error(Errc::InvalidArgument, "library index " + std::to_string(i) +
                                               " outside [0, " + std::to_string(flags_.size()) +
                                               ")");
    }
    if (flags_[i] != 0) {
        throw Error(Errc::InvalidArgument, "library index " + std::to_string(i) + " repeated");
    }
    flags_[i] = 1;
}

void LibraryMask::insert(std::size_t i) {
    flag(i);
    members_.insert(std::upper_bound(members_.begin(), members_.end(), i), i);
}

NeighborTableBuilder::NeighborTableBuilder(const ShadowManifold& manifold) : manifold_(&manifold) {
    const std::size_t m = manifold.size();
    if (m < 2) {
        throw Error(Errc::ManifoldTooSmall,
                    "a neighbor table needs at least 2 points, manifold has " + std::to_string(m));
    }
    if (m > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(Errc::InvalidArgument, "manifold too large for 32-bit neighbor indices");
    }
    table_.source_ = manifold.source();
    table_.params_ = manifold.params();
    table_.points_ = m;
    table_.neighbors_.resize(m * (m - 1));
    table_.distances_.resize(m * (m - 1));
}

void NeighborTableBuilder::build_rows(std::size_t begin, std::size_t end) {
    const std::size_t m = table_.points_;
    const std::size_t width = m - 1;
    std::vector<Neighbor> row;
    row.reserve(width);
    for (std::size_t i = begin; i < end; ++i) {
        row.clear();
        const auto query = manifold_->point(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) {
                row.push_back({j, euclidean(query, manifold_->point(j))});
            }
        }
        std::sort(row.begin(), row.end(), neighbor_before);
        auto* idx = table_.neighbors_.data() + i * width;
        auto* dist = table_.distances_.data() + i * width;
        for (std::size_t r = 0; r < width; ++r) {
            idx[r] = static_cast<std::uint32_t>(row[r].index);
            dist[r] = row[r].distance;
        }
    }
}

NeighborTable NeighborTableBuilder::finish() && { return std::move(table_); }

NeighborTable build_table(const ShadowManifold& manifold) {
    NeighborTableBuilder builder(manifold);
    builder.build_rows(0, builder.rows());
    return std::move(builder).finish();
}

namespace {

void check_query(std::size_t query, std::size_t points, const LibraryMask& mask, std::size_t k) {
    if (query >= points) {
        throw Error(Errc::InvalidArgument, "query index " + std::to_string(query) +
                                               " outside manifold of " + std::to_string(points) +
                                               " points");
    }
    if (mask.universe() != points) {
        throw Error(Errc::InvalidArgument, "library mask covers " +
                                               std::to_string(mask.universe()) +
                                               " points, manifold has " + std::to_string(points));
    }
    if (k == 0) {
        throw Error(Errc::InvalidArgument, "k must be >= 1");
    }
}

[[noreturn]] void insufficient(std::size_t query, std::size_t available, std::size_t k) {
    throw Error(Errc::InsufficientNeighbors, "query " + std::to_string(query) + " has " +
                                                 std::to_string(available) +
                                                 " library neighbors, " + std::to_string(k) +
                                                 " requested");
}

}  // namespace

void knn_in_library(const NeighborTable& table, std::size_t query, const LibraryMask& mask,
                    std::size_t k, std::vector<Neighbor>& out) {
    check_query(query, table.size(), mask, k);
    out.clear();
    const auto ids = table.neighbors(query);
    const auto dists = table.distances(query);
    for (std::size_t r = 0; r < ids.size() && out.size() < k; ++r) {
        if (mask.contains(ids[r])) {
            out.push_back({ids[r], dists[r]});
        }
    }
    if (out.size() < k) {
        insufficient(query, out.size(), k);
    }
}

std::vector<Neighbor> knn_in_library(const NeighborTable& table, std::size_t query,
                                     const LibraryMask& mask, std::size_t k) {
    std::vector<Neighbor> out;
    out.reserve(k);
    knn_in_library(table, query, mask, k, out);
    return out;
}

void naive_knn(const ShadowManifold& manifold, std::size_t query, const LibraryMask& mask,
               std::size_t k, std::vector<Neighbor>& out) {
    check_query(query, manifold.size(), mask, k);
    out.clear();
    const auto q = manifold.point(query);
    for (const std::size_t j : mask.members()) {
        if (j != query) {
            out.push_back({j, euclidean(q, manifold.point(j))});
        }
    }
    if (out.size() < k) {
        insufficient(query, out.size(), k);
    }
    // Full sort of every library distance, then keep the head.
    std::sort(out.begin(), out.end(), neighbor_before);
    out.resize(k);
}

std::vector<Neighbor> naive_knn(const ShadowManifold& manifold, std::size_t query,
                                const LibraryMask& mask, std::size_t k) {
    std::vector<Neighbor> out;
    naive_knn(manifold, query, mask, k, out);
    return out;
}

}  // namespace ccm
