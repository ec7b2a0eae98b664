#pragma once

#include "ccm/timeseries.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ccm {

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Strict total order used everywhere neighbors are ranked: ascending distance,
/// ties broken by ascending point index.
constexpr bool neighbor_before(const Neighbor& a, const Neighbor& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

/// Euclidean distance. Both the table and the brute-force path go through this
/// function so that their distances are bit-identical.
double euclidean(std::span<const double> a, std::span<const double> b) noexcept;

/// Membership of manifold points in the current library subsample.
class LibraryMask {
public:
    LibraryMask() = default;
    /// All-false mask over `universe` points.
    explicit LibraryMask(std::size_t universe) : flags_(universe, 0) {}
    /// Throws InvalidArgument on out-of-range or repeated indices.
    LibraryMask(std::size_t universe, std::span<const std::size_t> members);

    static LibraryMask full(std::size_t universe);

    bool contains(std::size_t i) const noexcept { return flags_[i] != 0; }
    std::size_t size() const noexcept { return members_.size(); }
    std::size_t universe() const noexcept { return flags_.size(); }
    /// Ascending.
    const std::vector<std::size_t>& members() const noexcept { return members_; }

    void insert(std::size_t i);

private:
    void flag(std::size_t i);

    std::vector<std::uint8_t> flags_;
    std::vector<std::size_t> members_;
};

/// Precomputed distance indexing table: for every manifold point, all other
/// points in ascending distance order (ties by index). Immutable once built;
/// M*(M-1) entries.
class NeighborTable {
public:
    std::size_t size() const noexcept { return points_; }
    std::size_t row_length() const noexcept { return points_ == 0 ? 0 : points_ - 1; }
    std::size_t entry_count() const noexcept { return neighbors_.size(); }
    std::size_t memory_bytes() const noexcept {
        return neighbors_.size() * sizeof(std::uint32_t) + distances_.size() * sizeof(double);
    }

    std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
        return {neighbors_.data() + i * row_length(), row_length()};
    }
    std::span<const double> distances(std::size_t i) const noexcept {
        return {distances_.data() + i * row_length(), row_length()};
    }

    const std::string& source() const noexcept { return source_; }
    EmbeddingParams params() const noexcept { return params_; }

private:
    friend class NeighborTableBuilder;
    NeighborTable() = default;

    std::string source_;
    EmbeddingParams params_;
    std::size_t points_ = 0;
    std::vector<std::uint32_t> neighbors_;
    std::vector<double> distances_;
};

/// Fills table rows independently so construction can be split across
/// workers. Rows may be built in any order and from any thread as long as
/// each row is built exactly once before finish().
class NeighborTableBuilder {
public:
    /// Throws Error(ManifoldTooSmall) when the manifold has fewer than 2 points.
    explicit NeighborTableBuilder(const ShadowManifold& manifold);

    std::size_t rows() const noexcept { return table_.points_; }
    void build_rows(std::size_t begin, std::size_t end);
    NeighborTable finish() &&;

private:
    const ShadowManifold* manifold_;
    NeighborTable table_;
};

/// Sequential construction.
NeighborTable build_table(const ShadowManifold& manifold);

/// First k library members of the query's table row, excluding the query
/// itself. Throws Error(InsufficientNeighbors).
std::vector<Neighbor> knn_in_library(const NeighborTable& table, std::size_t query,
                                     const LibraryMask& mask, std::size_t k);
void knn_in_library(const NeighborTable& table, std::size_t query, const LibraryMask& mask,
                    std::size_t k, std::vector<Neighbor>& out);

/// Same contract as knn_in_library, computed from scratch: distances to all
/// library members followed by a full sort.
std::vector<Neighbor> naive_knn(const ShadowManifold& manifold, std::size_t query,
                                const LibraryMask& mask, std::size_t k);
void naive_knn(const ShadowManifold& manifold, std::size_t query, const LibraryMask& mask,
               std::size_t k, std::vector<Neighbor>& out);

/// Either lookup route behind one call site.
class NeighborSearch {
public:
    static NeighborSearch indexed(const NeighborTable& table) { return NeighborSearch(&table, nullptr); }
    static NeighborSearch brute_force(const ShadowManifold& manifold) {
        return NeighborSearch(nullptr, &manifold);
    }

    bool uses_table() const noexcept { return table_ != nullptr; }

    void find(std::size_t query, const LibraryMask& mask, std::size_t k,
              std::vector<Neighbor>& out) const {
        if (table_ != nullptr) {
            knn_in_library(*table_, query, mask, k, out);
        } else {
            naive_knn(*manifold_, query, mask, k, out);
        }
    }

private:
    NeighborSearch(const NeighborTable* table, const ShadowManifold* manifold)
        : table_(table), manifold_(manifold) {}

    const NeighborTable* table_;
    const ShadowManifold* manifold_;
};

}  // namespace ccm
