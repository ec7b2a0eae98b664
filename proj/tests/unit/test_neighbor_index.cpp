#include "ccm/error.hpp"
#include "ccm/neighbor_index.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace ccm;

namespace {

ShadowManifold line_manifold(std::vector<double> values) {
    return embed(validate_series(std::move(values), "p"), {1, 1});
}

ShadowManifold random_manifold(std::mt19937_64& rng, std::size_t n, int E, bool with_ties) {
    std::vector<double> raw(n);
    if (with_ties) {
        std::uniform_int_distribution<int> small(0, 3);
        for (auto& v : raw) {
            v = small(rng);
        }
    } else {
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& v : raw) {
            v = g(rng);
        }
    }
    return embed(validate_series(raw, "r"), {E, 1});
}

// Oracle: all pairwise distances, computed here, sorted by (distance, index).
std::vector<Neighbor> brute_force_row(const ShadowManifold& m, std::size_t i,
                                      const std::vector<bool>* member = nullptr) {
    std::vector<Neighbor> row;
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (j == i || (member != nullptr && !(*member)[j])) {
            continue;
        }
        double ss = 0.0;
        for (std::size_t d = 0; d < m.dim(); ++d) {
            const double diff = m.point(i)[d] - m.point(j)[d];
            ss += diff * diff;
        }
        row.push_back({j, std::sqrt(ss)});
    }
    std::stable_sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance;
    });
    return row;
}

LibraryMask random_mask(std::mt19937_64& rng, std::size_t universe, std::size_t size) {
    std::vector<std::size_t> idx(universe);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(size);
    return LibraryMask(universe, idx);
}

}  // namespace

TEST(NeighborTable, HandCheckedRow) {
    const auto m = line_manifold({0, 1, 3, 7});
    const auto t = build_table(m);
    ASSERT_EQ(t.row_length(), 3u);
    const auto ids = t.neighbors(0);
    const auto ds = t.distances(0);
    EXPECT_EQ(std::vector<std::uint32_t>(ids.begin(), ids.end()),
              (std::vector<std::uint32_t>{1, 2, 3}));
    EXPECT_EQ(std::vector<double>(ds.begin(), ds.end()), (std::vector<double>{1, 3, 7}));
}

TEST(NeighborTable, TiesBrokenByLowerIndex) {
    const auto m = line_manifold({0, 2, 4});
    const auto t = build_table(m);
    const auto ids = t.neighbors(1);
    const auto ds = t.distances(1);
    EXPECT_EQ(std::vector<std::uint32_t>(ids.begin(), ids.end()),
              (std::vector<std::uint32_t>{0, 2}));
    EXPECT_EQ(std::vector<double>(ds.begin(), ds.end()), (std::vector<double>{2, 2}));
}

TEST(NeighborTable, MatchesBruteForceSort) {
    std::mt19937_64 rng(3);
    const auto m = random_manifold(rng, 202, 3, false);
    ASSERT_EQ(m.size(), 200u);
    const auto t = build_table(m);
    EXPECT_EQ(t.entry_count(), 200u * 199u);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto expected = brute_force_row(m, i);
        const auto ids = t.neighbors(i);
        const auto ds = t.distances(i);
        ASSERT_EQ(ids.size(), expected.size());
        for (std::size_t r = 0; r < ids.size(); ++r) {
            ASSERT_EQ(ids[r], expected[r].index) << "row " << i << " rank " << r;
            ASSERT_NEAR(ds[r], expected[r].distance, 1e-12);
        }
    }
}

TEST(NeighborTable, RowInvariants) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_manifold(rng, 10 + rng() % 60, 1 + static_cast<int>(rng() % 4),
                                       trial % 2 == 0);
        const auto t = build_table(m);
        ASSERT_EQ(t.entry_count(), m.size() * (m.size() - 1));
        for (std::size_t i = 0; i < m.size(); ++i) {
            auto ids = std::vector<std::uint32_t>(t.neighbors(i).begin(), t.neighbors(i).end());
            const auto ds = t.distances(i);
            ASSERT_TRUE(std::is_sorted(ds.begin(), ds.end()));
            for (std::size_t r = 1; r < ids.size(); ++r) {
                if (ds[r] == ds[r - 1]) {
                    ASSERT_LT(ids[r - 1], ids[r]);
                }
            }
            std::sort(ids.begin(), ids.end());
            for (std::size_t j = 0, r = 0; j < m.size(); ++j) {
                if (j != i) {
                    ASSERT_EQ(ids[r++], j);
                }
            }
        }
    }
}

TEST(NeighborTable, BuildIsDeterministicAndOrderIndependent) {
    std::mt19937_64 rng(9);
    const auto m = random_manifold(rng, 150, 2, true);
    const auto a = build_table(m);
    NeighborTableBuilder builder(m);
    // Reverse chunk order, as an out-of-order parallel build would.
    for (std::size_t end = builder.rows(); end > 0;) {
        const std::size_t begin = end >= 7 ? end - 7 : 0;
        builder.build_rows(begin, end);
        end = begin;
    }
    const auto b = std::move(builder).finish();
    for (std::size_t i = 0; i < m.size(); ++i) {
        ASSERT_TRUE(std::equal(a.neighbors(i).begin(), a.neighbors(i).end(), b.neighbors(i).begin()));
        ASSERT_TRUE(std::equal(a.distances(i).begin(), a.distances(i).end(), b.distances(i).begin()));
    }
}

TEST(NeighborTable, TooSmall) {
    const auto m = embed(validate_series({1.0, 2.0}, "s"), {2, 1});
    ASSERT_EQ(m.size(), 1u);
    try {
        build_table(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ManifoldTooSmall);
    }
}

TEST(KnnInLibrary, HandCheckedQuery) {
    const auto m = line_manifold({0, 1, 3, 7});
    const auto t = build_table(m);
    const std::vector<std::size_t> members{1, 2};
    const LibraryMask mask(4, members);
    const auto expected = std::vector<Neighbor>{{1, 1.0}, {2, 3.0}};
    EXPECT_EQ(knn_in_library(t, 0, mask, 2), expected);
    EXPECT_EQ(naive_knn(m, 0, mask, 2), expected);
}

TEST(KnnInLibrary, SelfIsNeverItsOwnNeighbor) {
    const auto m = line_manifold({0, 1, 3, 7});
    const auto t = build_table(m);
    const std::vector<std::size_t> only_self{0};
    const LibraryMask mask(4, only_self);
    for (const auto& call : {+[](const NeighborTable& tt, const ShadowManifold&, const LibraryMask& mm) {
                                 return knn_in_library(tt, 0, mm, 1);
                             },
                             +[](const NeighborTable&, const ShadowManifold& ms, const LibraryMask& mm) {
                                 return naive_knn(ms, 0, mm, 1);
                             }}) {
        try {
            call(t, m, mask);
            FAIL() << "expected InsufficientNeighbors";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::InsufficientNeighbors);
        }
    }
}

TEST(KnnInLibrary, KLargerThanLibrary) {
    const auto m = line_manifold({0, 1, 3, 7, 9});
    const auto t = build_table(m);
    const std::vector<std::size_t> members{1, 2, 3};
    const LibraryMask mask(5, members);
    EXPECT_THROW(naive_knn(m, 0, mask, 4), Error);
    EXPECT_THROW(knn_in_library(t, 0, mask, 4), Error);
    EXPECT_EQ(knn_in_library(t, 0, mask, 3).size(), 3u);
}

TEST(KnnInLibrary, MatchesBruteForceOverMaskedPoints) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const int E = 1 + static_cast<int>(rng() % 4);
        const auto m = random_manifold(rng, 40 + rng() % 100, E, false);
        const auto t = build_table(m);
        const std::size_t L = static_cast<std::size_t>(E) + 2 + rng() % (m.size() - E - 2);
        const auto mask = random_mask(rng, m.size(), L);
        std::vector<bool> member(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            member[i] = mask.contains(i);
        }
        const std::size_t k = static_cast<std::size_t>(E) + 1;
        for (std::size_t q = 0; q < m.size(); ++q) {
            auto expected = brute_force_row(m, q, &member);
            expected.resize(k);
            const auto got = knn_in_library(t, q, mask, k);
            ASSERT_EQ(got.size(), k);
            for (std::size_t r = 0; r < k; ++r) {
                ASSERT_EQ(got[r].index, expected[r].index);
                ASSERT_NEAR(got[r].distance, expected[r].distance, 1e-12);
            }
        }
    }
}

// Both routes share one distance function and one tie rule, so they agree
// exactly, including on heavily tied integer data.
TEST(KnnInLibrary, PropertyIndexedEqualsNaive) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const int E = 1 + static_cast<int>(rng() % 5);
        const auto m = random_manifold(rng, 30 + rng() % 90, E, trial % 3 == 0);
        const auto t = build_table(m);
        const std::size_t L = static_cast<std::size_t>(E) + 2 + rng() % (m.size() - E - 2);
        const auto mask = random_mask(rng, m.size(), L);
        const std::size_t k = static_cast<std::size_t>(E) + 1;
        for (std::size_t q = 0; q < m.size(); ++q) {
            const auto a = knn_in_library(t, q, mask, k);
            const auto b = naive_knn(m, q, mask, k);
            ASSERT_EQ(a, b);
            for (std::size_t r = 0; r < a.size(); ++r) {
                ASSERT_NE(a[r].index, q);
                ASSERT_TRUE(mask.contains(a[r].index));
                if (r > 0) {
                    ASSERT_LE(a[r - 1].distance, a[r].distance);
                }
            }
        }
    }
}

TEST(LibraryMask, CountsAndRejectsBadMembers) {
    const std::vector<std::size_t> members{0, 3, 4};
    const LibraryMask mask(6, members);
    EXPECT_EQ(mask.size(), 3u);
    EXPECT_EQ(mask.universe(), 6u);
    EXPECT_EQ(mask.members(), members);
    const std::vector<std::size_t> repeated{1, 1};
    EXPECT_THROW(LibraryMask(6, repeated), Error);
    const std::vector<std::size_t> outside{6};
    EXPECT_THROW(LibraryMask(6, outside), Error);
    EXPECT_EQ(LibraryMask::full(5).size(), 5u);
}
