#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ccm {

/// A named, uniformly sampled series of finite observations with at least two
/// samples. Only constructible through validate_series().
class TimeSeries {
public:
    const std::string& name() const noexcept { return name_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const noexcept { return values_[t]; }

    friend TimeSeries validate_series(std::vector<double> raw, std::string name);

private:
    TimeSeries(std::string name, std::vector<double> values)
        : name_(std::move(name)), values_(std::move(values)) {}

    std::string name_;
    std::vector<double> values_;
};

/// Throws NonFiniteValue(index) or Error(TooShort).
TimeSeries validate_series(std::vector<double> raw, std::string name);

struct EmbeddingParams {
    int E = 1;
    int tau = 1;

    /// Number of leading samples consumed by the lags, (E-1)*tau.
    std::size_t span() const noexcept {
        return static_cast<std::size_t>(E - 1) * static_cast<std::size_t>(tau);
    }

    friend bool operator==(const EmbeddingParams&, const EmbeddingParams&) = default;
    friend auto operator<=>(const EmbeddingParams&, const EmbeddingParams&) = default;
};

/// Lagged-coordinate reconstruction of one series. Point i has leading time
/// t = i + (E-1)*tau and coordinates (x_t, x_{t-tau}, ..., x_{t-(E-1)tau}).
class ShadowManifold {
public:
    const std::string& source() const noexcept { return source_; }
    EmbeddingParams params() const noexcept { return params_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(params_.E); }
    std::size_t size() const noexcept { return times_.size(); }

    std::span<const double> point(std::size_t i) const noexcept {
        return {coords_.data() + i * dim(), dim()};
    }
    std::span<const double> coordinates() const noexcept { return coords_; }
    std::span<const std::size_t> times() const noexcept { return times_; }
    std::size_t time(std::size_t i) const noexcept { return times_[i]; }

    friend ShadowManifold embed(const TimeSeries& series, EmbeddingParams params);

private:
    ShadowManifold() = default;

    std::string source_;
    EmbeddingParams params_;
    std::vector<double> coords_;  // row-major, size() x dim()
    std::vector<std::size_t> times_;
};

/// Throws Error(EmptyManifold) when (E-1)*tau >= N, Error(InvalidArgument)
/// when E or tau is below 1.
ShadowManifold embed(const TimeSeries& series, EmbeddingParams params);

/// Two-species coupled logistic map:
///   x' = x (3.8 - 3.8 x - betaYX y)
///   y' = y (3.5 - 3.5 y - betaXY x)
/// betaXY is the strength with which X drives Y. The first 100 iterates are
/// discarded. Returns (X, Y), each of length n.
std::pair<TimeSeries, TimeSeries> generate_coupled_logistic(std::size_t n, double betaXY,
                                                            double betaYX, std::uint64_t seed);

}  // namespace ccm
