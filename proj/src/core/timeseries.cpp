#include "ccm/timeseries.hpp"

#include "ccm/error.hpp"
#include "ccm/rng.hpp"

#include <cmath>

namespace ccm {

namespace {

constexpr std::size_t kTransientSteps = 100;
constexpr std::size_t kMinLogisticLength = 100;

}  // namespace

TimeSeries validate_series(std::vector<double> raw, std::string name) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw NonFiniteValue(i);
        }
    }
    if (raw.size() < 2) {
        throw Error(Errc::TooShort, "series '" + name + "' has " + std::to_string(raw.size()) +
                                        " values, at least 2 required");
    }
    return TimeSeries(std::move(name), std::move(raw));
}

ShadowManifold embed(const TimeSeries& series, EmbeddingParams params) {
    if (params.E < 1 || params.tau < 1) {
        throw Error(Errc::InvalidArgument, "E and tau must be >= 1 (got E=" +
                                               std::to_string(params.E) +
                                               ", tau=" + std::to_string(params.tau) + ")");
    }
    const std::size_t n = series.size();
    const std::size_t offset = params.span();
    if (offset >= n) {
        throw Error(Errc::EmptyManifold, "(E-1)*tau = " + std::to_string(offset) +
                                             " leaves no points in a series of length " +
                                             std::to_string(n));
    }

    ShadowManifold m;
    m.source_ = series.name();
    m.params_ = params;
    const std::size_t points = n - offset;
    const auto dim = static_cast<std::size_t>(params.E);
    const auto tau = static_cast<std::size_t>(params.tau);
    m.coords_.resize(points * dim);
    m.times_.resize(points);
    const auto x = series.values();
    for (std::size_t i = 0; i < points; ++i) {
        const std::size_t t = i + offset;
        m.times_[i] = t;
        for (std::size_t lag = 0; lag < dim; ++lag) {
            m.coords_[i * dim + lag] = x[t - lag * tau];
        }
    }
    return m;
}

std::pair<TimeSeries, TimeSeries> generate_coupled_logistic(std::size_t n, double betaXY,
                                                            double betaYX, std::uint64_t seed) {
    if (n < kMinLogisticLength) {
        throw Error(Errc::InvalidArgument,
                    "coupled logistic series needs n >= 100, got " + std::to_string(n));
    }
    if (!(betaXY >= 0.0 && betaXY < 1.0) || !(betaYX >= 0.0 && betaYX < 1.0)) {
        throw Error(Errc::InvalidArgument, "couplings must lie in [0, 1)");
    }

    CounterRng rng(stream_key(seed, 0x6c6f67697374ULL));
    double x = 0.1 + 0.8 * rng.uniform();
    double y = 0.1 + 0.8 * rng.uniform();

    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(n);
    ys.reserve(n);
    for (std::size_t step = 0; step < n + kTransientSteps; ++step) {
        const double nx = x * (3.8 - 3.8 * x - betaYX * y);
        const double ny = y * (3.5 - 3.5 * y - betaXY * x);
        x = nx;
        y = ny;
        if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
            throw Error(Errc::DegenerateOrbit, "iterate " + std::to_string(step) +
                                                   " left [0, 1]; reduce the couplings");
        }
        if (step >= kTransientSteps) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    return {validate_series(std::move(xs), "X"), validate_series(std::move(ys), "Y")};
}

}  // namespace ccm
