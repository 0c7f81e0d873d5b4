#include "twophoton/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twophoton/errors.hpp"
#include "twophoton/parallel.hpp"
#include "twophoton/random.hpp"

namespace twophoton {

namespace {
constexpr std::uint64_t kStreamSample = 1;
constexpr std::uint64_t kStreamDetect = 2;
constexpr std::uint64_t kStreamDark1 = 3;
constexpr std::uint64_t kStreamDark2 = 4;

std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }
}  // namespace

std::string_view to_string(JitterKernel k) {
    return k == JitterKernel::Rectangular ? "rectangular" : "gaussian";
}

JitterKernel parse_jitter(std::string_view name) {
    if (name == "rectangular") return JitterKernel::Rectangular;
    if (name == "gaussian") return JitterKernel::Gaussian;
    throw InvalidArgument("unknown jitter kernel '" + std::string(name) +
                          "' (expected rectangular or gaussian)");
}

void DetectorModel::validate() const {
    if (!(resolution >= 0.0) || !std::isfinite(resolution))
        throw InvalidArgument("detector resolution must be >= 0");
    if (!(coincidence_window > 0.0)) throw InvalidArgument("coincidence window must be positive");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw InvalidArgument("detector efficiency must lie in (0, 1]");
    if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate))
        throw InvalidArgument("dark rate must be >= 0");
}

std::vector<double> sample_pair_delays(const CorrelationTrace& trace, std::size_t n,
                                       std::uint64_t seed) {
    if (trace.kind != TraceKind::Intensity)
        throw InvalidArgument("pair delays are sampled from an intensity trace");
    const std::size_t cells = trace.samples.size();
    std::vector<double> cdf(cells + 1, 0.0);
    for (std::size_t i = 0; i < cells; ++i) {
        const double y = trace.samples[i].real();
        if (!std::isfinite(y)) throw InvalidArgument("trace has non-finite samples");
        cdf[i + 1] = cdf[i] + y;
    }
    const double total = cdf.back();
    if (!(total > 0.0) || !std::isfinite(total))
        throw DegenerateDensity("trace integrates to zero; nothing to sample");

    std::size_t last_positive = cells - 1;
    while (trace.samples[last_positive].real() <= 0.0) --last_positive;
    const double dt = trace.grid.spacing();

    std::vector<double> out(n);
    parallel_for(chunk_count(n), [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            std::mt19937_64 rng(derive_seed(seed, kStreamSample, c));
            const std::size_t stop = std::min(n, (c + 1) * kChunkSize);
            for (std::size_t i = c * kChunkSize; i < stop; ++i) {
                const double target = uniform01(rng) * total;
                auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), target);
                std::size_t k = static_cast<std::size_t>(it - cdf.begin()) - 1;
                if (k >= cells) k = last_positive;
                const double y = trace.samples[k].real();
                const double frac = std::clamp((target - cdf[k]) / y, 0.0, 1.0);
                out[i] = trace.grid[k] + (frac - 0.5) * dt;
            }
        }
    });
    return out;
}

namespace {

double jitter(std::mt19937_64& rng, const DetectorModel& det) {
    if (det.resolution == 0.0) {
        (void)uniform01(rng);
        (void)uniform01(rng);
        return 0.0;
    }
    if (det.jitter == JitterKernel::Rectangular) {
        (void)uniform01(rng);
        return (uniform01(rng) - 0.5) * det.resolution;
    }
    // Box-Muller; FWHM equal to the resolution time.
    const double sigma = det.resolution / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::vector<double> poisson_times(double rate, double span, std::uint64_t seed) {
    std::vector<double> t;
    if (rate <= 0.0) return t;
    std::mt19937_64 rng(seed);
    double now = 0.0;
    while (true) {
        now += -std::log1p(-uniform01(rng)) / rate;
        if (now >= span) break;
        t.push_back(now);
    }
    return t;
}

}  // namespace

std::vector<EventRecord> detect(std::span<const double> delays, const DetectorModel& det,
                                std::uint64_t seed, double acquisition_time) {
    det.validate();
    if (!(acquisition_time > 0.0)) throw InvalidArgument("acquisition time must be positive");

    double reach = 0.0;
    for (double d : delays) reach = std::max(reach, std::abs(d));
    // Shift so that every timestamp is non-negative.
    const double offset = reach + 4.0 * det.resolution;

    struct Photon {
        double t1, t2;
        bool keep1, keep2;
    };
    const std::size_t n = delays.size();
    std::vector<Photon> photons(n);
    parallel_for(chunk_count(n), [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            std::mt19937_64 rng(derive_seed(seed, kStreamDetect, c));
            const std::size_t stop = std::min(n, (c + 1) * kChunkSize);
            for (std::size_t i = c * kChunkSize; i < stop; ++i) {
                const double emit = offset + uniform01(rng) * acquisition_time;
                Photon& p = photons[i];
                p.t1 = emit + jitter(rng, det);
                p.t2 = emit + delays[i] + jitter(rng, det);
                p.keep1 = uniform01(rng) < det.efficiency;
                p.keep2 = uniform01(rng) < det.efficiency;
            }
        }
    });

    std::vector<EventRecord> out;
    out.reserve(n);
    for (const auto& p : photons)
        if (p.keep1 && p.keep2) out.push_back({p.t1, p.t2, EventOrigin::Pair});

    if (det.dark_rate <= 0.0) return out;

    const double span = acquisition_time + 2.0 * offset;
    const auto dark1 = poisson_times(det.dark_rate, span, derive_seed(seed, kStreamDark1, 0));
    const auto dark2 = poisson_times(det.dark_rate, span, derive_seed(seed, kStreamDark2, 0));
    std::vector<double> light1, light2;
    for (const auto& p : photons) {
        if (p.keep1) light1.push_back(p.t1);
        if (p.keep2) light2.push_back(p.t2);
    }
    std::sort(light1.begin(), light1.end());
    std::sort(light2.begin(), light2.end());

    const double w = det.coincidence_window;
    auto pair_with = [&](double t, const std::vector<double>& other, bool dark_is_first) {
        auto it = std::lower_bound(other.begin(), other.end(), t - w);
        for (; it != other.end() && *it <= t + w; ++it) {
            if (dark_is_first) out.push_back({t, *it, EventOrigin::Dark});
            else out.push_back({*it, t, EventOrigin::Dark});
        }
    };
    // dark on 1 with light or dark on 2; dark on 2 with light on 1.
    for (double t : dark1) {
        pair_with(t, light2, true);
        pair_with(t, dark2, true);
    }
    for (double t : dark2) pair_with(t, light1, false);
    return out;
}

std::vector<EventRecord> select_coincidences(std::span<const EventRecord> records, double window) {
    if (!(window > 0.0)) throw InvalidArgument("coincidence window must be positive");
    std::vector<EventRecord> out;
    for (const auto& r : records)
        if (std::abs(r.delay()) <= window) out.push_back(r);
    return out;
}

std::uint64_t Histogram::total() const {
    std::uint64_t s = underflow + overflow;
    for (auto c : counts) s += c;
    return s;
}

void Histogram::add(double x) {
    if (x < lo) {
        ++underflow;
        return;
    }
    const double k = std::floor((x - lo) / bin_width);
    if (k >= static_cast<double>(counts.size())) {
        ++overflow;
        return;
    }
    ++counts[static_cast<std::size_t>(k)];
}

Histogram& Histogram::merge(const Histogram& other) {
    if (other.lo != lo || other.bin_width != bin_width || other.counts.size() != counts.size())
        throw InvalidArgument("cannot merge histograms with different binning");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    underflow += other.underflow;
    overflow += other.overflow;
    return *this;
}

Histogram make_histogram(double lo, double hi, double bin_width) {
    if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
    if (!(hi > lo)) throw InvalidArgument("histogram range must have hi > lo");
    const double bins = (hi - lo) / bin_width;
    auto n = static_cast<std::size_t>(std::ceil(bins - 1e-9 * bins));
    return Histogram{lo, bin_width, std::vector<std::uint64_t>(std::max<std::size_t>(n, 1), 0), 0, 0};
}

Histogram histogram_delays(std::span<const EventRecord> records, double bin_width, double lo,
                           double hi) {
    Histogram h = make_histogram(lo, hi, bin_width);
    for (const auto& r : records) h.add(r.delay());
    return h;
}

double comb_contrast(std::span<const EventRecord> records, double round_trip_time,
                     std::size_t phase_bins) {
    if (phase_bins < 2 || phase_bins % 2 != 0)
        throw InvalidArgument("comb contrast needs an even number of phase bins");
    std::vector<std::uint64_t> c(phase_bins, 0);
    const double nb = static_cast<double>(phase_bins);
    for (const auto& r : records) {
        const double x = r.delay() / round_trip_time;
        const double ph = x - std::floor(x);  // [0, 1)
        auto k = static_cast<std::size_t>(std::floor(ph * nb + 0.5));
        c[k % phase_bins]++;
    }
    if (c[0] == 0) return 0.0;
    return 1.0 - static_cast<double>(c[phase_bins / 2]) / static_cast<double>(c[0]);
}

}  // namespace twophoton
