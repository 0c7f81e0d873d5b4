#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "twophoton/correlation.hpp"

namespace twophoton {

enum class JitterKernel { Rectangular, Gaussian };

std::string_view to_string(JitterKernel k);
JitterKernel parse_jitter(std::string_view name);

struct DetectorModel {
    double resolution = 0.0;           // T_R: full width of the rectangular jitter
    double coincidence_window = 10e-9;
    double efficiency = 1.0;
    double dark_rate = 0.0;            // per detector, events per second
    JitterKernel jitter = JitterKernel::Rectangular;  // Gaussian: FWHM = resolution

    void validate() const;
};

enum class EventOrigin { Pair, Dark };

// One coincidence candidate: a detection on each channel.
struct EventRecord {
    double t1 = 0.0;
    double t2 = 0.0;
    EventOrigin origin = EventOrigin::Pair;

    double delay() const { return t2 - t1; }
    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// Events are generated in chunks of this size, each with its own derived seed.
inline constexpr std::size_t kChunkSize = 65536;

// n delays drawn by inverse CDF. Sample i owns the cell of width dt centred on
// grid point i and weight samples[i].real(); within a cell the CDF is linear.
std::vector<double> sample_pair_delays(const CorrelationTrace& trace, std::size_t n,
                                       std::uint64_t seed);

// Applies the detector to pairs emitted uniformly in [0, acquisition_time).
// Pair events come first, in input order, with lost pairs removed; dark
// coincidences follow (dark-photon and dark-dark pairs within the window).
std::vector<EventRecord> detect(std::span<const double> delays, const DetectorModel& det,
                                std::uint64_t seed, double acquisition_time = 1.0);

// Records with |t2 - t1| <= window.
std::vector<EventRecord> select_coincidences(std::span<const EventRecord> records,
                                             double window);

struct Histogram {
    double lo = 0.0;
    double bin_width = 1.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    double bin_start(std::size_t i) const { return lo + bin_width * static_cast<double>(i); }
    std::uint64_t total() const;
    void add(double x);
    Histogram& merge(const Histogram& other);
};

Histogram make_histogram(double lo, double hi, double bin_width);
Histogram histogram_delays(std::span<const EventRecord> records, double bin_width, double lo,
                           double hi);

// 1 - (count near t_r/2) / (count near 0) after folding delays modulo t_r
// into `phase_bins` bins (even, bin 0 centred on the comb peaks).
double comb_contrast(std::span<const EventRecord> records, double round_trip_time,
                     std::size_t phase_bins);

}  // namespace twophoton
