#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twophoton/errors.hpp"
#include "twophoton/interferometer.hpp"
#include "twophoton/montecarlo.hpp"

namespace twophoton::cli {

// Config problems, reported with the file and line they come from.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

enum class Command { Correlation, HomScan, Fringe, Engineer, MonteCarlo };

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

struct Entry {
    std::string value;
    int line = 0;
};

// Flat `key = value` text. '#' starts a comment. A file written by this tool
// is accepted too: only its echoed config block is read.
struct ConfigFile {
    std::string source;
    std::map<std::string, Entry> entries;
};

ConfigFile parse_config(std::istream& in, const std::string& source);
ConfigFile load_config(const std::string& path);

// Everything a run needs, resolved and validated. Frequencies are kept in the
// units they were given in (`units`) and converted once when building models.
struct RunConfig {
    Command command = Command::Correlation;
    std::uint64_t seed = 1;

    FrequencyUnits units = FrequencyUnits::Angular;
    int n_side_modes = 10;
    bool spacing_from_round_trip = false;
    double mode_spacing = 0.0;      // in `units`
    double round_trip_time = 0.0;   // seconds, when spacing_from_round_trip
    double pump_frequency = 0.0;    // in `units`
    double linewidth = 0.0;         // in `units`
    double center = 0.0;            // in `units`
    Shape shape = Shape::Lorentzian;
    std::string phases_spec = "locked";  // locked | random | comma-separated radians
    std::uint64_t phase_seed = 1;

    double resolution = 10e-9;
    double coincidence_window = 10e-9;
    double efficiency = 1.0;
    double dark_rate = 0.0;
    JitterKernel jitter = JitterKernel::Rectangular;

    double delay = 0.0;
    double mode_match = 1.0;
    double mode_match_decay = 0.0;
    double splitter_1 = 0.5;
    double splitter_2 = 0.5;
    bool dithered = true;
    double mm_per_second = 0.0;

    double scan_start = 0.0;
    double scan_stop = 0.0;
    std::size_t scan_points = 0;
    bool scan_coherence = false;
    bool scan_averaged = false;

    int target_peak = 1;
    Shape wideband_shape = Shape::Rectangular;
    double wideband_halfwidth = 0.0;  // in `units`

    std::size_t mc_events = 1000000;
    double mc_acquisition_time = 1.0;
    double mc_bin_width = 0.0;
    double mc_histogram_start = 0.0;
    double mc_histogram_stop = 0.0;
    std::size_t mc_phase_bins = 0;

    ModeComb comb() const;
    InterferometerConfig interferometer() const;
    DetectorModel detector() const;
    TimeGrid scan_grid() const;
    std::vector<double> scan_values() const;

    // Resolved settings as (key, value) lines, in a fixed order. Feeding them
    // back through resolve() yields an identical RunConfig.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig resolve(const ConfigFile& file, Command command,
                  std::optional<std::uint64_t> seed_override = std::nullopt);

// %.17g formatting used for every echoed number.
std::string format_number(double v);

}  // namespace twophoton::cli
