#include "cli/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "twophoton/correlation.hpp"
#include "twophoton/engineering.hpp"

namespace twophoton::cli {

std::string_view to_string(Command c) {
    switch (c) {
        case Command::Correlation: return "correlation";
        case Command::HomScan: return "homscan";
        case Command::Fringe: return "fringe";
        case Command::Engineer: return "engineer";
        case Command::MonteCarlo: return "mc";
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (Command c : {Command::Correlation, Command::HomScan, Command::Fringe, Command::Engineer,
                      Command::MonteCarlo})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed",
        "scan.kind",
        "units.frequency",
        "comb.n_side_modes",
        "comb.mode_spacing",
        "comb.round_trip_time",
        "comb.pump_frequency",
        "comb.linewidth",
        "comb.center",
        "comb.shape",
        "comb.phases",
        "comb.phase_seed",
        "detector.resolution",
        "detector.coincidence_window",
        "detector.efficiency",
        "detector.dark_rate",
        "detector.jitter",
        "interferometer.delay",
        "interferometer.mode_match",
        "interferometer.mode_match_decay",
        "interferometer.splitter_1",
        "interferometer.splitter_2",
        "interferometer.dithered",
        "interferometer.mm_per_second",
        "scan.start",
        "scan.stop",
        "scan.points",
        "scan.coherence",
        "scan.averaged",
        "engineering.target_peak",
        "engineering.wideband_shape",
        "engineering.wideband_halfwidth",
        "mc.events",
        "mc.acquisition_time",
        "mc.bin_width",
        "mc.histogram_start",
        "mc.histogram_stop",
        "mc.phase_bins",
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
    return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    });
}

void add_line(ConfigFile& cfg, const std::string& raw, int line) {
    std::string text = raw;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) return;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw ConfigError(fmt::format("{}:{}: expected 'key = value'", cfg.source, line));
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (!valid_key(key))
        throw ConfigError(fmt::format("{}:{}: malformed key '{}'", cfg.source, line, key));
    if (value.empty())
        throw ConfigError(fmt::format("{}:{}: {}: missing value", cfg.source, line, key));
    if (!known_keys().contains(key))
        throw ConfigError(fmt::format("{}:{}: unknown key '{}'", cfg.source, line, key));
    if (auto it = cfg.entries.find(key); it != cfg.entries.end())
        throw ConfigError(fmt::format("{}:{}: {} already set on line {}", cfg.source, line, key,
                                      it->second.line));
    cfg.entries[key] = Entry{value, line};
}

}  // namespace

ConfigFile parse_config(std::istream& in, const std::string& source) {
    ConfigFile cfg{source, {}};
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);

    // Files written by this tool start with "# twophoton <command>".
    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    const bool emitted = first < lines.size() && lines[first].rfind("# twophoton ", 0) == 0;

    if (!emitted) {
        for (std::size_t i = 0; i < lines.size(); ++i) add_line(cfg, lines[i], static_cast<int>(i + 1));
        return cfg;
    }
    bool inside = false;
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        const std::string& l = lines[i];
        if (l.rfind('#', 0) != 0) break;
        if (l == "# --- config ---") {
            inside = true;
            continue;
        }
        if (l == "# --- results ---") break;
        if (inside) add_line(cfg, l.substr(l.size() > 1 && l[1] == ' ' ? 2 : 1), static_cast<int>(i + 1));
    }
    if (!inside) throw ConfigError(source + ": output file has no config block");
    return cfg;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

namespace {

class Reader {
public:
    explicit Reader(const ConfigFile& f) : f_(f) {}

    bool has(const std::string& key) const { return f_.entries.contains(key); }

    std::string where(const std::string& key) const {
        auto it = f_.entries.find(key);
        if (it == f_.entries.end()) return fmt::format("{}: {}", f_.source, key);
        return fmt::format("{}:{}: {}", f_.source, it->second.line, key);
    }

    std::string text(const std::string& key, std::string fallback) const {
        auto it = f_.entries.find(key);
        return it == f_.entries.end() ? fallback : it->second.value;
    }

    double number(const std::string& key, double fallback) const {
        auto it = f_.entries.find(key);
        if (it == f_.entries.end()) return fallback;
        const std::string& v = it->second.value;
        double out = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
            throw ConfigError(where(key) + ": expected a finite number, got '" + v + "'");
        return out;
    }

    long long integer(const std::string& key, long long fallback) const {
        auto it = f_.entries.find(key);
        if (it == f_.entries.end()) return fallback;
        const std::string& v = it->second.value;
        long long out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError(where(key) + ": expected an integer, got '" + v + "'");
        return out;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        auto it = f_.entries.find(key);
        if (it == f_.entries.end()) return fallback;
        const std::string& v = it->second.value;
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError(where(key) + ": expected a non-negative integer, got '" + v + "'");
        return out;
    }

    bool flag(const std::string& key, bool fallback) const {
        auto it = f_.entries.find(key);
        if (it == f_.entries.end()) return fallback;
        if (it->second.value == "true") return true;
        if (it->second.value == "false") return false;
        throw ConfigError(where(key) + ": expected true or false");
    }

    template <class Parse>
    auto choice(const std::string& key, std::string fallback, Parse parse) const {
        try {
            return parse(text(key, fallback));
        } catch (const InvalidArgument& e) {
            throw ConfigError(where(key) + ": " + e.what());
        }
    }

private:
    const ConfigFile& f_;
};

void require(bool ok, const Reader& r, const std::string& key, const std::string& rule) {
    if (!ok) throw ConfigError(r.where(key) + ": " + rule);
}

std::vector<double> parse_phase_list(const std::string& spec, const Reader& r) {
    std::vector<double> out;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        double v = 0.0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || p != item.data() + item.size() || !std::isfinite(v))
            throw ConfigError(r.where("comb.phases") +
                              ": expected locked, random or a comma-separated list of radians");
        out.push_back(v);
    }
    return out;
}

std::size_t points_for(double span, double step) {
    return static_cast<std::size_t>(std::ceil(span / step)) + 1;
}

}  // namespace

ModeComb RunConfig::comb() const {
    const double spacing = spacing_from_round_trip ? kTwoPi / round_trip_time
                                                   : to_angular(mode_spacing, units);
    const SpectralAmplitude mode(shape, to_angular(linewidth, units), to_angular(center, units));
    std::vector<double> phases;
    if (phases_spec == "random") phases = random_mode_phases(n_side_modes, phase_seed);
    else if (phases_spec != "locked") {
        std::stringstream ss(phases_spec);
        for (std::string item; std::getline(ss, item, ',');) phases.push_back(std::stod(item));
    }
    return ModeComb(n_side_modes, spacing, to_angular(pump_frequency, units), mode, phases);
}

InterferometerConfig RunConfig::interferometer() const {
    InterferometerConfig c{comb()};
    c.resolution = resolution;
    c.mode_match = mode_match;
    c.mode_match_decay = mode_match_decay;
    c.splitters = {splitter_1, splitter_2};
    return c.at_delay(delay);
}

DetectorModel RunConfig::detector() const {
    return DetectorModel{resolution, coincidence_window, efficiency, dark_rate, jitter};
}

TimeGrid RunConfig::scan_grid() const { return TimeGrid(scan_start, scan_stop, scan_points); }

std::vector<double> RunConfig::scan_values() const { return scan_grid().values(); }

RunConfig resolve(const ConfigFile& file, Command command,
                  std::optional<std::uint64_t> seed_override) {
    const Reader r(file);
    RunConfig c;
    c.command = command;

    if (r.has("scan.kind")) {
        const auto kind = parse_command(r.text("scan.kind", ""));
        require(kind.has_value(), r, "scan.kind", "unknown scan kind");
        require(*kind == command, r, "scan.kind",
                fmt::format("config is for '{}' but the command is '{}'",
                            r.text("scan.kind", ""), to_string(command)));
    }

    c.seed = seed_override ? *seed_override : r.unsigned_integer("seed", 1);
    c.units = r.choice("units.frequency", "angular", parse_units);

    const long long n = r.integer("comb.n_side_modes", 10);
    require(n >= 0 && n <= 100000, r, "comb.n_side_modes", "must be an integer in [0, 100000]");
    c.n_side_modes = static_cast<int>(n);

    require(!(r.has("comb.mode_spacing") && r.has("comb.round_trip_time")), r,
            "comb.round_trip_time", "give either comb.mode_spacing or comb.round_trip_time, not both");
    double spacing_angular = 0.0;
    double spacing_units = 0.0;
    if (r.has("comb.round_trip_time")) {
        c.spacing_from_round_trip = true;
        c.round_trip_time = r.number("comb.round_trip_time", 0.0);
        require(c.round_trip_time > 0.0, r, "comb.round_trip_time", "must be positive");
        spacing_angular = kTwoPi / c.round_trip_time;
        spacing_units = c.units == FrequencyUnits::Angular ? spacing_angular : 1.0 / c.round_trip_time;
    } else {
        const double fallback = c.units == FrequencyUnits::Angular ? kTwoPi * 1e11 : 1e11;
        c.mode_spacing = r.number("comb.mode_spacing", fallback);
        require(c.mode_spacing > 0.0, r, "comb.mode_spacing", "must be positive");
        spacing_units = c.mode_spacing;
        spacing_angular = to_angular(c.mode_spacing, c.units);
    }
    const double tr = kTwoPi / spacing_angular;

    // 532 nm pump.
    const double pump_fallback = c.units == FrequencyUnits::Angular ? 3.5407e15 : 5.6352e14;
    c.pump_frequency = r.number("comb.pump_frequency", pump_fallback);
    require(c.pump_frequency > 0.0, r, "comb.pump_frequency", "must be positive");
    c.linewidth = r.number("comb.linewidth", 0.01 * spacing_units);
    require(c.linewidth > 0.0, r, "comb.linewidth", "must be positive");
    require(c.linewidth < 0.5 * spacing_units, r, "comb.linewidth",
            "single-mode halfwidth must be < mode_spacing/2 (modes spectrally resolved)");
    c.center = r.number("comb.center", 0.0);
    c.shape = r.choice("comb.shape", "lorentzian", parse_shape);

    c.phases_spec = r.text("comb.phases", "locked");
    c.phase_seed = r.unsigned_integer("comb.phase_seed", 1);
    if (c.phases_spec != "locked" && c.phases_spec != "random") {
        const auto list = parse_phase_list(c.phases_spec, r);
        require(list.size() == static_cast<std::size_t>(2 * n + 1), r, "comb.phases",
                fmt::format("needs 2N+1 = {} phases, got {}", 2 * n + 1, list.size()));
        std::string canon;
        for (std::size_t i = 0; i < list.size(); ++i)
            canon += (i ? "," : "") + format_number(list[i]);
        c.phases_spec = canon;
    }

    c.resolution = r.number("detector.resolution", 10e-9);
    require(c.resolution >= 0.0, r, "detector.resolution", "must be >= 0");
    c.coincidence_window = r.number("detector.coincidence_window", 10e-9);
    require(c.coincidence_window > 0.0, r, "detector.coincidence_window", "must be positive");
    c.efficiency = r.number("detector.efficiency", 1.0);
    require(c.efficiency > 0.0 && c.efficiency <= 1.0, r, "detector.efficiency", "must lie in (0, 1]");
    c.dark_rate = r.number("detector.dark_rate", 0.0);
    require(c.dark_rate >= 0.0, r, "detector.dark_rate", "must be >= 0");
    c.jitter = r.choice("detector.jitter", "rectangular", parse_jitter);

    c.delay = r.number("interferometer.delay", command == Command::Fringe ? 0.5 * tr : 0.0);
    require(c.delay >= 0.0, r, "interferometer.delay", "must be >= 0");
    c.mode_match = r.number("interferometer.mode_match", 1.0);
    require(c.mode_match > 0.0 && c.mode_match <= 1.0, r, "interferometer.mode_match",
            "must lie in (0, 1]");
    c.mode_match_decay = r.number("interferometer.mode_match_decay", 0.0);
    require(c.mode_match_decay >= 0.0, r, "interferometer.mode_match_decay", "must be >= 0");
    c.splitter_1 = r.number("interferometer.splitter_1", 0.5);
    require(c.splitter_1 > 0.0 && c.splitter_1 < 1.0, r, "interferometer.splitter_1",
            "must lie in (0, 1)");
    c.splitter_2 = r.number("interferometer.splitter_2", 0.5);
    require(c.splitter_2 > 0.0 && c.splitter_2 < 1.0, r, "interferometer.splitter_2",
            "must lie in (0, 1)");
    c.dithered = r.flag("interferometer.dithered", true);
    c.mm_per_second = r.number("interferometer.mm_per_second", 0.0);
    require(c.mm_per_second >= 0.0, r, "interferometer.mm_per_second", "must be >= 0");

    c.target_peak = static_cast<int>(r.integer("engineering.target_peak", 1));
    c.wideband_shape = r.choice("engineering.wideband_shape", "rectangular", parse_shape);
    c.wideband_halfwidth = r.number("engineering.wideband_halfwidth", 0.0);
    require(c.wideband_halfwidth >= 0.0, r, "engineering.wideband_halfwidth",
            "must be >= 0 (0 selects the matched width)");

    // Build the comb once here so invariant violations surface before any work.
    ModeComb comb = [&] {
        try {
            return c.comb();
        } catch (const InvalidArgument& e) {
            throw ConfigError(file.source + ": comb: " + e.what());
        }
    }();

    const int m = comb.mode_count();
    const double peak_step = tr / (16.0 * m);
    double start = 0.0, stop = 1.0;
    std::size_t points = 2;
    switch (command) {
        case Command::Correlation:
            start = -2.0 * tr;
            stop = 2.0 * tr;
            points = std::max<std::size_t>(4096, points_for(stop - start, peak_step));
            points = std::max(points, points_for(stop - start, 0.5 * nyquist_spacing(comb.single_mode())));
            break;
        case Command::HomScan:
            start = 0.0;
            stop = 1.3 * tr;
            points = 261;
            break;
        case Command::Fringe:
            start = 0.0;
            stop = 4.0 * kPi;
            points = 129;
            break;
        case Command::Engineer: {
            start = (c.target_peak - 1.5) * tr;
            stop = (c.target_peak + 1.5) * tr;
            const double hw = c.wideband_halfwidth > 0.0 ? to_angular(c.wideband_halfwidth, c.units)
                                                          : matched_wideband_halfwidth(comb);
            points = points_for(stop - start, std::min(peak_step, kPi / (16.0 * hw)));
            break;
        }
        case Command::MonteCarlo: {
            const double reach = std::max(2.0 * tr, comb.single_mode().temporal_support(1e-4));
            start = -reach;
            stop = reach;
            points = points_for(stop - start, tr / (8.0 * m));
            break;
        }
    }
    c.scan_start = r.number("scan.start", start);
    c.scan_stop = r.number("scan.stop", stop);
    require(c.scan_stop > c.scan_start, r, "scan.stop", "must be greater than scan.start");
    const long long pts = r.integer("scan.points", static_cast<long long>(points));
    require(pts >= 2 && pts <= 100000000, r, "scan.points", "must lie in [2, 1e8]");
    c.scan_points = static_cast<std::size_t>(pts);
    c.scan_coherence = r.flag("scan.coherence", false);
    c.scan_averaged = r.flag("scan.averaged", false);

    const long long events = r.integer("mc.events", 1000000);
    require(events > 0 && events <= 1000000000LL, r, "mc.events", "must lie in [1, 1e9]");
    c.mc_events = static_cast<std::size_t>(events);
    c.mc_acquisition_time = r.number("mc.acquisition_time", 1.0);
    require(c.mc_acquisition_time > 0.0, r, "mc.acquisition_time", "must be positive");
    // Default histogram covers the sampled trace smeared by the jitter.
    const double hist_reach = std::max(std::abs(c.scan_start), std::abs(c.scan_stop)) + c.resolution;
    c.mc_histogram_start = r.number("mc.histogram_start", -hist_reach);
    c.mc_histogram_stop = r.number("mc.histogram_stop", hist_reach);
    require(c.mc_histogram_stop > c.mc_histogram_start, r, "mc.histogram_stop",
            "must be greater than mc.histogram_start");
    c.mc_bin_width = r.number("mc.bin_width", std::max(tr / (4.0 * m), 2.0 * hist_reach / 4000.0));
    require(c.mc_bin_width > 0.0, r, "mc.bin_width", "must be positive");
    require((c.mc_histogram_stop - c.mc_histogram_start) / c.mc_bin_width <= 1e7, r, "mc.bin_width",
            "gives more than 1e7 bins");
    const long long bins = r.integer("mc.phase_bins", 2LL * m);
    require(bins >= 2 && bins % 2 == 0, r, "mc.phase_bins", "must be even and >= 2");
    c.mc_phase_bins = static_cast<std::size_t>(bins);

    return c;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    auto num = format_number;
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    std::vector<std::pair<std::string, std::string>> out = {
        {"scan.kind", std::string(to_string(command))},
        {"seed", std::to_string(seed)},
        {"units.frequency", std::string(to_string(units))},
        {"comb.n_side_modes", std::to_string(n_side_modes)},
    };
    if (spacing_from_round_trip) out.emplace_back("comb.round_trip_time", num(round_trip_time));
    else out.emplace_back("comb.mode_spacing", num(mode_spacing));
    const std::vector<std::pair<std::string, std::string>> rest = {
        {"comb.pump_frequency", num(pump_frequency)},
        {"comb.linewidth", num(linewidth)},
        {"comb.center", num(center)},
        {"comb.shape", std::string(to_string(shape))},
        {"comb.phases", phases_spec},
        {"comb.phase_seed", std::to_string(phase_seed)},
        {"detector.resolution", num(resolution)},
        {"detector.coincidence_window", num(coincidence_window)},
        {"detector.efficiency", num(efficiency)},
        {"detector.dark_rate", num(dark_rate)},
        {"detector.jitter", std::string(to_string(jitter))},
        {"interferometer.delay", num(delay)},
        {"interferometer.mode_match", num(mode_match)},
        {"interferometer.mode_match_decay", num(mode_match_decay)},
        {"interferometer.splitter_1", num(splitter_1)},
        {"interferometer.splitter_2", num(splitter_2)},
        {"interferometer.dithered", flag(dithered)},
        {"interferometer.mm_per_second", num(mm_per_second)},
        {"scan.start", num(scan_start)},
        {"scan.stop", num(scan_stop)},
        {"scan.points", std::to_string(scan_points)},
        {"scan.coherence", flag(scan_coherence)},
        {"scan.averaged", flag(scan_averaged)},
        {"engineering.target_peak", std::to_string(target_peak)},
        {"engineering.wideband_shape", std::string(to_string(wideband_shape))},
        {"engineering.wideband_halfwidth", num(wideband_halfwidth)},
        {"mc.events", std::to_string(mc_events)},
        {"mc.acquisition_time", num(mc_acquisition_time)},
        {"mc.bin_width", num(mc_bin_width)},
        {"mc.histogram_start", num(mc_histogram_start)},
        {"mc.histogram_stop", num(mc_histogram_stop)},
        {"mc.phase_bins", std::to_string(mc_phase_bins)},
    };
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

}  // namespace twophoton::cli
