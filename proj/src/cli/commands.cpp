#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <ostream>

#include "cli/output.hpp"
#include "twophoton/correlation.hpp"
#include "twophoton/engineering.hpp"
#include "twophoton/interferometer.hpp"
#include "twophoton/montecarlo.hpp"
#include "twophoton/parallel.hpp"

namespace twophoton::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double v) { return format_number(v); }

std::vector<std::string> cmd_correlation(const RunConfig& cfg, const fs::path& out) {
    const ModeComb comb = cfg.comb();
    const TimeGrid grid = cfg.scan_grid();
    const CorrelationTrace g2 = gamma2_mode_locked(comb, grid);

    std::vector<Column> cols = {{"tau_s", grid.values()}, {"gamma2", g2.real()}};
    if (cfg.scan_coherence) cols.push_back({"coherence_abs", gamma1_coherence(comb, grid).modulus()});
    if (cfg.scan_averaged)
        cols.push_back({"gamma2_averaged",
                        gamma2_detector_averaged(g2, cfg.resolution, comb.round_trip_time()).real()});

    const KeyValues results = {{"round_trip_time_s", num(comb.round_trip_time())},
                               {"gamma2_at_zero", num(std::norm(pair_amplitude(comb, 0.0)))},
                               {"normalization", num(g2.normalization)}};
    write_atomic(out, "correlation.csv", render_csv(render_header(cfg, results), cols));
    return {"correlation.csv"};
}

std::vector<std::string> cmd_homscan(const RunConfig& cfg, const fs::path& out) {
    const InterferometerConfig icfg = cfg.interferometer();
    const auto delays = cfg.scan_values();
    const ScanResult scan = delay_scan(icfg, delays, cfg.dithered);

    std::string dip_list;
    for (std::size_t i : find_dips(scan.coincidence, kDipProminence))
        dip_list += (dip_list.empty() ? "" : ";") + num(scan.abscissa[i]);
    KeyValues results;
    for (const auto& [k, v] : scan.metadata) results.emplace_back(k, num(v));
    results.emplace_back("round_trip_time_s", num(icfg.comb.round_trip_time()));
    results.emplace_back("dip_delays_s", dip_list.empty() ? "none" : dip_list);

    std::vector<Column> cols = {{"delay_s", scan.abscissa}};
    if (cfg.mm_per_second > 0.0) {
        std::vector<double> mm;
        for (double d : scan.abscissa) mm.push_back(d * cfg.mm_per_second);
        cols.push_back({"position_mm", mm});
    }
    cols.push_back({"coincidence", scan.coincidence});
    cols.push_back({"visibility", scan.visibility});
    cols.push_back({"singles_1", scan.singles_1});
    cols.push_back({"singles_2", scan.singles_2});
    write_atomic(out, "homscan.csv", render_csv(render_header(cfg, results), cols));
    return {"homscan.csv"};
}

std::vector<std::string> cmd_fringe(const RunConfig& cfg, const fs::path& out) {
    const InterferometerConfig icfg = cfg.interferometer();
    const auto phases = cfg.scan_values();
    const ScanResult scan = phase_fringe_scan(icfg, phases);
    KeyValues results;
    for (const auto& [k, v] : scan.metadata) results.emplace_back(k, num(v));
    const std::vector<Column> cols = {{"phase_rad", scan.abscissa},
                                      {"coincidence", scan.coincidence},
                                      {"singles_1", scan.singles_1},
                                      {"singles_2", scan.singles_2}};
    write_atomic(out, "fringe.csv", render_csv(render_header(cfg, results), cols));
    return {"fringe.csv"};
}

std::vector<std::string> cmd_engineer(const RunConfig& cfg, const fs::path& out) {
    const ModeComb comb = cfg.comb();
    const TimeGrid grid = cfg.scan_grid();
    const double hw = cfg.wideband_halfwidth > 0.0 ? to_angular(cfg.wideband_halfwidth, cfg.units)
                                                    : matched_wideband_halfwidth(comb);
    const SpectralAmplitude tmpl(cfg.wideband_shape, hw);
    const ExcisionSolution sol = solve_excision(comb, tmpl, cfg.target_peak, grid);
    const WidebandState w{tmpl, sol.delay};

    const auto before = combined_gamma2(comb, w, 1.0, 0.0, grid).real();
    const auto after = combined_gamma2(comb, w, sol.eta, sol.zeta, grid).real();

    const KeyValues fields = {{"eta_re", num(sol.eta.real())},
                              {"eta_im", num(sol.eta.imag())},
                              {"zeta_re", num(sol.zeta.real())},
                              {"zeta_im", num(sol.zeta.imag())},
                              {"zeta_over_eta_abs", num(std::abs(sol.zeta / sol.eta))},
                              {"delay_s", num(sol.delay)},
                              {"target_peak", std::to_string(sol.target_peak)},
                              {"residual", num(sol.residual)},
                              {"retention_minus", num(sol.retention_minus)},
                              {"retention_plus", num(sol.retention_plus)},
                              {"wideband_halfwidth_rad_s", num(sol.wideband_halfwidth)}};
    const std::string header = render_header(cfg, {});
    const auto tau = grid.values();
    write_atomic(out, "engineer_before.csv", render_csv(header, {{"tau_s", tau}, {"gamma2", before}}));
    write_atomic(out, "engineer_after.csv", render_csv(header, {{"tau_s", tau}, {"gamma2", after}}));
    write_atomic(out, "engineer_solution.txt", render_record(header, fields));
    return {"engineer_before.csv", "engineer_after.csv", "engineer_solution.txt"};
}

std::vector<std::string> cmd_mc(const RunConfig& cfg, const fs::path& out) {
    const ModeComb comb = cfg.comb();
    const CorrelationTrace trace = gamma2_mode_locked(comb, cfg.scan_grid());
    const auto delays = sample_pair_delays(trace, cfg.mc_events, cfg.seed);
    const auto records = detect(delays, cfg.detector(), cfg.seed, cfg.mc_acquisition_time);
    const auto coinc = select_coincidences(records, cfg.coincidence_window);
    const Histogram h =
        histogram_delays(coinc, cfg.mc_bin_width, cfg.mc_histogram_start, cfg.mc_histogram_stop);

    std::size_t pairs = 0, accidentals = 0;
    for (const auto& r : coinc) (r.origin == EventOrigin::Pair ? pairs : accidentals)++;
    std::size_t detected = 0;
    for (const auto& r : records) detected += r.origin == EventOrigin::Pair;

    std::vector<double> lo, hi, counts;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        lo.push_back(h.bin_start(i));
        hi.push_back(h.bin_start(i + 1));
        counts.push_back(static_cast<double>(h.counts[i]));
    }
    const std::string header = render_header(cfg, {});
    write_atomic(out, "mc_histogram.csv",
                 render_csv(header, {{"bin_start_s", lo}, {"bin_end_s", hi}, {"count", counts}}));
    const KeyValues fields = {
        {"events", std::to_string(cfg.mc_events)},
        {"detected_pairs", std::to_string(detected)},
        {"coincidences", std::to_string(coinc.size())},
        {"pair_coincidences", std::to_string(pairs)},
        {"accidentals", std::to_string(accidentals)},
        {"histogram_underflow", std::to_string(h.underflow)},
        {"histogram_overflow", std::to_string(h.overflow)},
        {"comb_contrast", num(comb_contrast(coinc, comb.round_trip_time(), cfg.mc_phase_bins))}};
    write_atomic(out, "mc_summary.txt", render_record(header, fields));
    return {"mc_histogram.csv", "mc_summary.txt"};
}

std::optional<std::size_t> env_threads() {
    const char* v = std::getenv("TWOPHOTON_THREADS");
    if (!v || !*v) return std::nullopt;
    try {
        return static_cast<std::size_t>(std::stoul(v));
    } catch (const std::exception&) {
        throw InvalidArgument("TWOPHOTON_THREADS must be a non-negative integer");
    }
}

}  // namespace

std::vector<std::string> run_command(const RunConfig& cfg, const fs::path& out) {
    switch (cfg.command) {
        case Command::Correlation: return cmd_correlation(cfg, out);
        case Command::HomScan: return cmd_homscan(cfg, out);
        case Command::Fringe: return cmd_fringe(cfg, out);
        case Command::Engineer: return cmd_engineer(cfg, out);
        case Command::MonteCarlo: return cmd_mc(cfg, out);
    }
    return {};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mode-locked two-photon state simulator", "twophoton"};
    std::string command, config_path, out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    app.add_option("command", command, "correlation | homscan | fringe | engineer | mc")
        ->required()
        ->check(CLI::IsMember({"correlation", "homscan", "fringe", "engineer", "mc"}));
    app.add_option("--config", config_path, "config file (key = value)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--threads", threads, "worker threads (default: TWOPHOTON_THREADS or all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "twophoton: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (threads) set_thread_count(*threads);
        else if (auto t = env_threads()) set_thread_count(*t);
        const RunConfig cfg = resolve(load_config(config_path), *parse_command(command), seed);
        for (const auto& name : run_command(cfg, out_dir))
            out << (fs::path(out_dir) / name).string() << "\n";
        return 0;
    } catch (const InvalidArgument& e) {
        err << "twophoton: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "twophoton: numerical precondition failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "twophoton: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace twophoton::cli
