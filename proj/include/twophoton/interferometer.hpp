#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twophoton/spectral.hpp"

namespace twophoton {

// Power transmissivities of the two beam splitters of the unbalanced interferometer.
struct SplitterRatios {
    double first = 0.5;
    double second = 0.5;
};

struct InterferometerConfig {
    ModeComb comb;
    double delay = 0.0;        // extra propagation time of the long arm, seconds
    double pump_phase = 0.0;   // omega_p * delay reduced mod 2pi
    double resolution = 0.0;   // detector resolution time T_R, seconds
    double mode_match = 1.0;   // scales the two-photon overlap V
    double mode_match_decay = 0.0;  // if > 0, mode_match *= exp(-delay / decay)
    SplitterRatios splitters{};

    void validate() const;
    double effective_mode_match() const;

    // Same settings at another delay, with pump_phase recomputed from it.
    InterferometerConfig at_delay(double new_delay) const;
};

// omega_p * delay reduced to [0, 2pi).
double reduced_pump_phase(double pump_frequency, double delay);

// Fock state of two modes with fixed total photon number; amplitudes[k] is
// the amplitude of |k, total - k>.
struct TwoModeState {
    int total = 0;
    std::vector<cplx> amplitudes;
};

// Beam splitter a+ -> t a+ + r b+, b+ -> -r a+ + t b+ with t = sqrt(T), r = sqrt(1-T),
// applied to a state of fixed total photon number.
TwoModeState apply_beam_splitter(const TwoModeState& in, double transmissivity);

// |2,0> input on a splitter, as amplitudes over (|2,0>, |0,2>, |1,1>).
std::array<cplx, 3> bs_two_photon_state(double transmissivity = 0.5);

// The three contributions to the two-detector correlation at delay tau:
// the pump-phase term, the HOM term and the interference cross term.
struct Gamma12Terms {
    double phase_term = 0.0;
    double hom_term = 0.0;
    double cross_term = 0.0;
    double total() const { return phase_term + hom_term + cross_term; }
};

Gamma12Terms gamma12_terms(double tau, const InterferometerConfig& cfg);
double gamma12(double tau, const InterferometerConfig& cfg);

// Integrals of products of the pair amplitude A over the resolution window
// (composite Simpson, 8 nodes per comb peak).
struct PairIntegrals {
    double r0 = 0.0;   // int |A(tau)|^2
    cplx overlap{};    // int A(tau + delay) A*(tau - delay)
    cplx lead{};       // int A(tau) A*(tau + delay)
    cplx lag{};        // int A(tau) A*(tau - delay)
    std::size_t nodes = 0;
};

PairIntegrals pair_integrals(const ModeComb& comb, double delay, double resolution);

struct RateBreakdown {
    double rate = 0.0;            // R2
    double r0 = 0.0;              // integral of |A|^2 over the resolution window
    double visibility = 0.0;      // V(delay), after mode matching
    double cross_integral = 0.0;  // integral of the cross term
};

// Coincidence rate integrated over the resolution window. Throws
// ResolutionError if the window is shorter than the delay, and NumericalError
// if the cross term fails to integrate to below 1e-6 R0.
RateBreakdown coincidence_rate(const InterferometerConfig& cfg);

// Same with the pump phase averaged uniformly over [0, 2pi).
RateBreakdown dither_averaged_rate(const InterferometerConfig& cfg);

// Least-squares fit y ~ mean + amplitude cos(harmonic x - phase).
struct SinusoidFit {
    double mean = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double visibility = 0.0;  // amplitude / mean
};

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y, double harmonic);

struct ScanResult {
    std::vector<double> abscissa;
    std::vector<double> coincidence;
    std::vector<double> singles_1;
    std::vector<double> singles_2;
    std::vector<double> visibility;  // V at each point
    std::vector<std::pair<std::string, double>> metadata;  // derived scalars

    double meta(const std::string& key) const;
};

// Pump phase scanned at fixed delay. Coincidences are normalized by R0,
// singles by their mean. Singles follow the single-photon frequency omega_p/2,
// so their fringe has half the coincidence frequency.
ScanResult phase_fringe_scan(const InterferometerConfig& cfg, std::span<const double> phases);

// Coincidences against delay, normalized to the mean of the points where
// |V| < 0.01 (R0 if there are none).
ScanResult delay_scan(const InterferometerConfig& cfg, std::span<const double> delays,
                      bool dithered);

// Local minima (endpoints included) whose prominence is at least min_prominence.
std::vector<std::size_t> find_dips(std::span<const double> y, double min_prominence);

inline constexpr double kDipProminence = 0.25;

}  // namespace twophoton
