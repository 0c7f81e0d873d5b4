#pragma once

#include "twophoton/correlation.hpp"

namespace twophoton {

// Broadband pair source whose amplitude f(tau - delay) is added coherently
// to the comb amplitude.
struct WidebandState {
    SpectralAmplitude spectrum;
    double delay = 0.0;
};

// f(tau - delay), normalized to 1 at its peak.
cplx wideband_amplitude(const WidebandState& w, double tau);

// Throws GridError unless the grid puts >= 8 samples across pi / halfwidth.
void require_wideband_resolved(const WidebandState& w, const TimeGrid& grid);

CorrelationTrace wideband_gamma2(const WidebandState& w, const TimeGrid& grid);

// |eta A(tau) + zeta f(tau - delay)|^2 on the grid.
CorrelationTrace combined_gamma2(const ModeComb& comb, const WidebandState& w, cplx eta,
                                 cplx zeta, const TimeGrid& grid);

struct ExcisionSolution {
    cplx eta{1.0, 0.0};
    cplx zeta{0.0, 0.0};
    double delay = 0.0;
    int target_peak = 0;
    double residual = 0.0;            // window energy after / before
    double retention_minus = 0.0;     // same ratio for the window of peak M-1
    double retention_plus = 0.0;      // and of peak M+1
    double wideband_halfwidth = 0.0;
};

struct ExcisionOptions {
    double max_residual = 0.25;
    double min_envelope = 1e-3;
};

// Default wideband halfwidth (2N+1) dOmega / 2, which matches the temporal
// width of f to that of one comb peak.
double matched_wideband_halfwidth(const ModeComb& comb);

// Energy of |eta A + zeta f|^2 summed over the grid points in
// [k t_r - t_r/4, k t_r + t_r/4].
double window_energy(const ModeComb& comb, const WidebandState& w, cplx eta, cplx zeta,
                     const TimeGrid& grid, int k);

// Places the wideband peak on comb peak M and solves the least-squares problem
// for zeta (eta = 1) over that peak's window. Pass matched_wideband_halfwidth
// as the template width unless a different one is wanted.
// The grid must cover the windows of peaks M-1 .. M+1.
ExcisionSolution solve_excision(const ModeComb& comb, const SpectralAmplitude& wideband_template,
                                int target_peak, const TimeGrid& grid,
                                const ExcisionOptions& opt = {});

}  // namespace twophoton
