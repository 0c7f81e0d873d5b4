#pragma once

#include <vector>

#include "twophoton/quadrature.hpp"
#include "twophoton/spectral.hpp"

namespace twophoton {

enum class TraceKind { Amplitude, Intensity };

// Sampled function of delay. Physical value = normalization * samples[i].
struct CorrelationTrace {
    CorrelationTrace(TimeGrid grid, std::vector<cplx> samples, TraceKind kind,
                     double normalization = 1.0);

    TimeGrid grid;
    std::vector<cplx> samples;
    TraceKind kind;
    double normalization;

    std::vector<double> real() const;
    std::vector<double> modulus() const;
};

// Quadrature span factor K; also sets the Nyquist rule below.
inline constexpr double kSpanHalfwidths = 50.0;

// Largest grid spacing accepted by envelope_g / envelope_G: pi / (10 K halfwidth).
double nyquist_spacing(const SpectralAmplitude& s);

// sin((2N+1) x) / sin(x) with x = dOmega tau / 2, continuous at the poles.
double dirichlet_F(double tau, int n_side_modes, double mode_spacing);

// sum_m exp(i phi_m) exp(-i m dOmega tau).
cplx generalized_F(double tau, const ModeComb& c);

// Comb factor of the exchange-symmetric pair amplitude, (F(tau) + F(-tau)) / 2.
// Identical to generalized_F for a locked comb.
cplx symmetric_F(double tau, const ModeComb& c);

// Comb factor seen by first-order coherence: sum_m w_m exp(-i m dOmega tau),
// with w_m = cos^2((phi_m - phi_-m) / 2) the spectral weight of line m.
cplx coherence_F(double tau, const ModeComb& c);

// sum_m w_m: the period-averaged |symmetric_F|^2 and coherence_F(0).
double comb_weight_sum(const ModeComb& c);

// Closed-form envelopes, normalized to 1 at tau = 0.
//   g(tau) = int psi(W) exp(-i W tau) dW,  G(tau) = int |psi(W)|^2 exp(+i W tau) dW
cplx envelope_g_at(const SpectralAmplitude& s, double tau);
cplx envelope_G_at(const SpectralAmplitude& s, double tau);

// The same by numerical quadrature (cross-check path).
cplx envelope_g_quadrature(const SpectralAmplitude& s, double tau, const TransformOptions& opt = {});
cplx envelope_G_quadrature(const SpectralAmplitude& s, double tau, const TransformOptions& opt = {});

enum class TransformMethod { ClosedForm, Quadrature };

CorrelationTrace envelope_g(const SpectralAmplitude& s, const TimeGrid& grid,
                            TransformMethod method = TransformMethod::ClosedForm,
                            const TransformOptions& opt = {});
CorrelationTrace envelope_G(const SpectralAmplitude& s, const TimeGrid& grid,
                            TransformMethod method = TransformMethod::ClosedForm,
                            const TransformOptions& opt = {});

// Two-photon amplitude A(tau), exchange-symmetrized:
//   A(tau) = (g(tau) F(-tau) + g(-tau) F(tau)) / 2,   A(0) = F(0).
// For a locked comb with a centered envelope this is g(tau) F(tau).
cplx pair_amplitude(const ModeComb& c, double tau);

// First-order coherence e^{i wp tau/2} G(tau) F_coh(tau) / F_coh(0).
cplx coherence_at(const ModeComb& c, double tau);

// Throws GridError unless the grid puts >= 8 samples on each comb peak.
void require_comb_resolved(const ModeComb& c, const TimeGrid& grid);

// Gamma^2(tau) = |A(tau)|^2; (2N+1)^2 at tau = 0 for a locked comb.
CorrelationTrace gamma2_mode_locked(const ModeComb& c, const TimeGrid& grid);

// Rectangular moving average of width T_R with reflective padding.
// Requires T_R >= 3 t_r.
CorrelationTrace gamma2_detector_averaged(const CorrelationTrace& trace, double resolution,
                                          double round_trip_time);

// Relative deviation of an averaged trace from A |g|^2 with A = comb_weight_sum,
// taken over the central fraction of the grid.
double averaged_envelope_deviation(const CorrelationTrace& averaged, const ModeComb& c,
                                   double central_fraction);

CorrelationTrace gamma1_coherence(const ModeComb& c, const TimeGrid& grid);

}  // namespace twophoton
