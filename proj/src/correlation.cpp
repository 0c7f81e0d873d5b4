#include "twophoton/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twophoton/errors.hpp"
#include "twophoton/parallel.hpp"

namespace twophoton {

CorrelationTrace::CorrelationTrace(TimeGrid g, std::vector<cplx> s, TraceKind k, double norm)
    : grid(g), samples(std::move(s)), kind(k), normalization(norm) {
    if (samples.size() != grid.size())
        throw InvalidArgument("trace has " + std::to_string(samples.size()) +
                              " samples for a grid of " + std::to_string(grid.size()));
    if (kind == TraceKind::Intensity) {
        double peak = 0.0;
        for (const auto& v : samples) peak = std::max(peak, std::abs(v));
        for (auto& v : samples) {
            if (v.real() < 0.0 || std::abs(v.imag()) > 1e-10 * peak)
                throw InvalidArgument("intensity trace must be real and non-negative");
            v = cplx(v.real(), 0.0);
        }
    }
}

std::vector<double> CorrelationTrace::real() const {
    std::vector<double> out(samples.size());
    std::transform(samples.begin(), samples.end(), out.begin(), [](cplx v) { return v.real(); });
    return out;
}

std::vector<double> CorrelationTrace::modulus() const {
    std::vector<double> out(samples.size());
    std::transform(samples.begin(), samples.end(), out.begin(), [](cplx v) { return std::abs(v); });
    return out;
}

double nyquist_spacing(const SpectralAmplitude& s) {
    return kPi / (10.0 * s.halfwidth() * kSpanHalfwidths);
}

double dirichlet_F(double tau, int n_side_modes, double mode_spacing) {
    // With x = k pi + e the ratio is sin(M e) / sin(e) for every k (M odd), so
    // reducing x first keeps the poles well conditioned.
    const double m = 2.0 * n_side_modes + 1.0;
    const double e = std::remainder(0.5 * mode_spacing * tau, kPi);
    if (std::abs(e) < 1e-6) return m * (1.0 - (m * m - 1.0) * e * e / 6.0);
    return std::sin(m * e) / std::sin(e);
}

namespace {

// sum_{m=-N}^{N} coef[m+N] exp(-i m theta)
template <class Coef>
cplx comb_series(const std::vector<Coef>& coef, int n, double theta) {
    const cplx step = std::polar(1.0, -theta);
    cplx z = std::polar(1.0, n * theta);
    cplx sum{};
    for (std::size_t k = 0; k < coef.size(); ++k) {
        sum += coef[k] * z;
        z *= step;
    }
    return sum;
}

void require_nyquist(const SpectralAmplitude& s, const TimeGrid& grid) {
    if (!(grid.spacing() < nyquist_spacing(s)))
        throw NyquistError("grid spacing " + std::to_string(grid.spacing()) +
                           " s undersamples the spectrum (limit pi/(10*K*halfwidth) = " +
                           std::to_string(nyquist_spacing(s)) + " s)");
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

cplx generalized_F(double tau, const ModeComb& c) {
    if (c.is_locked()) return dirichlet_F(tau, c.n_side_modes(), c.mode_spacing());
    return comb_series(c.phasors(), c.n_side_modes(), c.mode_spacing() * tau);
}

cplx symmetric_F(double tau, const ModeComb& c) {
    if (c.is_locked()) return dirichlet_F(tau, c.n_side_modes(), c.mode_spacing());
    return comb_series(c.symmetric_coefficients(), c.n_side_modes(), c.mode_spacing() * tau);
}

cplx coherence_F(double tau, const ModeComb& c) {
    if (c.is_locked()) return dirichlet_F(tau, c.n_side_modes(), c.mode_spacing());
    return comb_series(c.line_weights(), c.n_side_modes(), c.mode_spacing() * tau);
}

double comb_weight_sum(const ModeComb& c) {
    double sum = 0.0;
    for (double w : c.line_weights()) sum += w;
    return sum;
}

cplx envelope_g_at(const SpectralAmplitude& s, double tau) {
    const double w = s.halfwidth();
    double mag = 0.0;
    switch (s.shape()) {
        case Shape::Lorentzian: mag = std::exp(-w * std::abs(tau)); break;
        case Shape::Gaussian: mag = std::exp(-0.5 * w * w * tau * tau); break;
        case Shape::Rectangular: mag = sinc(w * tau); break;
    }
    if (s.center() == 0.0) return mag;
    return mag * std::polar(1.0, -s.center() * tau);
}

cplx envelope_G_at(const SpectralAmplitude& s, double tau) {
    const double w = s.halfwidth();
    double mag = 0.0;
    switch (s.shape()) {
        case Shape::Lorentzian: {
            const double a = w * std::abs(tau);
            mag = (1.0 + a) * std::exp(-a);
            break;
        }
        case Shape::Gaussian: mag = std::exp(-0.25 * w * w * tau * tau); break;
        case Shape::Rectangular: mag = sinc(w * tau); break;
    }
    if (s.center() == 0.0) return mag;
    return mag * std::polar(1.0, s.center() * tau);
}

cplx envelope_g_quadrature(const SpectralAmplitude& s, double tau, const TransformOptions& opt) {
    const double body = s.compact() ? s.halfwidth() : opt.span_halfwidths * s.halfwidth();
    const double v = even_cosine_transform([&](double x) { return s.profile(x); }, tau, body,
                                           s.compact(), opt);
    return (v / s.profile_integral()) * std::polar(1.0, -s.center() * tau);
}

cplx envelope_G_quadrature(const SpectralAmplitude& s, double tau, const TransformOptions& opt) {
    const double body = s.compact() ? s.halfwidth() : opt.span_halfwidths * s.halfwidth();
    const double v = even_cosine_transform(
        [&](double x) {
            const double p = s.profile(x);
            return p * p;
        },
        tau, body, s.compact(), opt);
    return (v / s.power_integral()) * std::polar(1.0, s.center() * tau);
}

namespace {

template <class F>
std::vector<cplx> sample_grid(const TimeGrid& grid, const F& f) {
    std::vector<cplx> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = f(grid[i]);
    });
    return out;
}

}  // namespace

CorrelationTrace envelope_g(const SpectralAmplitude& s, const TimeGrid& grid,
                            TransformMethod method, const TransformOptions& opt) {
    require_nyquist(s, grid);
    auto v = method == TransformMethod::ClosedForm
                 ? sample_grid(grid, [&](double t) { return envelope_g_at(s, t); })
                 : sample_grid(grid, [&](double t) { return envelope_g_quadrature(s, t, opt); });
    return {grid, std::move(v), TraceKind::Amplitude, s.profile_integral()};
}

CorrelationTrace envelope_G(const SpectralAmplitude& s, const TimeGrid& grid,
                            TransformMethod method, const TransformOptions& opt) {
    require_nyquist(s, grid);
    auto v = method == TransformMethod::ClosedForm
                 ? sample_grid(grid, [&](double t) { return envelope_G_at(s, t); })
                 : sample_grid(grid, [&](double t) { return envelope_G_quadrature(s, t, opt); });
    return {grid, std::move(v), TraceKind::Amplitude, s.power_integral()};
}

cplx pair_amplitude(const ModeComb& c, double tau) {
    const auto& s = c.single_mode();
    if (s.center() == 0.0) return envelope_g_at(s, tau) * symmetric_F(tau, c);
    return 0.5 * (envelope_g_at(s, tau) * generalized_F(-tau, c) +
                  envelope_g_at(s, -tau) * generalized_F(tau, c));
}

cplx coherence_at(const ModeComb& c, double tau) {
    const double carrier = std::fmod(0.5 * c.pump_frequency() * tau, kTwoPi);
    return std::polar(1.0, carrier) * envelope_G_at(c.single_mode(), tau) * coherence_F(tau, c) /
           comb_weight_sum(c);
}

void require_comb_resolved(const ModeComb& c, const TimeGrid& grid) {
    if (c.n_side_modes() == 0) return;
    const double limit = c.round_trip_time() / (8.0 * c.mode_count());
    if (grid.spacing() > limit)
        throw GridError("grid spacing " + std::to_string(grid.spacing()) +
                        " s puts fewer than 8 samples on a comb peak (need <= " +
                        std::to_string(limit) + " s)");
}

CorrelationTrace gamma2_mode_locked(const ModeComb& c, const TimeGrid& grid) {
    require_nyquist(c.single_mode(), grid);
    require_comb_resolved(c, grid);
    auto v = sample_grid(grid, [&](double t) { return cplx(std::norm(pair_amplitude(c, t)), 0.0); });
    const double scale = c.single_mode().profile_integral();
    return {grid, std::move(v), TraceKind::Intensity, scale * scale};
}

CorrelationTrace gamma2_detector_averaged(const CorrelationTrace& trace, double resolution,
                                          double round_trip_time) {
    if (trace.kind != TraceKind::Intensity)
        throw InvalidArgument("detector averaging needs an intensity trace");
    if (!(round_trip_time > 0.0)) throw InvalidArgument("round_trip_time must be positive");
    if (!(resolution >= 3.0 * round_trip_time))
        throw WindowError("resolution time must be at least 3 round trips for the comb to "
                          "average out");

    const std::size_t n = trace.samples.size();
    const double dt = trace.grid.spacing();
    auto width = static_cast<std::size_t>(std::llround(resolution / dt));
    if (width % 2 == 0) ++width;
    const auto half = static_cast<long long>(width / 2);
    const auto last = static_cast<long long>(n) - 1;

    // Reflection about the end samples (no repeat), folded as often as needed.
    auto reflect = [&](long long i) {
        if (last == 0) return 0LL;
        const long long period = 2 * last;
        i %= period;
        if (i < 0) i += period;
        return i <= last ? i : period - i;
    };

    const long long lo = -half;
    const long long hi = last + half;
    std::vector<long double> prefix(static_cast<std::size_t>(hi - lo + 2), 0.0L);
    for (long long i = lo; i <= hi; ++i) {
        const auto k = static_cast<std::size_t>(i - lo);
        prefix[k + 1] = prefix[k] + trace.samples[static_cast<std::size_t>(reflect(i))].real();
    }

    std::vector<cplx> out(n);
    for (long long i = 0; i <= last; ++i) {
        const auto a = static_cast<std::size_t>(i - half - lo);
        const auto b = static_cast<std::size_t>(i + half - lo + 1);
        out[static_cast<std::size_t>(i)] =
            cplx(static_cast<double>((prefix[b] - prefix[a]) / static_cast<long double>(width)),
                 0.0);
    }
    return {trace.grid, std::move(out), TraceKind::Intensity, trace.normalization};
}

double averaged_envelope_deviation(const CorrelationTrace& averaged, const ModeComb& c,
                                   double central_fraction) {
    const std::size_t n = averaged.samples.size();
    const auto first = static_cast<std::size_t>(std::floor(0.5 * (1.0 - central_fraction) * n));
    const std::size_t stop = n - first;
    const double a = comb_weight_sum(c);
    double worst = 0.0;
    for (std::size_t i = first; i < stop; ++i) {
        const double expected = a * std::norm(envelope_g_at(c.single_mode(), averaged.grid[i]));
        worst = std::max(worst, std::abs(averaged.samples[i].real() / expected - 1.0));
    }
    return worst;
}

CorrelationTrace gamma1_coherence(const ModeComb& c, const TimeGrid& grid) {
    require_nyquist(c.single_mode(), grid);
    require_comb_resolved(c, grid);
    auto v = sample_grid(grid, [&](double t) { return coherence_at(c, t); });
    return {grid, std::move(v), TraceKind::Amplitude,
            c.single_mode().power_integral() * comb_weight_sum(c)};
}

}  // namespace twophoton
