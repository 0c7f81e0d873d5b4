#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twophoton/correlation.hpp"
#include "twophoton/errors.hpp"
#include "twophoton/parallel.hpp"

using namespace twophoton;

namespace {
constexpr double kSpacing = kTwoPi;  // t_r = 1 s keeps delays readable
constexpr double kTr = 1.0;

ModeComb make_comb(int n, double width_fraction, Shape shape = Shape::Lorentzian,
                   std::vector<double> phases = {}) {
    return ModeComb(n, kSpacing, 1e3, SpectralAmplitude(shape, width_fraction * kSpacing),
                    std::move(phases));
}

// Grid over [-reach, reach] fine enough for the comb of c.
TimeGrid comb_grid(const ModeComb& c, double reach, int per_peak = 16) {
    const double dt = kTr / (per_peak * c.mode_count());
    const auto half = static_cast<std::size_t>(std::ceil(reach / dt));
    return TimeGrid(-dt * half, dt * half, 2 * half + 1);
}
}  // namespace

TEST_CASE("dirichlet_F examples") {
    for (int n : {0, 1, 4, 10}) CHECK(dirichlet_F(0.0, n, 3.0) == 2 * n + 1);
    CHECK(dirichlet_F(kPi, 1, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(dirichlet_F(kTwoPi / 7.0, 3, 1.0)) < 1e-14);
    for (int n : {0, 2, 7}) {
        CHECK(dirichlet_F(kTwoPi / 2.5, n, 2.5) == doctest::Approx(2 * n + 1).epsilon(1e-14));
        CHECK(dirichlet_F(-3.0 * kTwoPi / 2.5, n, 2.5) == doctest::Approx(2 * n + 1).epsilon(1e-14));
    }
}

TEST_CASE("dirichlet_F matches the mode sum and is continuous at its poles") {
    const std::vector<double> zeros(13, 0.0);
    for (double tau = -2.3; tau < 2.3; tau += 0.0137) {
        const double expect = oracle::comb_factor(zeros, kSpacing, tau).real();
        CHECK(dirichlet_F(tau, 6, kSpacing) == doctest::Approx(expect).epsilon(1e-11).scale(13));
    }
    for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
        const double expect = oracle::comb_factor(zeros, kSpacing, 1.0 + eps).real();
        CHECK(dirichlet_F(1.0 + eps, 6, kSpacing) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("generalized_F") {
    const ModeComb locked = make_comb(5, 0.01);
    for (double tau : {0.0, 0.013, 0.5, 1.0, 2.77}) {
        const cplx f = generalized_F(tau, locked);
        CHECK(f.real() == dirichlet_F(tau, 5, kSpacing));
        CHECK(f.imag() == 0.0);
    }
    const ModeComb flipped = make_comb(1, 0.01, Shape::Lorentzian, {0.0, 0.0, kPi});
    CHECK(std::abs(generalized_F(0.0, flipped) - cplx(1.0, 0.0)) < 1e-15);

    const auto phases = random_mode_phases(5, 3);
    const ModeComb random = locked.with_phases(phases);
    for (double tau : {0.0, 0.21, 0.5, 1.37})
        CHECK(std::abs(generalized_F(tau, random) - oracle::comb_factor(phases, kSpacing, tau)) < 1e-12);
}

TEST_CASE("random phases give an incoherent sum at a full round trip") {
    const ModeComb base = make_comb(5, 0.01);
    double mean = 0.0;
    const int draws = 1000;
    for (int s = 0; s < draws; ++s)
        mean += std::norm(generalized_F(kTr, base.with_phases(random_mode_phases(5, 1000 + s))));
    mean /= draws;
    // Mean 11, standard deviation of the mean sqrt(110 / 1000).
    CHECK(std::abs(mean - 11.0) < 4.0 * std::sqrt(0.11));
    CHECK(mean < 0.2 * 121.0);
}

TEST_CASE("symmetric and coherence comb factors") {
    const auto phases = random_mode_phases(4, 8);
    const ModeComb c = make_comb(4, 0.01, Shape::Lorentzian, phases);
    for (double tau : {0.0, 0.1, 0.33, 0.9}) {
        const cplx expect = 0.5 * (generalized_F(tau, c) + generalized_F(-tau, c));
        CHECK(std::abs(symmetric_F(tau, c) - expect) < 1e-12);
    }
    double w = 0.0;
    for (double x : c.line_weights()) w += x;
    CHECK(comb_weight_sum(c) == doctest::Approx(w));
    CHECK(std::abs(coherence_F(0.0, c) - cplx(w, 0.0)) < 1e-12);
    const ModeComb locked = make_comb(4, 0.01);
    CHECK(comb_weight_sum(locked) == 9.0);
    CHECK(std::abs(coherence_F(0.3, locked) - generalized_F(0.3, locked)) < 1e-12);
}

TEST_CASE("envelope_g closed forms") {
    const double gamma = 0.01 * kSpacing;
    const SpectralAmplitude l(Shape::Lorentzian, gamma);
    CHECK(std::abs(envelope_g_at(l, 1.0 / gamma)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    for (Shape shape : {Shape::Lorentzian, Shape::Gaussian, Shape::Rectangular})
        CHECK(envelope_g_at(SpectralAmplitude(shape, 2.0, 0.4), 0.0) == cplx(1.0, 0.0));
    // A shifted line only adds the carrier exp(-i center tau).
    const SpectralAmplitude shifted(Shape::Gaussian, 2.0, 3.0);
    const cplx v = envelope_g_at(shifted, 0.7);
    CHECK(std::abs(v) == doctest::Approx(std::exp(-0.5 * 4.0 * 0.49)));
    CHECK(std::abs(v / std::abs(v) - std::polar(1.0, -2.1)) < 1e-14);
}

TEST_CASE("rectangular envelope has a sinc zero at pi / W") {
    const double w = 3.0;
    const SpectralAmplitude r(Shape::Rectangular, w);
    const double tau = kPi / w;
    // Independent Simpson rule with 1e5 intervals.
    const long double num = oracle::simpson(
        [&](long double x) { return std::cos(x * tau); }, -w, w, 100000);
    CHECK(std::abs(static_cast<double>(num) / (2.0 * w)) < 1e-9);
    CHECK(std::abs(envelope_g_at(r, tau)) < 1e-9);
    CHECK(std::abs(envelope_g_quadrature(r, tau)) < 1e-9);
}

TEST_CASE("envelope_G against an independent quadrature") {
    const double w = 0.5;
    auto oracle_G = [&](Shape shape, double tau) {
        const double span = shape == Shape::Lorentzian ? 1000.0 * w : 40.0 * w;
        const std::size_t n = shape == Shape::Lorentzian ? 2000000 : 200000;
        auto p = [&](long double x) {
            const double v = oracle::profile(shape, w, static_cast<double>(x));
            return static_cast<long double>(v * v) * std::cos(x * tau);
        };
        auto p0 = [&](long double x) {
            const double v = oracle::profile(shape, w, static_cast<double>(x));
            return static_cast<long double>(v * v);
        };
        return static_cast<double>(oracle::simpson(p, -span, span, n) /
                                   oracle::simpson(p0, -span, span, n));
    };
    // Squared Lorentzian: (1 + w|tau|) exp(-w|tau|), not exp(-2 w |tau|).
    const SpectralAmplitude l(Shape::Lorentzian, w);
    for (double tau : {0.5, 2.0, 6.0}) {
        const double expect = oracle_G(Shape::Lorentzian, tau);
        CHECK(std::abs(envelope_G_at(l, tau)) == doctest::Approx(expect).epsilon(1e-8));
    }
    CHECK(std::abs(envelope_G_at(l, 1.0 / w)) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-15));
    // Squared Gaussian: 1/e at tau = 2 / w.
    const SpectralAmplitude g(Shape::Gaussian, w);
    CHECK(oracle_G(Shape::Gaussian, 2.0 / w) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::abs(envelope_G_at(g, 2.0 / w)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    for (Shape shape : {Shape::Lorentzian, Shape::Gaussian, Shape::Rectangular})
        CHECK(envelope_G_at(SpectralAmplitude(shape, w), 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("closed form and quadrature paths agree") {
    for (Shape shape : {Shape::Lorentzian, Shape::Gaussian, Shape::Rectangular}) {
        const SpectralAmplitude s(shape, 1.3);
        for (double tau : {0.0, 0.05, 0.4, 1.1, 3.0, 9.0}) {
            CHECK(std::abs(envelope_g_at(s, tau) - envelope_g_quadrature(s, tau)) < 1e-8);
            CHECK(std::abs(envelope_G_at(s, tau) - envelope_G_quadrature(s, tau)) < 1e-8);
        }
    }
}

TEST_CASE("envelope traces and the Nyquist rule") {
    const SpectralAmplitude s(Shape::Gaussian, 0.2);
    const double dmax = nyquist_spacing(s);
    CHECK(dmax == doctest::Approx(kPi / (10.0 * 0.2 * kSpanHalfwidths)));
    const TimeGrid fine(-45.0 * dmax, 45.0 * dmax, 101);
    const auto tr = envelope_g(s, fine);
    CHECK(tr.kind == TraceKind::Amplitude);
    CHECK(tr.samples[50] == cplx(1.0, 0.0));
    const auto q = envelope_g(s, fine, TransformMethod::Quadrature);
    for (std::size_t i = 0; i < fine.size(); i += 10) CHECK(std::abs(q.samples[i] - tr.samples[i]) < 1e-8);
    const TimeGrid coarse(-1.0, 1.0, 3);
    CHECK_THROWS_AS(envelope_g(s, coarse), NyquistError);
    CHECK_THROWS_AS(envelope_G(s, coarse), NyquistError);
}

TEST_CASE("pair amplitude") {
    const ModeComb locked = make_comb(4, 0.02);
    for (double tau : {-0.7, 0.0, 0.03, 1.0, 2.2})
        CHECK(std::abs(pair_amplitude(locked, tau) -
                       envelope_g_at(locked.single_mode(), tau) * generalized_F(tau, locked)) < 1e-12);
    const ModeComb random = locked.with_phases(random_mode_phases(4, 5));
    for (double tau : {-0.7, 0.0, 0.03, 1.0, 2.2})
        CHECK(std::abs(pair_amplitude(random, tau) - oracle::pair_amp(random, tau)) < 1e-12);
    CHECK(std::abs(pair_amplitude(random, 0.0) - generalized_F(0.0, random)) < 1e-12);
}

TEST_CASE("gamma2_mode_locked examples") {
    const double gamma = 0.01 * kSpacing;
    const ModeComb c = make_comb(10, 0.01);
    const TimeGrid grid(-2.0, 2.0, 4 * 16 * 21 + 1);
    const auto t = gamma2_mode_locked(c, grid);
    CHECK(t.kind == TraceKind::Intensity);
    CHECK(t.normalization == doctest::Approx(std::pow(kPi * gamma, 2)));
    const std::size_t mid = grid.size() / 2;
    CHECK(t.samples[mid].real() == doctest::Approx(441.0).epsilon(1e-15));
    const std::size_t one = mid + 16 * 21;
    CHECK(grid[one] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.samples[one].real() == doctest::Approx(441.0 * std::exp(-2.0 * gamma)).epsilon(1e-12));
    const std::size_t half = mid + 8 * 21;
    CHECK(t.samples[half].real() < 1e-2 * t.samples[mid].real());
    CHECK(t.samples[half].real() == doctest::Approx(std::exp(-gamma)).epsilon(1e-10));
    for (const auto& v : t.samples) {
        CHECK(v.real() >= 0.0);
        CHECK(v.imag() == 0.0);
    }
    CHECK_THROWS_AS(gamma2_mode_locked(c, TimeGrid(-2.0, 2.0, 101)), GridError);
}

TEST_CASE("gamma2 of a single mode is |g|^2") {
    const ModeComb c = make_comb(0, 0.05);
    const TimeGrid grid(-10.0, 10.0, 2001);
    const auto t = gamma2_mode_locked(c, grid);
    for (std::size_t i = 0; i < grid.size(); i += 97)
        CHECK(t.samples[i].real() == doctest::Approx(std::exp(-2.0 * 0.05 * kSpacing * std::abs(grid[i]))));
}

TEST_CASE("correlation trace invariants") {
    const TimeGrid g(0.0, 1.0, 3);
    CHECK_THROWS_AS(CorrelationTrace(g, {1.0, 2.0}, TraceKind::Amplitude), InvalidArgument);
    CHECK_THROWS_AS(CorrelationTrace(g, {1.0, -0.5, 1.0}, TraceKind::Intensity), InvalidArgument);
    CHECK_THROWS_AS(CorrelationTrace(g, {1.0, cplx(0.5, 1e-3), 1.0}, TraceKind::Intensity),
                    InvalidArgument);
    CHECK_NOTHROW(CorrelationTrace(g, {1.0, cplx(0.5, 1e-13), 1.0}, TraceKind::Intensity));
    CHECK_NOTHROW(CorrelationTrace(g, {1.0, -0.5, 1.0}, TraceKind::Amplitude));
}

TEST_CASE("detector averaging") {
    const TimeGrid grid(-40.0, 40.0, 8001);
    SUBCASE("constant input") {
        const CorrelationTrace flat(grid, std::vector<cplx>(grid.size(), 2.5), TraceKind::Intensity);
        const auto out = gamma2_detector_averaged(flat, 10.0, kTr);
        for (const auto& v : out.samples) CHECK(v.real() == doctest::Approx(2.5).epsilon(1e-14));
    }
    SUBCASE("smooth single-mode input is unchanged") {
        const ModeComb c = make_comb(0, 0.001);
        const auto in = gamma2_mode_locked(c, grid);
        const auto out = gamma2_detector_averaged(in, 3.0, kTr);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(grid[i]) > 3.0 && std::abs(grid[i]) < 35.0)
                CHECK(out.samples[i].real() == doctest::Approx(in.samples[i].real()).epsilon(1e-3));
    }
    SUBCASE("direct moving average") {
        const ModeComb c = make_comb(20, 0.01);
        const TimeGrid g2 = comb_grid(c, 30.0, 8);
        const auto in = gamma2_mode_locked(c, g2);
        const auto out = gamma2_detector_averaged(in, 10.0, kTr);
        auto width = static_cast<long>(std::llround(10.0 / g2.spacing()));
        if (width % 2 == 0) ++width;
        for (std::size_t i = g2.size() / 4; i < 3 * g2.size() / 4; i += 1013) {
            long double acc = 0;
            for (long k = -width / 2; k <= width / 2; ++k) acc += in.samples[i + k].real();
            CHECK(out.samples[i].real() == doctest::Approx(static_cast<double>(acc / width)).epsilon(1e-12));
        }
    }
    SUBCASE("window too short") {
        const CorrelationTrace flat(grid, std::vector<cplx>(grid.size(), 1.0), TraceKind::Intensity);
        CHECK_THROWS_AS(gamma2_detector_averaged(flat, 2.9, kTr), WindowError);
        const CorrelationTrace amp(grid, std::vector<cplx>(grid.size(), 1.0), TraceKind::Amplitude);
        CHECK_THROWS_AS(gamma2_detector_averaged(amp, 10.0, kTr), InvalidArgument);
    }
}

TEST_CASE("averaged comb approaches A |g|^2") {
    // Narrow lines: the box average of exp(-2 gamma |tau|) is close to the
    // function itself and the comb washes out to A = 2N + 1.
    const ModeComb narrow = make_comb(20, 0.001);
    const TimeGrid g = comb_grid(narrow, 60.0, 8);
    const auto avg = gamma2_detector_averaged(gamma2_mode_locked(narrow, g), 10.0, kTr);
    CHECK(averaged_envelope_deviation(avg, narrow, 0.6) < 0.05);

    // With gamma = 0.01 dOmega the window spans 0.63 / gamma; away from the
    // cusp the average exceeds the envelope by about sinh(x)/x, x = gamma T_R
    // (the window edges sit on comb peaks, which adds a little more).
    const double gamma = 0.01 * kSpacing;
    const ModeComb wide = make_comb(20, 0.01);
    const TimeGrid g2 = comb_grid(wide, 60.0, 8);
    const auto avg2 = gamma2_detector_averaged(gamma2_mode_locked(wide, g2), 10.0, kTr);
    const double x = gamma * 10.0;
    const std::size_t i = g2.size() / 2 + static_cast<std::size_t>(std::llround(20.0 / g2.spacing()));
    const double ratio = avg2.samples[i].real() / (41.0 * std::exp(-2.0 * gamma * g2[i]));
    CHECK(ratio == doctest::Approx(std::sinh(x) / x).epsilon(2e-2));
    CHECK(averaged_envelope_deviation(avg2, wide, 0.6) > 0.05);
}

TEST_CASE("first-order coherence") {
    const double gamma = 0.01 * kSpacing;
    const ModeComb c = make_comb(10, 0.01);
    const TimeGrid grid(-1.0, 1.0, 2 * 16 * 21 + 1);
    const auto t = gamma1_coherence(c, grid);
    const std::size_t mid = grid.size() / 2;
    CHECK(std::abs(t.samples[mid]) == doctest::Approx(1.0).epsilon(1e-15));
    const double g_tr = (1.0 + gamma) * std::exp(-gamma);
    CHECK(std::abs(t.samples.back()) == doctest::Approx(g_tr).epsilon(1e-12));
    // At half a round trip the comb factor is 1 out of 2N + 1.
    const double g_half = (1.0 + 0.5 * gamma) * std::exp(-0.5 * gamma);
    CHECK(std::abs(t.samples[mid + 8 * 21]) == doctest::Approx(g_half / 21.0).epsilon(1e-10));
    CHECK(std::abs(coherence_at(make_comb(60, 0.01), 0.5)) < 1e-2);
    // Carrier at half the pump frequency.
    for (double tau : {0.25, 0.61}) {
        const cplx expect = std::polar(1.0, 0.5 * 1e3 * tau) *
                            envelope_G_at(c.single_mode(), tau) * generalized_F(tau, c) / 21.0;
        CHECK(std::abs(coherence_at(c, tau) - expect) < 1e-12);
    }
}

TEST_CASE("traces do not depend on the thread count") {
    const ModeComb c = make_comb(12, 0.01, Shape::Lorentzian, random_mode_phases(12, 2));
    const TimeGrid grid = comb_grid(c, 3.0);
    set_thread_count(1);
    const auto a = gamma2_mode_locked(c, grid);
    const auto ga = envelope_G(c.single_mode(), TimeGrid(-1.0, 1.0, 1001), TransformMethod::Quadrature);
    set_thread_count(4);
    const auto b = gamma2_mode_locked(c, grid);
    const auto gb = envelope_G(c.single_mode(), TimeGrid(-1.0, 1.0, 1001), TransformMethod::Quadrature);
    set_thread_count(0);
    CHECK(a.samples == b.samples);
    CHECK(ga.samples == gb.samples);
}
