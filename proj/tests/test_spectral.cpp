#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twophoton/errors.hpp"
#include "twophoton/spectral.hpp"

using namespace twophoton;

namespace {
constexpr double kSpacing = 1.0;  // rad/s; the tests work in units of dOmega

ModeComb lorentz_comb(int n, double width = 0.01, std::vector<double> phases = {}) {
    return ModeComb(n, kSpacing, 1000.0, SpectralAmplitude(Shape::Lorentzian, width),
                    std::move(phases));
}
}  // namespace

TEST_CASE("eval_spectrum peak and half width") {
    const SpectralAmplitude l(Shape::Lorentzian, 2.0, 5.0);
    const cplx at_center = eval_spectrum(l, 5.0);
    CHECK(at_center.real() == 1.0);
    CHECK(at_center.imag() == 0.0);
    // Real Lorentzian: one half at center + halfwidth.
    CHECK(std::abs(eval_spectrum(l, 7.0)) == doctest::Approx(0.5).epsilon(1e-15));

    const SpectralAmplitude g(Shape::Gaussian, 3.0, -1.0);
    CHECK(std::abs(eval_spectrum(g, 2.0)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));

    const SpectralAmplitude r(Shape::Rectangular, 1.5);
    CHECK(std::abs(eval_spectrum(r, 1.5)) == 1.0);
    CHECK(std::abs(eval_spectrum(r, 1.5000001)) == 0.0);
}

TEST_CASE("amplitude phase multiplies the profile") {
    const SpectralAmplitude s(Shape::Gaussian, 1.0, 0.0, 0.7);
    const cplx v = eval_spectrum(s, 0.3);
    CHECK(std::arg(v) == doctest::Approx(0.7));
    CHECK(std::abs(v) == doctest::Approx(std::exp(-0.045)));
}

TEST_CASE("spectral amplitude invariants") {
    CHECK_THROWS_AS(SpectralAmplitude(Shape::Lorentzian, 0.0), InvalidArgument);
    CHECK_THROWS_AS(SpectralAmplitude(Shape::Gaussian, -1.0), InvalidArgument);
    for (Shape shape : {Shape::Lorentzian, Shape::Gaussian, Shape::Rectangular}) {
        const SpectralAmplitude s(shape, 0.8, 0.25, 1.1);
        const double peak = std::abs(s(0.25));
        CHECK(peak == doctest::Approx(1.0));
        for (double x : {0.01, 0.3, 0.79, 1.7, 4.0}) {
            CHECK(std::abs(s(0.25 + x)) == std::abs(s(0.25 - x)));
            CHECK(std::abs(s(0.25 + x)) <= peak);
        }
    }
}

TEST_CASE("profile integrals") {
    const double w = 0.37;
    CHECK(SpectralAmplitude(Shape::Lorentzian, w).profile_integral() == doctest::Approx(kPi * w));
    CHECK(SpectralAmplitude(Shape::Gaussian, w).power_integral() ==
          doctest::Approx(std::sqrt(kPi) * w));
    CHECK(SpectralAmplitude(Shape::Rectangular, w).power_integral() == doctest::Approx(2 * w));
    // Numerical check of the Gaussian profile integral.
    const double num = static_cast<double>(oracle::simpson(
        [&](long double x) { return oracle::profile(Shape::Gaussian, w, static_cast<double>(x)); },
        -20 * w, 20 * w, 4000));
    CHECK(num == doctest::Approx(std::sqrt(2 * kPi) * w).epsilon(1e-12));
}

TEST_CASE("shape, unit and name parsing") {
    CHECK(parse_shape("gaussian") == Shape::Gaussian);
    CHECK(to_string(Shape::Rectangular) == "rectangular");
    CHECK_THROWS_AS(parse_shape("voigt"), InvalidArgument);
    CHECK(parse_units("ordinary") == FrequencyUnits::Ordinary);
    CHECK(to_angular(1.0, FrequencyUnits::Ordinary) == doctest::Approx(kTwoPi));
    CHECK(to_angular(3.0, FrequencyUnits::Angular) == 3.0);
}

TEST_CASE("comb with one mode is the single-mode spectrum") {
    const ModeComb c = lorentz_comb(0, 0.2);
    for (double w : {-3.0, -0.1, 0.0, 0.05, 1.7}) CHECK(comb_joint_amplitude(c, w) == eval_spectrum(c.single_mode(), w));
}

TEST_CASE("comb joint amplitude against term-by-term sums") {
    // N = 2, locked, Omega = 0
    const ModeComb c2 = lorentz_comb(2);
    const cplx v = comb_joint_amplitude(c2, 0.0);
    CHECK(v.real() == doctest::Approx(1.00024997875203104923876753096).epsilon(1e-15));
    CHECK(std::abs(v.imag()) < 1e-15);
    CHECK(std::abs(v - oracle::joint_amplitude(c2, 0.0)) < 1e-14);

    // N = 1, phases (0, pi, 0) indexed m = -1, 0, +1; at Omega = -dOmega the
    // unphased m = +1 line sits on its center and the pi-phased m = 0 line
    // contributes a small negative tail.
    const ModeComb c1 = lorentz_comb(1, 0.01, {0.0, kPi, 0.0});
    const cplx u = comb_joint_amplitude(c1, -1.0);
    CHECK(std::abs(u) == doctest::Approx(0.999925009374015724599385765281).epsilon(1e-14));
    CHECK(std::abs(u - oracle::joint_amplitude(c1, -1.0)) < 1e-14);
}

TEST_CASE("locked comb is even in Omega") {
    for (Shape shape : {Shape::Lorentzian, Shape::Gaussian, Shape::Rectangular}) {
        const ModeComb c(6, kSpacing, 1000.0, SpectralAmplitude(shape, 0.1));
        for (double w = 0.0; w < 7.0; w += 0.173) {
            const cplx a = comb_joint_amplitude(c, w), b = comb_joint_amplitude(c, -w);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("comb is periodic away from its edges") {
    const int n = 8;
    const ModeComb c = lorentz_comb(n, 0.05);
    const double bound = 10.0 * std::abs(eval_spectrum(c.single_mode(), n * kSpacing));
    const double reach = (n - 1) * kSpacing / 2.0;
    for (double w = -reach; w <= reach; w += 0.0917)
        CHECK(std::abs(comb_joint_amplitude(c, w + kSpacing) - comb_joint_amplitude(c, w)) < bound);
}

TEST_CASE("mode comb invariants") {
    const SpectralAmplitude s(Shape::Lorentzian, 0.01);
    CHECK_THROWS_AS(ModeComb(-1, 1.0, 1.0, s), InvalidArgument);
    CHECK_THROWS_AS(ModeComb(2, 0.0, 1.0, s), InvalidArgument);
    CHECK_THROWS_AS(ModeComb(2, 1.0, 0.0, s), InvalidArgument);
    CHECK_THROWS_AS(ModeComb(2, 1.0, 1.0, s, {0.0, 0.0}), InvalidArgument);
    try {
        ModeComb(2, 1.0, 1.0, SpectralAmplitude(Shape::Lorentzian, 0.5));
        FAIL("unresolved modes accepted");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("mode_spacing/2") != std::string::npos);
    }

    const ModeComb c(3, 2.0, 10.0, s);
    CHECK(c.mode_count() == 7);
    CHECK(c.mode_phases().size() == 7);
    CHECK(c.is_locked());
    CHECK(c.round_trip_time() == doctest::Approx(kPi));
    CHECK_FALSE(c.with_phases(random_mode_phases(3, 4)).is_locked());
}

TEST_CASE("symmetric coefficients and line weights") {
    const auto phases = random_mode_phases(4, 11);
    const ModeComb c(4, 1.0, 1.0, SpectralAmplitude(Shape::Lorentzian, 0.01), phases);
    for (int m = -4; m <= 4; ++m) {
        const std::size_t k = static_cast<std::size_t>(m + 4), kn = static_cast<std::size_t>(4 - m);
        const cplx expect = 0.5 * (std::polar(1.0, phases[k]) + std::polar(1.0, phases[kn]));
        CHECK(std::abs(c.symmetric_coefficients()[k] - expect) < 1e-15);
        CHECK(c.line_weights()[k] == doctest::Approx(std::norm(expect)));
    }
    CHECK(c.line_weights()[4] == doctest::Approx(1.0));
}

TEST_CASE("random phases are reproducible and in range") {
    const auto a = random_mode_phases(10, 99), b = random_mode_phases(10, 99);
    CHECK(a == b);
    CHECK(a.size() == 21);
    CHECK(a != random_mode_phases(10, 100));
    for (double p : a) {
        CHECK(p >= 0.0);
        CHECK(p < kTwoPi);
    }
}

TEST_CASE("time grid") {
    const TimeGrid g(-1.0, 3.0, 9);
    CHECK(g.size() == 9);
    CHECK(g.spacing() == 0.5);
    CHECK(g[0] == -1.0);
    CHECK(g[8] == 3.0);
    CHECK(g[2] == 0.0);
    CHECK(g.values().size() == 9);
    const TimeGrid sym(-7.3, 7.3, 1001);
    CHECK(sym[500] == 0.0);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 5), InvalidArgument);
}
