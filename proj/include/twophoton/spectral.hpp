#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace twophoton {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Shape { Lorentzian, Gaussian, Rectangular };

std::string_view to_string(Shape s);
Shape parse_shape(std::string_view name);

// Frequency inputs may be given as angular (rad/s) or ordinary (Hz) values.
// Everything is computed in angular units.
enum class FrequencyUnits { Angular, Ordinary };

std::string_view to_string(FrequencyUnits u);
FrequencyUnits parse_units(std::string_view name);
double to_angular(double value, FrequencyUnits units);

// Single-mode (or wideband) spectral amplitude psi(Omega), peak-normalized.
//
// The profile is real and even about `center`:
//   Lorentzian   1 / (1 + x^2 / w^2)   (w is the half width at half maximum)
//   Gaussian     exp(-x^2 / (2 w^2))
//   Rectangular  1 for |x| <= w
// and is multiplied by exp(i * phase).
class SpectralAmplitude {
public:
    SpectralAmplitude(Shape shape, double halfwidth, double center = 0.0, double phase = 0.0);

    Shape shape() const noexcept { return shape_; }
    double halfwidth() const noexcept { return halfwidth_; }
    double center() const noexcept { return center_; }
    double phase() const noexcept { return phase_; }

    cplx operator()(double omega) const;

    // Real profile as a function of the detuning from center.
    double profile(double detuning) const;

    // Integral of the profile over all detunings, and of its square.
    double profile_integral() const;
    double power_integral() const;

    // |tau| beyond which |g(tau)| stays below tol.
    double temporal_support(double tol) const;

    // True for profiles with compact frequency support.
    bool compact() const noexcept { return shape_ == Shape::Rectangular; }

private:
    Shape shape_;
    double halfwidth_;
    double center_;
    double phase_;
};

cplx eval_spectrum(const SpectralAmplitude& s, double omega);

// Uniform random phases in [0, 2pi) for 2N+1 modes, reproducible from seed.
std::vector<double> random_mode_phases(int n_side_modes, std::uint64_t seed);

// Comb of 2N+1 cavity modes. mode_phases[k] belongs to m = k - N.
class ModeComb {
public:
    ModeComb(int n_side_modes, double mode_spacing, double pump_frequency,
             SpectralAmplitude single_mode, std::vector<double> mode_phases = {});

    int n_side_modes() const noexcept { return n_; }
    int mode_count() const noexcept { return 2 * n_ + 1; }
    double mode_spacing() const noexcept { return spacing_; }
    double pump_frequency() const noexcept { return pump_; }
    const SpectralAmplitude& single_mode() const noexcept { return mode_; }
    const std::vector<double>& mode_phases() const noexcept { return phases_; }

    double mode_phase(int m) const { return phases_.at(static_cast<std::size_t>(m + n_)); }
    double round_trip_time() const noexcept { return kTwoPi / spacing_; }
    bool is_locked() const noexcept { return locked_; }

    ModeComb with_phases(std::vector<double> phases) const;
    ModeComb with_single_mode(SpectralAmplitude s) const;

    // Cached per-mode coefficients, indexed like mode_phases:
    // exp(i phi_m); the exchange-symmetric weight (exp(i phi_m) + exp(i phi_-m)) / 2;
    // and its squared modulus, the spectral weight of line m.
    const std::vector<cplx>& phasors() const noexcept { return phasors_; }
    const std::vector<cplx>& symmetric_coefficients() const noexcept { return symmetric_; }
    const std::vector<double>& line_weights() const noexcept { return weights_; }

private:
    int n_;
    double spacing_;
    double pump_;
    SpectralAmplitude mode_;
    std::vector<double> phases_;
    bool locked_;
    std::vector<cplx> phasors_;
    std::vector<cplx> symmetric_;
    std::vector<double> weights_;
};

// Joint spectral amplitude sum_m exp(i phi_m) psi(Omega + m dOmega).
cplx comb_joint_amplitude(const ModeComb& c, double omega);

// Uniform sampling grid in seconds.
class TimeGrid {
public:
    TimeGrid(double t_min, double t_max, std::size_t n_points);

    double t_min() const noexcept { return t_min_; }
    double t_max() const noexcept { return t_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return (t_max_ - t_min_) / static_cast<double>(n_ - 1); }

    // Written as a weighted mean of the endpoints so that both endpoints and
    // the midpoint of a symmetric grid are exact.
    double operator[](std::size_t i) const noexcept {
        const double last = static_cast<double>(n_ - 1);
        const double k = static_cast<double>(i);
        return (t_min_ * (last - k) + t_max_ * k) / last;
    }

    std::vector<double> values() const;

private:
    double t_min_;
    double t_max_;
    std::size_t n_;
};

}  // namespace twophoton
