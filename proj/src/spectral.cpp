#include "twophoton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twophoton/errors.hpp"
#include "twophoton/random.hpp"

namespace twophoton {

std::string_view to_string(Shape s) {
    switch (s) {
        case Shape::Lorentzian: return "lorentzian";
        case Shape::Gaussian: return "gaussian";
        case Shape::Rectangular: return "rectangular";
    }
    return "unknown";
}

Shape parse_shape(std::string_view name) {
    if (name == "lorentzian") return Shape::Lorentzian;
    if (name == "gaussian") return Shape::Gaussian;
    if (name == "rectangular") return Shape::Rectangular;
    throw InvalidArgument("unknown spectral shape '" + std::string(name) +
                          "' (expected lorentzian, gaussian or rectangular)");
}

std::string_view to_string(FrequencyUnits u) {
    return u == FrequencyUnits::Angular ? "angular" : "ordinary";
}

FrequencyUnits parse_units(std::string_view name) {
    if (name == "angular") return FrequencyUnits::Angular;
    if (name == "ordinary") return FrequencyUnits::Ordinary;
    throw InvalidArgument("unknown frequency convention '" + std::string(name) +
                          "' (expected angular or ordinary)");
}

double to_angular(double value, FrequencyUnits units) {
    return units == FrequencyUnits::Ordinary ? kTwoPi * value : value;
}

SpectralAmplitude::SpectralAmplitude(Shape shape, double halfwidth, double center, double phase)
    : shape_(shape), halfwidth_(halfwidth), center_(center), phase_(phase) {
    if (!(halfwidth > 0.0) || !std::isfinite(halfwidth))
        throw InvalidArgument("spectral halfwidth must be positive and finite");
    if (!std::isfinite(center) || !std::isfinite(phase))
        throw InvalidArgument("spectral center and phase must be finite");
}

double SpectralAmplitude::profile(double detuning) const {
    const double x = detuning / halfwidth_;
    switch (shape_) {
        case Shape::Lorentzian: return 1.0 / (1.0 + x * x);
        case Shape::Gaussian: return std::exp(-0.5 * x * x);
        case Shape::Rectangular: return std::abs(x) <= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

cplx SpectralAmplitude::operator()(double omega) const {
    return std::polar(profile(omega - center_), phase_);
}

double SpectralAmplitude::profile_integral() const {
    switch (shape_) {
        case Shape::Lorentzian: return kPi * halfwidth_;
        case Shape::Gaussian: return std::sqrt(kTwoPi) * halfwidth_;
        case Shape::Rectangular: return 2.0 * halfwidth_;
    }
    return 0.0;
}

double SpectralAmplitude::power_integral() const {
    switch (shape_) {
        case Shape::Lorentzian: return 0.5 * kPi * halfwidth_;
        case Shape::Gaussian: return std::sqrt(kPi) * halfwidth_;
        case Shape::Rectangular: return 2.0 * halfwidth_;
    }
    return 0.0;
}

double SpectralAmplitude::temporal_support(double tol) const {
    switch (shape_) {
        case Shape::Lorentzian: return -std::log(tol) / halfwidth_;
        case Shape::Gaussian: return std::sqrt(-2.0 * std::log(tol)) / halfwidth_;
        case Shape::Rectangular: return 1.0 / (halfwidth_ * tol);
    }
    return 0.0;
}

cplx eval_spectrum(const SpectralAmplitude& s, double omega) { return s(omega); }

std::vector<double> random_mode_phases(int n_side_modes, std::uint64_t seed) {
    if (n_side_modes < 0) throw InvalidArgument("n_side_modes must be >= 0");
    std::mt19937_64 rng(derive_seed(seed, 0x70686173ULL, 0));
    std::vector<double> phases(static_cast<std::size_t>(2 * n_side_modes + 1));
    for (auto& p : phases) p = kTwoPi * uniform01(rng);
    return phases;
}

ModeComb::ModeComb(int n_side_modes, double mode_spacing, double pump_frequency,
                   SpectralAmplitude single_mode, std::vector<double> mode_phases)
    : n_(n_side_modes),
      spacing_(mode_spacing),
      pump_(pump_frequency),
      mode_(single_mode),
      phases_(std::move(mode_phases)),
      locked_(true) {
    if (n_ < 0) throw InvalidArgument("n_side_modes must be >= 0");
    if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
        throw InvalidArgument("mode_spacing must be positive");
    if (!(pump_ > 0.0) || !std::isfinite(pump_))
        throw InvalidArgument("pump_frequency must be positive");
    if (!(mode_.halfwidth() < 0.5 * spacing_))
        throw InvalidArgument(
            "single-mode halfwidth must be < mode_spacing/2 (modes spectrally resolved)");
    const auto count = static_cast<std::size_t>(mode_count());
    if (phases_.empty()) phases_.assign(count, 0.0);
    if (phases_.size() != count)
        throw InvalidArgument("mode_phases must hold 2N+1 = " + std::to_string(count) +
                              " values, got " + std::to_string(phases_.size()));
    for (double p : phases_) {
        if (!std::isfinite(p)) throw InvalidArgument("mode phases must be finite");
        if (p != 0.0) locked_ = false;
    }
    phasors_.resize(count);
    symmetric_.resize(count);
    weights_.resize(count);
    for (std::size_t k = 0; k < count; ++k) phasors_[k] = std::polar(1.0, phases_[k]);
    for (std::size_t k = 0; k < count; ++k) {
        symmetric_[k] = 0.5 * (phasors_[k] + phasors_[count - 1 - k]);
        weights_[k] = std::norm(symmetric_[k]);
    }
}

ModeComb ModeComb::with_phases(std::vector<double> phases) const {
    return ModeComb(n_, spacing_, pump_, mode_, std::move(phases));
}

ModeComb ModeComb::with_single_mode(SpectralAmplitude s) const {
    return ModeComb(n_, spacing_, pump_, s, phases_);
}

cplx comb_joint_amplitude(const ModeComb& c, double omega) {
    const int n = c.n_side_modes();
    cplx sum{};
    for (int m = -n; m <= n; ++m)
        sum += c.phasors()[static_cast<std::size_t>(m + n)] *
               c.single_mode()(omega + m * c.mode_spacing());
    return sum;
}

TimeGrid::TimeGrid(double t_min, double t_max, std::size_t n_points)
    : t_min_(t_min), t_max_(t_max), n_(n_points) {
    if (n_points < 2) throw InvalidArgument("time grid needs at least 2 points");
    if (!(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max))
        throw InvalidArgument("time grid needs finite t_max > t_min");
}

std::vector<double> TimeGrid::values() const {
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)[i];
    return v;
}

}  // namespace twophoton
