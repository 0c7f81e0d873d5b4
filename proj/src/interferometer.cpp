#include "twophoton/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "twophoton/correlation.hpp"
#include "twophoton/errors.hpp"
#include "twophoton/quadrature.hpp"

namespace twophoton {

void InterferometerConfig::validate() const {
    if (!(resolution > 0.0)) throw InvalidArgument("resolution time T_R must be positive");
    if (!(delay >= 0.0) || !std::isfinite(delay))
        throw InvalidArgument("interferometer delay must be >= 0");
    if (!(mode_match > 0.0 && mode_match <= 1.0))
        throw InvalidArgument("mode_match must lie in (0, 1]");
    if (!(mode_match_decay >= 0.0)) throw InvalidArgument("mode_match_decay must be >= 0");
    for (double t : {splitters.first, splitters.second})
        if (!(t > 0.0 && t < 1.0))
            throw InvalidArgument("splitter transmissivities must lie in (0, 1)");
    if (!std::isfinite(pump_phase)) throw InvalidArgument("pump_phase must be finite");
}

double InterferometerConfig::effective_mode_match() const {
    if (mode_match_decay > 0.0) return mode_match * std::exp(-delay / mode_match_decay);
    return mode_match;
}

InterferometerConfig InterferometerConfig::at_delay(double new_delay) const {
    InterferometerConfig c = *this;
    c.delay = new_delay;
    c.pump_phase = reduced_pump_phase(comb.pump_frequency(), new_delay);
    return c;
}

double reduced_pump_phase(double pump_frequency, double delay) {
    double p = std::fmod(pump_frequency * delay, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    return p;
}

TwoModeState apply_beam_splitter(const TwoModeState& in, double transmissivity) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
        throw InvalidArgument("transmissivity must lie in [0, 1]");
    const int n = in.total;
    if (n < 0 || in.amplitudes.size() != static_cast<std::size_t>(n + 1))
        throw InvalidArgument("two-mode state needs total + 1 amplitudes");

    std::vector<double> fact(static_cast<std::size_t>(n + 1), 1.0);
    for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
    auto binom = [&](int a, int b) { return fact[a] / (fact[b] * fact[a - b]); };

    const double t = std::sqrt(transmissivity);
    const double r = std::sqrt(1.0 - transmissivity);
    TwoModeState out{n, std::vector<cplx>(static_cast<std::size_t>(n + 1))};
    // |k, n-k> = a+^k b+^(n-k) / sqrt(k! (n-k)!) |0>; expand both powers binomially.
    for (int k = 0; k <= n; ++k) {
        const cplx a = in.amplitudes[k] / std::sqrt(fact[k] * fact[n - k]);
        if (a == cplx{}) continue;
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= n - k; ++j) {
                const double c = binom(k, i) * binom(n - k, j) *
                                 std::pow(t, i + (n - k - j)) * std::pow(r, (k - i) + j) *
                                 ((j % 2) ? -1.0 : 1.0);
                const int p = i + j;
                out.amplitudes[p] += a * c * std::sqrt(fact[p] * fact[n - p]);
            }
        }
    }
    return out;
}

std::array<cplx, 3> bs_two_photon_state(double transmissivity) {
    const TwoModeState in{2, {0.0, 0.0, 1.0}};
    const auto out = apply_beam_splitter(in, transmissivity);
    return {out.amplitudes[2], out.amplitudes[0], out.amplitudes[1]};
}

namespace {

// Field amplitudes of the two-splitter interferometer. With the first
// splitter's reflection carrying a sign flip, the coincidence amplitude is
//   X = A c1 - e^{i phi/2} t1 r1 (t2^2 A(tau - D) - r2^2 A(tau + D)),
//   c1 = t2 r2 (r1^2 e^{i phi} - t1^2),
// and Gamma12 = 4 |X|^2, which for 50:50 splitters is the textbook
// three-term expression.
struct Splitters {
    double t1, r1, t2, r2;
    explicit Splitters(const SplitterRatios& s)
        : t1(std::sqrt(s.first)),
          r1(std::sqrt(1.0 - s.first)),
          t2(std::sqrt(s.second)),
          r2(std::sqrt(1.0 - s.second)) {}

    cplx c1(double phi) const {
        return t2 * r2 * (r1 * r1 * std::polar(1.0, phi) - t1 * t1);
    }
    // |c1|^2 averaged over phi
    double c1_norm_dithered() const {
        return t2 * t2 * r2 * r2 * (std::pow(r1, 4) + std::pow(t1, 4));
    }
};

struct Sums {
    double r0 = 0.0;
    cplx overlap{}, lead{}, lag{};
    Sums& operator+=(const Sums& o) {
        r0 += o.r0;
        overlap += o.overlap;
        lead += o.lead;
        lag += o.lag;
        return *this;
    }
    friend Sums operator+(Sums a, const Sums& b) { return a += b; }
};

}  // namespace

Gamma12Terms gamma12_terms(double tau, const InterferometerConfig& cfg) {
    const Splitters sp(cfg.splitters);
    const double mu = cfg.effective_mode_match();
    const double phi = cfg.pump_phase;
    const cplx a = pair_amplitude(cfg.comb, tau);
    const cplx ap = pair_amplitude(cfg.comb, tau + cfg.delay);
    const cplx am = pair_amplitude(cfg.comb, tau - cfg.delay);

    const cplx x1 = a * sp.c1(phi);
    const cplx k2 = -std::polar(sp.t1 * sp.r1, 0.5 * phi);
    const double t2s = sp.t2 * sp.t2;
    const double r2s = sp.r2 * sp.r2;

    Gamma12Terms g;
    g.phase_term = 4.0 * std::norm(x1);
    g.hom_term = 4.0 * sp.t1 * sp.t1 * sp.r1 * sp.r1 *
                 (t2s * t2s * std::norm(am) + r2s * r2s * std::norm(ap) -
                  2.0 * mu * t2s * r2s * (am * std::conj(ap)).real());
    const cplx x2 = k2 * (t2s * am - r2s * ap);
    g.cross_term = 8.0 * mu * (x1 * std::conj(x2)).real();
    return g;
}

double gamma12(double tau, const InterferometerConfig& cfg) { return gamma12_terms(tau, cfg).total(); }

PairIntegrals pair_integrals(const ModeComb& comb, double delay, double resolution) {
    const auto& s = comb.single_mode();
    const double support = std::abs(delay) + s.temporal_support(1e-8);
    const double half_window = 0.5 * resolution;

    // The comb part of each integrand is a trigonometric polynomial of degree
    // 2N in dOmega tau, so 2 nodes per peak already integrate it exactly; the
    // envelope has kinks at 0 and +-delay. Composite Simpson with those kinks
    // on panel boundaries removes the O(h^2) error they would otherwise cause.
    double h = 1.0 / (64.0 * s.halfwidth());
    if (comb.n_side_modes() > 0) h = std::min(h, comb.round_trip_time() / (8.0 * comb.mode_count()));
    std::size_t m;      // nodes at j h, j = -m..m, m even
    std::size_t shift = 0;  // delay / h when the delay falls on the node lattice
    if (half_window < support) {
        m = 2 * static_cast<std::size_t>(std::ceil(half_window / (2.0 * h)));
        h = half_window / static_cast<double>(m);
    } else {
        // Snap the step to the delay, but not at more than 8x the cost.
        const double d = std::abs(delay);
        if (d >= 0.25 * h) {
            const double k = std::ceil(d / (2.0 * h));
            h = d / (2.0 * k);
            shift = 2 * static_cast<std::size_t>(k);
        }
        m = 2 * static_cast<std::size_t>(std::ceil(support / (2.0 * h)));
    }
    if (m > 25000000)
        throw NumericalError("resolution window needs more than 5e7 integration nodes; "
                             "reduce the resolution time or use a faster-decaying envelope");
    const std::size_t n = 2 * m + 1;
    auto weight = [n](std::size_t i) {
        return (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    };
    auto term = [&](std::size_t i, cplx a, cplx ap, cplx am) {
        const double w = weight(i);
        Sums v;
        v.r0 = w * std::norm(a);
        v.overlap = w * ap * std::conj(am);
        v.lead = w * a * std::conj(ap);
        v.lag = w * a * std::conj(am);
        return v;
    };

    Sums total;
    constexpr std::size_t kMaxTabulated = std::size_t{1} << 23;
    if (shift > 0 && n + 2 * shift <= kMaxTabulated) {
        // tau +- delay are nodes too: tabulate A once on the extended lattice.
        const std::size_t len = n + 2 * shift;
        const double first = -static_cast<double>(m + shift);
        std::vector<cplx> amp(len);
        parallel_for(len, [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j)
                amp[j] = pair_amplitude(comb, (first + static_cast<double>(j)) * h);
        });
        const bool positive = delay > 0.0;
        total = parallel_pairwise_sum<Sums>(n, [&](std::size_t i) {
            const std::size_t c = i + shift;
            const cplx up = amp[c + shift], down = amp[c - shift];
            return term(i, amp[c], positive ? up : down, positive ? down : up);
        });
    } else {
        total = parallel_pairwise_sum<Sums>(n, [&](std::size_t i) {
            const double tau = (static_cast<double>(i) - static_cast<double>(m)) * h;
            return term(i, pair_amplitude(comb, tau), pair_amplitude(comb, tau + delay),
                        pair_amplitude(comb, tau - delay));
        });
    }
    const double scale = h / 3.0;
    return {scale * total.r0, scale * total.overlap, scale * total.lead, scale * total.lag, n};
}

namespace {

RateBreakdown rate_from_integrals(const InterferometerConfig& cfg, const PairIntegrals& p,
                                  bool dithered) {
    const Splitters sp(cfg.splitters);
    const double mu = cfg.effective_mode_match();
    const double phi = cfg.pump_phase;
    const double t2s = sp.t2 * sp.t2;
    const double r2s = sp.r2 * sp.r2;

    RateBreakdown out;
    out.r0 = p.r0;
    out.visibility = mu * p.overlap.real() / p.r0;

    // Cross term integral: 8 mu Re{ c1 conj(k2) (t2^2 lag - r2^2 lead) }.
    auto cross_at = [&](double ph) {
        const cplx k2 = -std::polar(sp.t1 * sp.r1, 0.5 * ph);
        return 8.0 * mu * (sp.c1(ph) * std::conj(k2) * (t2s * p.lag - r2s * p.lead)).real();
    };
    out.cross_integral = cross_at(phi);
    const bool balanced = cfg.splitters.first == 0.5 && cfg.splitters.second == 0.5;
    if (balanced && !(std::abs(out.cross_integral) < 1e-6 * p.r0))
        throw NumericalError("cross term integrates to " + std::to_string(out.cross_integral) +
                             ", not below 1e-6 R0; integration under-resolved");

    const double phase_part =
        4.0 * p.r0 * (dithered ? sp.c1_norm_dithered() : std::norm(sp.c1(phi)));
    const double hom_part = 4.0 * sp.t1 * sp.t1 * sp.r1 * sp.r1 * p.r0 *
                            (t2s * t2s + r2s * r2s - 2.0 * t2s * r2s * out.visibility);
    // For balanced splitters the cross term vanishes and is left out; otherwise
    // it is part of the rate (its phase average is zero).
    const double cross_part = (balanced || dithered) ? 0.0 : out.cross_integral;
    out.rate = phase_part + hom_part + cross_part;
    return out;
}

RateBreakdown rate_impl(const InterferometerConfig& cfg, bool dithered) {
    cfg.validate();
    if (cfg.resolution < cfg.delay)
        throw ResolutionError("resolution time T_R is shorter than the delay; the integrated "
                              "coincidence rate does not apply");
    return rate_from_integrals(cfg, pair_integrals(cfg.comb, cfg.delay, cfg.resolution), dithered);
}

}  // namespace

RateBreakdown coincidence_rate(const InterferometerConfig& cfg) { return rate_impl(cfg, false); }

RateBreakdown dither_averaged_rate(const InterferometerConfig& cfg) { return rate_impl(cfg, true); }

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y, double harmonic) {
    if (x.size() != y.size() || x.size() < 3)
        throw InvalidArgument("sinusoid fit needs at least 3 matching points");
    // Normal equations for y ~ c0 + c1 cos(kx) + c2 sin(kx).
    double m[3][4] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double b[3] = {1.0, std::cos(harmonic * x[i]), std::sin(harmonic * x[i])};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += b[r] * b[c];
            m[r][3] += b[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (std::abs(m[col][col]) < 1e-300) throw NumericalError("sinusoid fit is singular");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double c0 = m[0][3] / m[0][0];
    const double c1 = m[1][3] / m[1][1];
    const double c2 = m[2][3] / m[2][2];
    SinusoidFit fit;
    fit.mean = c0;
    fit.amplitude = std::hypot(c1, c2);
    fit.phase = std::atan2(c2, c1);
    fit.visibility = fit.amplitude / c0;
    return fit;
}

double ScanResult::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return v;
    throw InvalidArgument("scan has no metadata entry '" + key + "'");
}

namespace {

// Singles of the two outputs for a given coherence value, normalized so that
// balanced splitters give 1 +- Re(gamma).
std::pair<double, double> singles(const SplitterRatios& s, cplx gamma) {
    const Splitters sp(s);
    const double cross = 2.0 * sp.t1 * sp.r1 * sp.t2 * sp.r2 * gamma.real();
    const double t1s = sp.t1 * sp.t1, r1s = sp.r1 * sp.r1;
    const double t2s = sp.t2 * sp.t2, r2s = sp.r2 * sp.r2;
    return {2.0 * (t1s * t2s + r1s * r2s + cross), 2.0 * (t1s * r2s + r1s * t2s - cross)};
}

}  // namespace

ScanResult phase_fringe_scan(const InterferometerConfig& cfg, std::span<const double> phases) {
    cfg.validate();
    if (cfg.resolution < cfg.delay)
        throw ResolutionError("resolution time T_R is shorter than the delay");
    const PairIntegrals p = pair_integrals(cfg.comb, cfg.delay, cfg.resolution);
    // Envelope and comb factor of the coherence at this delay; the carrier is
    // replaced by the scanned phase.
    const cplx gamma = coherence_at(cfg.comb, cfg.delay);
    const double carrier = std::fmod(0.5 * cfg.comb.pump_frequency() * cfg.delay, kTwoPi);
    const cplx slow = gamma * std::polar(1.0, -carrier);

    ScanResult out;
    out.abscissa.assign(phases.begin(), phases.end());
    for (double phi : phases) {
        InterferometerConfig c = cfg;
        c.pump_phase = phi;
        const RateBreakdown r = rate_from_integrals(c, p, false);
        out.coincidence.push_back(r.rate / p.r0);
        out.visibility.push_back(r.visibility);
        const auto [s1, s2] = singles(cfg.splitters, slow * std::polar(1.0, 0.5 * phi));
        out.singles_1.push_back(s1);
        out.singles_2.push_back(s2);
    }

    const auto fc = fit_sinusoid(out.abscissa, out.coincidence, 1.0);
    const auto f1 = fit_sinusoid(out.abscissa, out.singles_1, 0.5);
    const auto f2 = fit_sinusoid(out.abscissa, out.singles_2, 0.5);
    out.metadata = {{"r0", p.r0},
                    {"overlap_visibility", out.visibility.empty() ? 0.0 : out.visibility[0]},
                    {"coherence_modulus", std::abs(gamma)},
                    {"coincidence_visibility", fc.visibility},
                    {"coincidence_phase", fc.phase},
                    {"singles_1_visibility", f1.visibility},
                    {"singles_1_phase", f1.phase},
                    {"singles_2_visibility", f2.visibility},
                    {"singles_2_phase", f2.phase}};
    return out;
}

ScanResult delay_scan(const InterferometerConfig& cfg, std::span<const double> delays,
                      bool dithered) {
    cfg.validate();
    ScanResult out;
    out.abscissa.assign(delays.begin(), delays.end());
    std::vector<double> raw;
    // R0 does not depend on the delay, but its quadrature nodes do; rescale
    // every point to one reference value so the points share a baseline.
    const double r0 = pair_integrals(cfg.comb, 0.0, cfg.resolution).r0;
    for (double d : delays) {
        const InterferometerConfig c = cfg.at_delay(d);
        const RateBreakdown r = dithered ? dither_averaged_rate(c) : coincidence_rate(c);
        raw.push_back(r.rate * (r0 / r.r0));
        out.visibility.push_back(r.visibility);
        if (dithered) {
            out.singles_1.push_back(1.0);
            out.singles_2.push_back(1.0);
        } else {
            const auto [s1, s2] = singles(cfg.splitters, coherence_at(cfg.comb, d));
            out.singles_1.push_back(s1);
            out.singles_2.push_back(s2);
        }
    }

    double wing_sum = 0.0;
    std::size_t wing_count = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (std::abs(out.visibility[i]) < 0.01) {
            wing_sum += raw[i];
            ++wing_count;
        }
    }
    const double baseline = wing_count > 0 ? wing_sum / static_cast<double>(wing_count) : r0;
    for (double v : raw) out.coincidence.push_back(v / baseline);
    out.metadata = {{"r0", r0},
                    {"baseline", baseline},
                    {"baseline_over_r0", r0 > 0.0 ? baseline / r0 : 0.0},
                    {"wing_points", static_cast<double>(wing_count)}};
    return out;
}

std::vector<std::size_t> find_dips(std::span<const double> y, double min_prominence) {
    std::vector<std::size_t> dips;
    const std::size_t n = y.size();
    if (n < 2) return dips;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || y[i] < y[i - 1];
        const bool right_ok = i + 1 == n || y[i] <= y[i + 1];
        if (!left_ok || !right_ok) continue;
        if (i > 0 && i + 1 < n && !(y[i] < y[i - 1])) continue;

        // Highest point on each side before the signal drops below y[i].
        double left = -INFINITY, right = -INFINITY;
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] < y[i]) break;
            left = std::max(left, y[j]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] < y[i]) break;
            right = std::max(right, y[j]);
        }
        double ref;
        if (i == 0) ref = right;
        else if (i + 1 == n) ref = left;
        else ref = std::min(left, right);
        if (ref - y[i] >= min_prominence) dips.push_back(i);
    }
    return dips;
}

}  // namespace twophoton
