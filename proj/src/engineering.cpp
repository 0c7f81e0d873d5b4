#include "twophoton/engineering.hpp"

#include <cmath>
#include <string>

#include "twophoton/errors.hpp"
#include "twophoton/parallel.hpp"
#include "twophoton/quadrature.hpp"

namespace twophoton {

cplx wideband_amplitude(const WidebandState& w, double tau) {
    return envelope_g_at(w.spectrum, tau - w.delay);
}

void require_wideband_resolved(const WidebandState& w, const TimeGrid& grid) {
    const double limit = kPi / (8.0 * w.spectrum.halfwidth());
    if (grid.spacing() > limit)
        throw GridError("grid spacing " + std::to_string(grid.spacing()) +
                        " s does not resolve the wideband peak (need <= " +
                        std::to_string(limit) + " s)");
}

CorrelationTrace wideband_gamma2(const WidebandState& w, const TimeGrid& grid) {
    require_wideband_resolved(w, grid);
    std::vector<cplx> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) v[i] = std::norm(wideband_amplitude(w, grid[i]));
    });
    const double scale = w.spectrum.profile_integral();
    return {grid, std::move(v), TraceKind::Intensity, scale * scale};
}

CorrelationTrace combined_gamma2(const ModeComb& comb, const WidebandState& w, cplx eta,
                                 cplx zeta, const TimeGrid& grid) {
    std::vector<cplx> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double t = grid[i];
            v[i] = std::norm(eta * pair_amplitude(comb, t) + zeta * wideband_amplitude(w, t));
        }
    });
    return {grid, std::move(v), TraceKind::Intensity, 1.0};
}

double matched_wideband_halfwidth(const ModeComb& comb) {
    return 0.5 * comb.mode_count() * comb.mode_spacing();
}

namespace {

// Index range of grid points inside peak k's window.
std::pair<std::size_t, std::size_t> window_range(const ModeComb& comb, const TimeGrid& grid,
                                                 int k) {
    const double tr = comb.round_trip_time();
    const double lo = k * tr - 0.25 * tr;
    const double hi = k * tr + 0.25 * tr;
    if (lo < grid.t_min() || hi > grid.t_max())
        throw GridError("grid does not cover the window of comb peak " + std::to_string(k));
    const double dt = grid.spacing();
    auto first = static_cast<std::size_t>(std::ceil((lo - grid.t_min()) / dt));
    auto stop = static_cast<std::size_t>(std::floor((hi - grid.t_min()) / dt)) + 1;
    while (first > 0 && grid[first - 1] >= lo) --first;
    while (first < grid.size() && grid[first] < lo) ++first;
    while (stop < grid.size() && grid[stop] <= hi) ++stop;
    while (stop > first && grid[stop - 1] > hi) --stop;
    return {first, stop};
}

// Least-squares accumulators <f, A> and <f, f>.
struct Acc {
    cplx fa{};
    double ff = 0.0;
    Acc& operator+=(const Acc& o) {
        fa += o.fa;
        ff += o.ff;
        return *this;
    }
    friend Acc operator+(Acc a, const Acc& b) { return a += b; }
};

}  // namespace

double window_energy(const ModeComb& comb, const WidebandState& w, cplx eta, cplx zeta,
                     const TimeGrid& grid, int k) {
    const auto [first, stop] = window_range(comb, grid, k);
    return grid.spacing() * pairwise_sum_of<double>(first, stop, [&](std::size_t i) {
               const double t = grid[i];
               return std::norm(eta * pair_amplitude(comb, t) + zeta * wideband_amplitude(w, t));
           });
}

ExcisionSolution solve_excision(const ModeComb& comb, const SpectralAmplitude& wideband_template,
                                int target_peak, const TimeGrid& grid, const ExcisionOptions& opt) {
    const double tr = comb.round_trip_time();
    const double target = target_peak * tr;
    if (!(std::abs(envelope_g_at(comb.single_mode(), target)) > opt.min_envelope))
        throw UnreachablePeak("comb peak " + std::to_string(target_peak) +
                              " lies where the envelope has decayed below " +
                              std::to_string(opt.min_envelope));
    require_comb_resolved(comb, grid);

    const double hw = wideband_template.halfwidth();
    if (!(hw > comb.single_mode().halfwidth()))
        throw InvalidArgument("wideband halfwidth must exceed the single-mode halfwidth");
    const WidebandState w{wideband_template, target};
    require_wideband_resolved(w, grid);

    // zeta = -<f, A> / <f, f> over the target window, with eta = 1.
    const auto [first, stop] = window_range(comb, grid, target_peak);
    const Acc acc = pairwise_sum_of<Acc>(first, stop, [&](std::size_t i) {
        const double t = grid[i];
        const cplx f = wideband_amplitude(w, t);
        return Acc{std::conj(f) * pair_amplitude(comb, t), std::norm(f)};
    });

    ExcisionSolution sol;
    sol.eta = 1.0;
    sol.zeta = -acc.fa / acc.ff;
    sol.delay = target;
    sol.target_peak = target_peak;
    sol.wideband_halfwidth = hw;

    auto ratio = [&](int k) {
        const double before = window_energy(comb, w, 1.0, 0.0, grid, k);
        const double after = window_energy(comb, w, sol.eta, sol.zeta, grid, k);
        return after / before;
    };
    sol.residual = ratio(target_peak);
    sol.retention_minus = ratio(target_peak - 1);
    sol.retention_plus = ratio(target_peak + 1);

    if (sol.residual > opt.max_residual)
        throw PoorMatch("excision residual " + std::to_string(sol.residual) +
                            " exceeds " + std::to_string(opt.max_residual) +
                            "; wideband shape or width does not match the comb peak",
                        sol.residual);
    return sol;
}

}  // namespace twophoton
