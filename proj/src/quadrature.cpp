#include "twophoton/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>

#include "twophoton/errors.hpp"

namespace twophoton {

double pairwise_sum(std::span<const double> v) {
    return pairwise_sum_of<double>(0, v.size(), [&](std::size_t i) { return v[i]; });
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> v) {
    return pairwise_sum_of<std::complex<double>>(0, v.size(), [&](std::size_t i) { return v[i]; });
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n < 3 || n % 2 == 0) throw InvalidArgument("Simpson rule needs an odd node count >= 3");
    const double last = static_cast<double>(n - 1);
    const double h = (b - a) / last;
    const double sum = pairwise_sum_of<double>(0, n, [&](std::size_t i) {
        const double k = static_cast<double>(i);
        const double x = (a * (last - k) + b * k) / last;
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        return w * f(x);
    });
    return sum * h / 3.0;
}

namespace {

// Integral of p(x) cos(x a) over [X, inf), a >= 0.
double cosine_tail(const std::function<double(double)>& p, double a, double X) {
    if (a == 0.0) {
        thread_local boost::math::quadrature::exp_sinh<double> rule;
        return rule.integrate([&](double t) { return p(X + t); }, 0.0,
                              std::numeric_limits<double>::infinity());
    }
    thread_local boost::math::quadrature::ooura_fourier_cos<double> cos_rule;
    thread_local boost::math::quadrature::ooura_fourier_sin<double> sin_rule;
    auto shifted = [&](double t) { return p(X + t); };
    const double c = cos_rule.integrate(shifted, a).first;
    const double s = sin_rule.integrate(shifted, a).first;
    return std::cos(X * a) * c - std::sin(X * a) * s;
}

}  // namespace

double even_cosine_transform(const std::function<double(double)>& p, double tau,
                             double body_halfwidth, bool compact, const TransformOptions& opt) {
    const double X = body_halfwidth;
    const double body = simpson([&](double x) { return p(x) * std::cos(x * tau); }, -X, X,
                                opt.body_points);
    if (compact || !opt.tail_correction) return body;
    return body + 2.0 * cosine_tail(p, std::abs(tau), X);
}

}  // namespace twophoton
