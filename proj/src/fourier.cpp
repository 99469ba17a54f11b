#include "billiards/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace billiards {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FourierSeries::FourierSeries(double a0_, std::vector<double> a_, std::vector<double> b_)
    : a0(a0_), a(std::move(a_)), b(std::move(b_)) {
    if (a.size() != b.size()) throw std::invalid_argument("FourierSeries: a/b size mismatch");
}

double FourierSeries::operator()(double x) const {
    // Chebyshev-style recurrence: track (cos, sin) of 2*pi*j*x by complex
    // multiplication; one std::polar call per evaluation.
    const double c1 = std::cos(kTwoPi * x);
    const double s1 = std::sin(kTwoPi * x);
    double cj = 1.0, sj = 0.0;
    double acc = a0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double c = cj * c1 - sj * s1;
        const double s = sj * c1 + cj * s1;
        cj = c;
        sj = s;
        acc += a[j] * cj + b[j] * sj;
    }
    return acc;
}

double FourierSeries::derivative_at(double x) const {
    const double c1 = std::cos(kTwoPi * x);
    const double s1 = std::sin(kTwoPi * x);
    double cj = 1.0, sj = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double c = cj * c1 - sj * s1;
        const double s = sj * c1 + cj * s1;
        cj = c;
        sj = s;
        const double w = kTwoPi * static_cast<double>(j + 1);
        acc += w * (b[j] * cj - a[j] * sj);
    }
    return acc;
}

FourierSeries FourierSeries::derivative() const {
    FourierSeries d;
    d.a.resize(a.size());
    d.b.resize(b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double w = kTwoPi * static_cast<double>(j + 1);
        d.a[j] = w * b[j];
        d.b[j] = -w * a[j];
    }
    return d;
}

FourierSeries FourierSeries::antiderivative_periodic() const {
    FourierSeries F;
    F.a.resize(a.size());
    F.b.resize(b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double w = kTwoPi * static_cast<double>(j + 1);
        F.a[j] = -b[j] / w;
        F.b[j] = a[j] / w;
    }
    return F;
}

std::vector<double> FourierSeries::sample(std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(static_cast<double>(i) / static_cast<double>(n));
    return out;
}

FourierSeries FourierSeries::truncated(double tol) const {
    FourierSeries t;
    t.a0 = std::abs(a0) < tol ? 0.0 : a0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (std::abs(a[j]) >= tol || std::abs(b[j]) >= tol) last = j + 1;
    t.a.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(last));
    t.b.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(last));
    for (std::size_t j = 0; j < last; ++j) {
        if (std::abs(t.a[j]) < tol) t.a[j] = 0.0;
        if (std::abs(t.b[j]) < tol) t.b[j] = 0.0;
    }
    return t;
}

double FourierSeries::sup_norm_estimate() const {
    double s = std::abs(a0);
    for (std::size_t j = 0; j < a.size(); ++j) s += std::hypot(a[j], b[j]);
    return s;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& g) {
    if (g.a.size() > a.size()) {
        a.resize(g.a.size(), 0.0);
        b.resize(g.b.size(), 0.0);
    }
    a0 += g.a0;
    for (std::size_t j = 0; j < g.a.size(); ++j) {
        a[j] += g.a[j];
        b[j] += g.b[j];
    }
    return *this;
}

FourierSeries& FourierSeries::operator*=(double c) {
    a0 *= c;
    for (auto& v : a) v *= c;
    for (auto& v : b) v *= c;
    return *this;
}

void fft_forward(std::vector<std::complex<double>>& data) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out(data.size());
    fft.fwd(out, data);
    data.swap(out);
}

void fft_inverse(std::vector<std::complex<double>>& data) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out(data.size());
    fft.inv(out, data);
    data.swap(out);
}

FourierSeries FourierSeries::from_samples(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("from_samples: need an even sample count >= 2");
    std::vector<std::complex<double>> spec(n);
    {
        Eigen::FFT<double> fft;
        std::vector<double> buf(samples.begin(), samples.end());
        fft.fwd(spec, buf);
    }
    FourierSeries f;
    const double inv_n = 1.0 / static_cast<double>(n);
    f.a0 = spec[0].real() * inv_n;
    const std::size_t half = n / 2;
    f.a.resize(half);
    f.b.resize(half);
    for (std::size_t j = 1; j < half; ++j) {
        f.a[j - 1] = 2.0 * spec[j].real() * inv_n;
        f.b[j - 1] = -2.0 * spec[j].imag() * inv_n;
    }
    // Nyquist: samples see cos(pi*n*x) only; halving keeps the interpolant
    // real and sample-exact.
    f.a[half - 1] = spec[half].real() * inv_n;
    f.b[half - 1] = 0.0;
    return f;
}

FourierSeries product(const FourierSeries& f, const FourierSeries& g) {
    std::size_t modes = f.max_mode() + g.max_mode() + 1;
    std::size_t n = 4;
    while (n < 2 * modes + 2) n *= 2;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        s[i] = f(x) * g(x);
    }
    return FourierSeries::from_samples(s);
}

std::vector<double> spectral_derivative(std::span<const double> samples, double period) {
    const std::size_t n = samples.size();
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("spectral_derivative: need even n >= 2");
    Eigen::FFT<double> fft;
    std::vector<double> buf(samples.begin(), samples.end());
    std::vector<std::complex<double>> spec(n);
    fft.fwd(spec, buf);
    const double w0 = kTwoPi / period;
    const std::size_t half = n / 2;
    spec[0] = 0.0;
    for (std::size_t j = 1; j < half; ++j) {
        const std::complex<double> iw(0.0, w0 * static_cast<double>(j));
        spec[j] *= iw;
        spec[n - j] *= -iw;
    }
    spec[half] = 0.0;  // Nyquist derivative convention for real data
    std::vector<double> out(n);
    fft.inv(out, spec);
    return out;
}

double periodic_mean(std::span<const double> samples) {
    double acc = 0.0, comp = 0.0;
    for (double v : samples) {  // Kahan; grids can be long and values near-constant
        const double y = v - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc / static_cast<double>(samples.size());
}

double trig_interp_eval(std::span<const double> samples, double x_over_period) {
    return FourierSeries::from_samples(samples)(x_over_period);
}

}  // namespace billiards
