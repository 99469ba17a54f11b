#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace billiards {

/// Real 1-periodic function represented by a finite Fourier series,
///
///   f(x) = a0 + sum_{j=1}^{J} a_j cos(2 pi j x) + b_j sin(2 pi j x).
///
/// The series owns its truncation order J = max_mode(); all operations
/// stay in coefficient space where they are exact (derivatives,
/// antiderivatives of the mean-free part, linear combinations).
struct FourierSeries {
    double a0 = 0.0;
    std::vector<double> a;  // cosine coefficients, modes 1..J
    std::vector<double> b;  // sine coefficients, modes 1..J

    FourierSeries() = default;
    explicit FourierSeries(double constant) : a0(constant) {}
    FourierSeries(double a0_, std::vector<double> a_, std::vector<double> b_);

    std::size_t max_mode() const { return a.size(); }

    /// Evaluate at x (any real; the series is 1-periodic by construction).
    double operator()(double x) const;

    /// d/dx evaluated at x.
    double derivative_at(double x) const;

    /// Termwise derivative as a new series (a0 -> 0).
    FourierSeries derivative() const;

    /// Antiderivative of the mean-free part; the result has zero mean.
    /// Requires no constraint: the a0 part is simply dropped.
    FourierSeries antiderivative_periodic() const;

    /// Samples on the uniform grid x_i = i/n, i = 0..n-1.
    std::vector<double> sample(std::size_t n) const;

    /// Drop trailing modes with |a_j|, |b_j| < tol (and zero interior
    /// coefficients below tol). Keeps evaluation cheap for smooth data.
    FourierSeries truncated(double tol) const;

    double sup_norm_estimate() const;  // |a0| + sum |a_j| + |b_j|

    FourierSeries& operator+=(const FourierSeries& g);
    FourierSeries& operator*=(double c);
    friend FourierSeries operator+(FourierSeries f, const FourierSeries& g) { return f += g; }
    friend FourierSeries operator*(double c, FourierSeries f) { return f *= c; }

    /// Trigonometric interpolation of n uniform samples f(i/n), n even.
    /// The Nyquist cosine mode is halved so that evaluation reproduces the
    /// samples exactly and stays real.
    static FourierSeries from_samples(std::span<const double> samples);
};

/// Pointwise product computed by sampling both series on a grid large
/// enough to hold all product modes exactly, then re-interpolating.
FourierSeries product(const FourierSeries& f, const FourierSeries& g);

// -- spectral utilities on uniform periodic grids ---------------------------

/// In-place complex FFT helpers are internal; these are the public entry
/// points used across the library. `samples` live on x_i = i/n * period.

/// Spectral derivative of a smooth periodic sample vector.
std::vector<double> spectral_derivative(std::span<const double> samples, double period = 1.0);

/// Mean of the samples (= the exact integral over one period divided by it).
double periodic_mean(std::span<const double> samples);

/// Evaluate the trigonometric interpolant of `samples` at arbitrary x
/// (x in units of the period). Equivalent to
/// FourierSeries::from_samples(samples)(x / period) but allocation-free
/// for repeated use via the series; provided for one-off use.
double trig_interp_eval(std::span<const double> samples, double x_over_period);

/// Forward/backward complex FFT (any n supported, radix-mixed backend).
void fft_forward(std::vector<std::complex<double>>& data);
void fft_inverse(std::vector<std::complex<double>>& data);

}  // namespace billiards
