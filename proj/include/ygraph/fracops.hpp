#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ygraph {

using cplx = std::complex<double>;

/// Uniformly sampled function of t on [0, (n-1) dt]. When causal, samples[0]
/// sits at t = 0 and the function is zero for t < 0.
template <class T>
struct TimeTraceT {
    double dt = 0;
    std::vector<T> samples;
    bool causal = true;

    std::size_t size() const { return samples.size(); }
    double t(std::size_t i) const { return dt * double(i); }
};
using TimeTrace = TimeTraceT<double>;
using CTimeTrace = TimeTraceT<cplx>;

/// Riemann-Liouville integral I_alpha f = t_+^{alpha-1}/Gamma(alpha) * f, |alpha| <= 3.
/// alpha > 0: product integration against the piecewise-linear interpolant.
/// alpha = 0: identity. alpha < 0: d^k/dt^k I_{alpha+k} f with k minimal.
template <class T>
TimeTraceT<T> riemann_liouville(const TimeTraceT<T>& f, double alpha);

/// Number of leading samples that carry the kernel singularity for
/// negative orders applied to data not vanishing at t = 0.
int boundary_layer(double alpha);

namespace kernels {

/// Product-integration weights for order alpha > 0: w[0] = 1 and
/// w[m] = (m+1)^{a+1} - 2m^{a+1} + (m-1)^{a+1} for m >= 1.
std::vector<double> rl_weights(double alpha, std::size_t n);

/// out[n] = I_alpha f(t_n) for alpha > 0; reference loop.
template <class T>
void rl_positive_serial(std::span<const T> f, double dt, double alpha, std::span<T> out);

/// Same result, parallel over output samples.
template <class T>
void rl_positive(std::span<const T> f, double dt, double alpha, std::span<T> out);

} // namespace kernels

} // namespace ygraph
