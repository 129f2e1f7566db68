#include "ygraph/fracops.hpp"

#include "ygraph/errors.hpp"
#include "ygraph/parallel.hpp"
#include "ygraph/specfun.hpp"

#include <cmath>
#include <sstream>

namespace ygraph {

namespace kernels {

std::vector<double> rl_weights(double alpha, std::size_t n)
{
    const double p = alpha + 1.0;
    std::vector<double> w(n);
    if (n == 0) return w;
    w[0] = 1.0;
    for (std::size_t m = 1; m < n; ++m) {
        // second difference of m^p written without cancellation
        const double x = 1.0 / double(m);
        w[m] = std::pow(double(m), p) * (std::expm1(p * std::log1p(x)) + std::expm1(p * std::log1p(-x)));
    }
    return w;
}

namespace {

template <class T>
struct Wide;
template <>
struct Wide<double> {
    using type = long double;
};
template <>
struct Wide<cplx> {
    using type = std::complex<long double>;
};
template <class T>
using wide_t = typename Wide<T>::type;

inline long double first_weight(double alpha, std::size_t n)
{
    // (n-1)^{a+1} - (n-a-1) n^a
    const long double nn = n, a = alpha;
    return std::pow(nn - 1.0L, a + 1.0L) - (nn - a - 1.0L) * std::pow(nn, a);
}

template <class T>
inline wide_t<T> rl_sample(std::span<const T> f, const std::vector<double>& w, double alpha, std::size_t n)
{
    using W = wide_t<T>;
    if (n == 0) return W(0);
    W s = first_weight(alpha, n) * W(f[0]);
    for (std::size_t j = 1; j < n; ++j) s += (long double)w[n - j] * W(f[j]);
    s += W(f[n]);
    return s;
}

} // namespace

// Unscaled sums in extended precision; the caller applies dt^a / Gamma(a+2).
template <class T>
void rl_sums(std::span<const T> f, double alpha, std::span<wide_t<T>> out, bool parallel)
{
    const auto w = rl_weights(alpha, f.size());
    const long N = long(f.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(max_threads()) if (parallel)
    for (long n = 0; n < N; ++n) out[n] = rl_sample(f, w, alpha, std::size_t(n));
}

template <class T>
void rl_positive_serial(std::span<const T> f, double dt, double alpha, std::span<T> out)
{
    const auto w = rl_weights(alpha, f.size());
    const long double c = std::pow((long double)dt, (long double)alpha) / gamma_fn(alpha + 2.0);
    for (std::size_t n = 0; n < f.size(); ++n) out[n] = T(c * rl_sample(f, w, alpha, n));
}

template <class T>
void rl_positive(std::span<const T> f, double dt, double alpha, std::span<T> out)
{
    std::vector<wide_t<T>> s(f.size());
    rl_sums<T>(f, alpha, s, true);
    const long double c = std::pow((long double)dt, (long double)alpha) / gamma_fn(alpha + 2.0);
    for (std::size_t n = 0; n < f.size(); ++n) out[n] = T(c * s[n]);
}

template void rl_positive_serial<double>(std::span<const double>, double, double, std::span<double>);
template void rl_positive_serial<cplx>(std::span<const cplx>, double, double, std::span<cplx>);
template void rl_positive<double>(std::span<const double>, double, double, std::span<double>);
template void rl_positive<cplx>(std::span<const cplx>, double, double, std::span<cplx>);

} // namespace kernels

int boundary_layer(double alpha) { return int(std::ceil(3.0 + std::fabs(alpha))); }

namespace {

// k-th derivative by centered differences, zero extension for t < 0 and a
// one-sided second-order stencil at the final sample.
template <class T>
std::vector<T> differentiate(const std::vector<T>& g, long double dt, int k)
{
    const std::size_t n = g.size();
    auto at = [&](long i) -> T { return i < 0 ? T(0) : g[std::size_t(i)]; };
    std::vector<T> d(n);
    if (k == 1) {
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (g[i + 1] - at(long(i) - 1)) / (2.0L * dt);
        if (n >= 3)
            d[n - 1] = (3.0L * g[n - 1] - 4.0L * g[n - 2] + g[n - 3]) / (2.0L * dt);
        else if (n == 2)
            d[1] = (g[1] - g[0]) / dt;
        return d;
    }
    if (k == 2) {
        const long double h2 = dt * dt;
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (g[i + 1] - 2.0L * g[i] + at(long(i) - 1)) / h2;
        if (n >= 4)
            d[n - 1] = (2.0L * g[n - 1] - 5.0L * g[n - 2] + 4.0L * g[n - 3] - g[n - 4]) / h2;
        else if (n >= 2)
            d[n - 1] = d[n - 2];
        return d;
    }
    auto once = differentiate(g, dt, 1);
    return differentiate(once, dt, k - 1);
}

} // namespace

template <class T>
TimeTraceT<T> riemann_liouville(const TimeTraceT<T>& f, double alpha)
{
    if (!f.causal) throw ContractError("riemann_liouville: trace is not flagged causal");
    if (!(std::fabs(alpha) <= 3.0)) {
        std::ostringstream os;
        os << "riemann_liouville: |alpha| = " << std::fabs(alpha) << " exceeds 3";
        throw DomainError(os.str());
    }
    if (!(f.dt > 0) || f.samples.empty()) throw ContractError("riemann_liouville: empty trace or dt <= 0");

    TimeTraceT<T> out{f.dt, std::vector<T>(f.size()), true};
    if (alpha == 0.0) {
        out.samples = f.samples;
        return out;
    }
    if (alpha > 0) {
        kernels::rl_positive<T>(f.samples, f.dt, alpha, out.samples);
        return out;
    }
    int k = int(std::floor(-alpha)) + 1;
    const double beta = alpha + k;
    std::vector<kernels::wide_t<T>> g(f.size());
    kernels::rl_sums<T>(f.samples, beta, g, true);
    const long double c = std::pow((long double)f.dt, (long double)beta) / gamma_fn(beta + 2.0);
    for (auto& x : g) x *= c;
    auto d = differentiate(g, (long double)f.dt, k);
    for (std::size_t i = 0; i < d.size(); ++i) out.samples[i] = T(d[i]);
    return out;
}

template TimeTrace riemann_liouville<double>(const TimeTrace&, double);
template CTimeTrace riemann_liouville<cplx>(const CTimeTrace&, double);

} // namespace ygraph
