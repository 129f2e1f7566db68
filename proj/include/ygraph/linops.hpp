#pragma once

#include "ygraph/fracops.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace ygraph {

/// Uniform samples of a function of x: samples[i] at origin + i*spacing.
template <class T>
struct GridFunctionT {
    double origin = 0;
    double spacing = 0;
    std::vector<T> samples;

    std::size_t size() const { return samples.size(); }
    double x(std::size_t i) const { return origin + spacing * double(i); }
    double right() const { return x(samples.size() - 1); }
};
using GridFunction = GridFunctionT<double>;
using CGridFunction = GridFunctionT<cplx>;

/// Levels w(., t_j), t_j = j*dt, all on one grid layout.
template <class T>
struct SpaceTimeFieldT {
    double origin = 0;
    double spacing = 0;
    double dt = 0;
    std::vector<std::vector<T>> levels;

    std::size_t nx() const { return levels.empty() ? 0 : levels.front().size(); }
    double x(std::size_t i) const { return origin + spacing * double(i); }
    GridFunctionT<T> level(std::size_t j) const { return {origin, spacing, levels.at(j)}; }
};
using SpaceTimeField = SpaceTimeFieldT<double>;
using CSpaceTimeField = SpaceTimeFieldT<cplx>;

struct GroupOptions {
    /// Periodization length as a multiple of the data window.
    double pad_factor = 4.0;
    /// End samples must satisfy |f| <= decay_tol * max(1, max|f|).
    double decay_tol = 1e-8;
};

/// Complex FFT of one length with cached FFTW plans. Plan creation is
/// serialized internally; execute() may be called concurrently.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }
    void forward(const cplx* in, cplx* out) const;
    void backward(const cplx* in, cplx* out) const; // unnormalized

private:
    std::size_t n_;
    void* fwd_;
    void* bwd_;
};

/// Angular frequencies of an n-point FFT with spacing h, in FFTW order.
std::vector<double> fft_frequencies(std::size_t n, double h);

/// Padded length used for a window of n samples.
std::size_t padded_length(std::size_t n, double pad_factor);

/// e^{-t d_x^3} phi via the multiplier e^{i t xi^3}. Real input gives real output.
GridFunction airy_group(const GridFunction& phi, double t, const GroupOptions& opt = {});
CGridFunction airy_group(const CGridFunction& phi, double t, const GroupOptions& opt = {});

/// Throws ContractError when an end sample is not small.
template <class T>
void check_decay(const GridFunctionT<T>& f, double tol, const char* who);

/// K w(., t) = int_0^t e^{-(t-s) d^3} w(., s) ds, composite Simpson in s over
/// the levels up to t (3/8 rule on the last three intervals for odd counts).
template <class T>
GridFunctionT<T> duhamel_inhomog(const SpaceTimeFieldT<T>& w, double t, const GroupOptions& opt = {});

/// K w at every level at once (running sums in frequency space).
template <class T>
SpaceTimeFieldT<T> duhamel_inhomog_all(const SpaceTimeFieldT<T>& w, const GroupOptions& opt = {});

/// Free evolution sampled at t_j = j*dt, j = 0..nt-1.
template <class T>
SpaceTimeFieldT<T> free_evolution(const GridFunctionT<T>& phi, double dt, std::size_t nt, const GroupOptions& opt = {});

enum class Side { Left, Right, Centered };

/// Finite-difference weights (Fornberg) for the m-th derivative at z.
std::vector<double> fd_weights(double z, std::span<const double> x, int m);

/// d^j f / dx^j at x = 0 from one side or centered. One-sided stencils skip
/// a node sitting exactly at 0 unless 0 is the grid end on that side.
template <class T>
T trace_at_zero(const GridFunctionT<T>& f, int j, Side side);

template <class T>
TimeTraceT<T> trace_at_zero(const SpaceTimeFieldT<T>& f, int j, Side side);

/// Right limit minus left limit at x = 0, each by Neville-Richardson
/// extrapolation from the 4 nearest nodes of that side.
template <class T>
T jump_size(const GridFunctionT<T>& f);

template <class T>
T jump_size(const SpaceTimeFieldT<T>& f, double t);

/// One-sided limit at 0 from nodes strictly on one side.
template <class T>
T one_sided_limit(const GridFunctionT<T>& f, Side side, int nodes = 4);

/// (sum <xi>^{2s} |f^(xi)|^2 dxi)^{1/2} with <xi> = 1 + |xi|.
double sobolev_norm(const GridFunction& f, double s);
double sobolev_norm(const CGridFunction& f, double s);

/// Spectral derivative of order m on the padded periodization.
template <class T>
GridFunctionT<T> spectral_derivative(const GridFunctionT<T>& f, int m, const GroupOptions& opt = {});

namespace kernels {

/// S(xi) = dt * sum_j c_j e^{i (t - t_j) xi^3} W_j(xi): frequency-space
/// accumulation behind duhamel_inhomog. Serial reference and OpenMP version.
void duhamel_accumulate_serial(const std::vector<std::vector<cplx>>& W, const std::vector<double>& c,
                               const std::vector<double>& xi, double dt, double t, std::vector<cplx>& S);
void duhamel_accumulate(const std::vector<std::vector<cplx>>& W, const std::vector<double>& c,
                        const std::vector<double>& xi, double dt, double t, std::vector<cplx>& S);

} // namespace kernels

} // namespace ygraph
