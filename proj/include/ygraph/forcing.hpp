#pragma once

#include "ygraph/fracops.hpp"
#include "ygraph/linops.hpp"

#include <array>
#include <memory>

namespace ygraph {

/// Uniform x grid: origin + i*spacing, i < n.
struct GridLayout {
    double origin = 0;
    double spacing = 0;
    std::size_t n = 0;

    double x(std::size_t i) const { return origin + spacing * double(i); }
    double right() const { return x(n - 1); }
};

/// Output levels t_j = j*dt, j < count.
struct TimeLevels {
    double dt = 0;
    std::size_t count = 0;
};

struct ForcingOptions {
    /// |x|/sigma above which the time integral is taken in y = x/sigma.
    double y_switch = 4.0;
    /// Extra x-range integrated beyond the grid by the one-sided kernels
    /// (scaled by max(1, t^{1/3}) at the last level).
    double left_extension = 40.0;
    double right_extension = 30.0;
};

/// Phi_j[q](x, t) = 9 int_0^{t^{1/3}} A^{(j)}(x/s) q(t - s^3) s^{1-j} ds, j = 0, 1, 2.
/// With q = I_{-2/3} g this is d_x^j V g. Phi_2 jumps at x = 0 and returns the
/// mean of its one-sided limits there.
class ForcingKernel {
public:
    explicit ForcingKernel(CTimeTrace q, const ForcingOptions& opt = {});
    cplx phi(int j, double x, double t) const;
    const CTimeTrace& q() const { return q_; }
    /// Cubic Lagrange interpolant of q and its derivative; zero for s <= 0.
    cplx q_at(double s) const;
    cplx q_deriv(double s) const;

private:
    cplx sigma_part(int j, double x, double t, double lo, double hi) const;
    cplx y_part(int j, double x, double t, double T) const;

    CTimeTrace q_;
    ForcingOptions opt_;
};

/// d_x^deriv V g on grid x levels, deriv in {0, 1, 2}.
CSpaceTimeField duhamel_forcing(const CTimeTrace& g, const GridLayout& grid, const TimeLevels& times,
                                int deriv = 0, const ForcingOptions& opt = {});
SpaceTimeField duhamel_forcing(const TimeTrace& g, const GridLayout& grid, const TimeLevels& times,
                               int deriv = 0, const ForcingOptions& opt = {});

enum class Sign { Minus, Plus };

struct ForcingEvaluation {
    double lambda = 0;
    Sign sign = Sign::Minus;
    CTimeTrace g;
    CSpaceTimeField field;

    SpaceTimeField real() const;
    SpaceTimeField imag() const;
};

/// d_x^deriv V^lambda_sign g for lambda in (-2, 1). With k = max(0, ceil(-lambda)):
/// minus: I^x_{lambda+k} Phi_{k+deriv}[I_{-(2+lambda)/3} g] (left-sided in x),
/// plus:  e^{i pi lambda} (-1)^k times the right-sided version.
ForcingEvaluation forcing_class(double lambda, Sign sign, const CTimeTrace& g, const GridLayout& grid,
                                const TimeLevels& times, int deriv = 0, const ForcingOptions& opt = {});
ForcingEvaluation forcing_class(double lambda, Sign sign, const TimeTrace& g, const GridLayout& grid,
                                const TimeLevels& times, int deriv = 0, const ForcingOptions& opt = {});

/// c with d_x^j V^lambda_sign g(0, t) = c I_{-j/3} g(t), valid for lambda - j > -2:
/// minus 2 sin(pi (lambda - j)/3 + pi/6), plus e^{i pi (lambda - j)}.
cplx trace_coefficient(double lambda, Sign sign, int j);

/// v = e^{-t d^3} phi + V(g - v_free(0, .)) at the levels of g.
SpaceTimeField halfline_construct_right(const GridFunction& phi, const TimeTrace& g,
                                        const ForcingOptions& opt = {}, const GroupOptions& gopt = {});

/// (h1, h2) = (1/3)[[2, -1], [-1, -1]] (G, H): solves h1 - h2 = G and
/// -h1 - 2 h2 = H.
std::array<double, 2> halfline_left_weights(double G, double H);

/// v = e^{-t d^3} phi + V h1 + V^{-1} h2 with Dirichlet data g and left
/// Neumann data h at x = 0.
SpaceTimeField halfline_construct_left(const GridFunction& phi, const TimeTrace& g, const TimeTrace& h,
                                       const ForcingOptions& opt = {}, const GroupOptions& gopt = {});

namespace kernels {

/// Phi_j on all grid points of one level; serial reference and OpenMP version.
void phi_level_serial(const ForcingKernel& k, int j, const GridLayout& grid, double t, std::span<cplx> out);
void phi_level(const ForcingKernel& k, int j, const GridLayout& grid, double t, std::span<cplx> out);

} // namespace kernels

} // namespace ygraph
