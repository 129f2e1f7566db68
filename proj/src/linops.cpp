#include "ygraph/linops.hpp"

#include "ygraph/errors.hpp"
#include "ygraph/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace ygraph {

namespace {

std::mutex& fftw_mutex()
{
    static std::mutex m;
    return m;
}

const Fft& fft_for(std::size_t n)
{
    static std::map<std::size_t, std::unique_ptr<Fft>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lk(m);
    auto& p = cache[n];
    if (!p) p = std::make_unique<Fft>(n);
    return *p;
}

template <class T>
cplx to_c(const T& v)
{
    return cplx(v);
}

template <class T>
T from_c(const cplx& v);
template <>
double from_c<double>(const cplx& v)
{
    return v.real();
}
template <>
cplx from_c<cplx>(const cplx& v)
{
    return v;
}

bool is_nice(std::size_t n)
{
    for (std::size_t p : {2u, 3u, 5u})
        while (n % p == 0) n /= p;
    return n == 1;
}

// multiplier e^{i t xi^3}; the Nyquist bin keeps only its real part so that
// real data stay real.
inline cplx group_symbol(double xi, double t, bool nyquist)
{
    const double ph = t * xi * xi * xi;
    return nyquist ? cplx(std::cos(ph), 0.0) : std::polar(1.0, ph);
}

struct Padded {
    std::size_t P;
    std::size_t off;
    std::vector<double> xi;
};

Padded layout(std::size_t n, double h, double pad)
{
    Padded p;
    p.P = padded_length(n, pad);
    p.off = (p.P - n) / 2;
    p.xi = fft_frequencies(p.P, h);
    return p;
}

template <class T>
std::vector<cplx> spectrum(const std::vector<T>& s, const Padded& L)
{
    std::vector<cplx> buf(L.P, cplx(0)), out(L.P);
    for (std::size_t i = 0; i < s.size(); ++i) buf[L.off + i] = to_c(s[i]);
    fft_for(L.P).forward(buf.data(), out.data());
    return out;
}

template <class T>
std::vector<T> unspectrum(std::vector<cplx>& spec, const Padded& L, std::size_t n)
{
    std::vector<cplx> buf(L.P);
    fft_for(L.P).backward(spec.data(), buf.data());
    std::vector<T> out(n);
    const double s = 1.0 / double(L.P);
    for (std::size_t i = 0; i < n; ++i) out[i] = from_c<T>(buf[L.off + i] * s);
    return out;
}

template <class T>
GridFunctionT<T> group_impl(const GridFunctionT<T>& phi, double t, const GroupOptions& opt)
{
    if (phi.samples.empty() || !(phi.spacing > 0)) throw ContractError("airy_group: empty grid");
    if (!std::isfinite(t)) throw DomainError("airy_group: non-finite time");
    check_decay(phi, opt.decay_tol, "airy_group");
    if (t == 0.0) return phi;
    auto L = layout(phi.size(), phi.spacing, opt.pad_factor);
    auto F = spectrum(phi.samples, L);
    const std::size_t ny = L.P % 2 == 0 ? L.P / 2 : L.P;
    for (std::size_t k = 0; k < L.P; ++k) F[k] *= group_symbol(L.xi[k], t, k == ny);
    return {phi.origin, phi.spacing, unspectrum<T>(F, L, phi.size())};
}

std::size_t level_index(double dt, std::size_t nlev, double t, const char* who)
{
    const double r = t / dt;
    const double n = std::round(r);
    if (!(t >= 0) || std::fabs(r - n) > 1e-7 * std::max(1.0, r) || n >= double(nlev)) {
        std::ostringstream os;
        os << who << ": t = " << t << " is not a level of the field (dt = " << dt << ", " << nlev << " levels)";
        throw DomainError(os.str());
    }
    return std::size_t(n);
}

// Simpson weights (in units of dt) for levels 0..n; 3/8 rule on the tail for
// odd n >= 3, trapezoid for n = 1.
std::vector<double> simpson_weights(std::size_t n)
{
    std::vector<double> c(n + 1, 0.0);
    if (n == 0) return c;
    if (n == 1) {
        c[0] = c[1] = 0.5;
        return c;
    }
    std::size_t m = (n % 2 == 0) ? n : n - 3;
    for (std::size_t j = 0; j <= m && m > 0; ++j) c[j] = (j == 0 || j == m) ? 1.0 / 3 : (j % 2 ? 4.0 / 3 : 2.0 / 3);
    if (m != n) {
        c[m] += 3.0 / 8;
        c[m + 1] += 9.0 / 8;
        c[m + 2] += 9.0 / 8;
        c[m + 3] += 3.0 / 8;
    }
    return c;
}

} // namespace

Fft::Fft(std::size_t n) : n_(n)
{
    std::lock_guard<std::mutex> lk(fftw_mutex());
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    fwd_ = fftw_plan_dft_1d(int(n), a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(int(n), a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
}

Fft::~Fft()
{
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(const cplx* in, cplx* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::backward(const cplx* in, cplx* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

std::vector<double> fft_frequencies(std::size_t n, double h)
{
    std::vector<double> xi(n);
    const double d = 2.0 * std::numbers::pi / (double(n) * h);
    for (std::size_t k = 0; k < n; ++k) {
        long kk = k < (n + 1) / 2 ? long(k) : long(k) - long(n);
        xi[k] = d * double(kk);
    }
    return xi;
}

std::size_t padded_length(std::size_t n, double pad_factor)
{
    std::size_t want = std::max<std::size_t>(16, std::size_t(std::ceil(std::max(1.0, pad_factor) * double(n))));
    while (!is_nice(want)) ++want;
    return want;
}

template <class T>
void check_decay(const GridFunctionT<T>& f, double tol, const char* who)
{
    double mx = 0;
    for (const auto& v : f.samples) mx = std::max(mx, std::abs(v));
    const double lim = tol * std::max(1.0, mx);
    const double l = std::abs(f.samples.front()), r = std::abs(f.samples.back());
    if (l > lim || r > lim) {
        std::ostringstream os;
        os << who << ": data do not decay at the " << (l > lim ? "left" : "right") << " end (|f| = " << (l > lim ? l : r)
           << " at x = " << (l > lim ? f.origin : f.right()) << ", limit " << lim << ")";
        throw ContractError(os.str());
    }
}
template void check_decay<double>(const GridFunction&, double, const char*);
template void check_decay<cplx>(const CGridFunction&, double, const char*);

GridFunction airy_group(const GridFunction& phi, double t, const GroupOptions& opt) { return group_impl(phi, t, opt); }
CGridFunction airy_group(const CGridFunction& phi, double t, const GroupOptions& opt) { return group_impl(phi, t, opt); }

namespace kernels {

/// S(xi) = sum_j c_j e^{i (t - t_j) xi^3} W_j(xi); reference loop.
void duhamel_accumulate_serial(const std::vector<std::vector<cplx>>& W, const std::vector<double>& c,
                               const std::vector<double>& xi, double dt, double t, std::vector<cplx>& S)
{
    const std::size_t P = xi.size();
    S.assign(P, cplx(0));
    const std::size_t ny = P % 2 == 0 ? P / 2 : P;
    for (std::size_t k = 0; k < P; ++k) {
        cplx s(0);
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0.0) s += c[j] * group_symbol(xi[k], t - dt * double(j), k == ny) * W[j][k];
        S[k] = s * dt;
    }
}

void duhamel_accumulate(const std::vector<std::vector<cplx>>& W, const std::vector<double>& c,
                        const std::vector<double>& xi, double dt, double t, std::vector<cplx>& S)
{
    const long P = long(xi.size());
    S.assign(std::size_t(P), cplx(0));
    const long ny = P % 2 == 0 ? P / 2 : P;
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long k = 0; k < P; ++k) {
        cplx s(0);
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0.0) s += c[j] * group_symbol(xi[k], t - dt * double(j), k == ny) * W[j][k];
        S[k] = s * dt;
    }
}

} // namespace kernels

template <class T>
GridFunctionT<T> duhamel_inhomog(const SpaceTimeFieldT<T>& w, double t, const GroupOptions& opt)
{
    if (w.levels.empty()) throw ContractError("duhamel_inhomog: empty field");
    const std::size_t n = level_index(w.dt, w.levels.size(), t, "duhamel_inhomog");
    const std::size_t nx = w.nx();
    if (n == 0) return {w.origin, w.spacing, std::vector<T>(nx, T(0))};
    auto L = layout(nx, w.spacing, opt.pad_factor);
    std::vector<std::vector<cplx>> W(n + 1);
    const long nn = long(n);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long j = 0; j <= nn; ++j) {
        check_decay(w.level(std::size_t(j)), opt.decay_tol, "duhamel_inhomog");
        W[std::size_t(j)] = spectrum(w.levels[std::size_t(j)], L);
    }
    std::vector<cplx> S;
    kernels::duhamel_accumulate(W, simpson_weights(n), L.xi, w.dt, double(n) * w.dt, S);
    return {w.origin, w.spacing, unspectrum<T>(S, L, nx)};
}

template <class T>
SpaceTimeFieldT<T> duhamel_inhomog_all(const SpaceTimeFieldT<T>& w, const GroupOptions& opt)
{
    SpaceTimeFieldT<T> out{w.origin, w.spacing, w.dt, {}};
    if (w.levels.empty()) return out;
    const std::size_t nx = w.nx(), M = w.levels.size();
    auto L = layout(nx, w.spacing, opt.pad_factor);
    const std::size_t P = L.P;
    const std::size_t ny = P % 2 == 0 ? P / 2 : P;
    out.levels.assign(M, std::vector<T>(nx, T(0)));
    std::vector<cplx> Podd(P, 0.0), Peven(P, 0.0), E0;
    std::vector<std::vector<cplx>> ring(4);
    std::vector<cplx> S(P);
    const double dt = w.dt;
    for (std::size_t n = 0; n < M; ++n) {
        check_decay(w.level(n), opt.decay_tol, "duhamel_inhomog_all");
        auto E = spectrum(w.levels[n], L);
        const double tn = dt * double(n);
        for (std::size_t k = 0; k < P; ++k) E[k] *= group_symbol(L.xi[k], -tn, k == ny);
        if (n == 0) E0 = E;
        auto& acc = (n % 2) ? Podd : Peven;
        for (std::size_t k = 0; k < P; ++k) acc[k] += E[k];
        ring[n % 4] = std::move(E);
        if (n == 0) continue;
        const auto& En = ring[n % 4];
        if (n == 1) {
            for (std::size_t k = 0; k < P; ++k) S[k] = 0.5 * dt * (E0[k] + En[k]);
        } else if (n % 2 == 0) {
            for (std::size_t k = 0; k < P; ++k)
                S[k] = dt / 3.0 * (E0[k] + En[k] + 4.0 * Podd[k] + 2.0 * (Peven[k] - E0[k] - En[k]));
        } else {
            const auto& E1 = ring[(n - 1) % 4];
            const auto& E2 = ring[(n - 2) % 4];
            const auto& E3 = ring[(n - 3) % 4];
            const bool simpson = n > 3;
            for (std::size_t k = 0; k < P; ++k) {
                cplx s(0);
                if (simpson) {
                    cplx odd = Podd[k] - En[k] - E2[k];
                    cplx even = Peven[k] - E1[k] - E3[k] - E0[k];
                    s = dt / 3.0 * (E0[k] + E3[k] + 4.0 * odd + 2.0 * even);
                }
                S[k] = s + 3.0 * dt / 8.0 * (E3[k] + 3.0 * E2[k] + 3.0 * E1[k] + En[k]);
            }
        }
        std::vector<cplx> R(P);
        for (std::size_t k = 0; k < P; ++k) R[k] = S[k] * group_symbol(L.xi[k], tn, k == ny);
        out.levels[n] = unspectrum<T>(R, L, nx);
    }
    return out;
}

template <class T>
SpaceTimeFieldT<T> free_evolution(const GridFunctionT<T>& phi, double dt, std::size_t nt, const GroupOptions& opt)
{
    check_decay(phi, opt.decay_tol, "free_evolution");
    SpaceTimeFieldT<T> out{phi.origin, phi.spacing, dt, std::vector<std::vector<T>>(nt)};
    auto L = layout(phi.size(), phi.spacing, opt.pad_factor);
    const auto F = spectrum(phi.samples, L);
    const std::size_t ny = L.P % 2 == 0 ? L.P / 2 : L.P;
    const long N = long(nt);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long j = 0; j < N; ++j) {
        std::vector<cplx> G(F);
        const double t = dt * double(j);
        for (std::size_t k = 0; k < L.P; ++k) G[k] *= group_symbol(L.xi[k], t, k == ny);
        out.levels[std::size_t(j)] = unspectrum<T>(G, L, phi.size());
    }
    return out;
}

template <class T>
GridFunctionT<T> spectral_derivative(const GridFunctionT<T>& f, int m, const GroupOptions& opt)
{
    check_decay(f, opt.decay_tol, "spectral_derivative");
    auto L = layout(f.size(), f.spacing, opt.pad_factor);
    auto F = spectrum(f.samples, L);
    const std::size_t ny = L.P % 2 == 0 ? L.P / 2 : L.P;
    for (std::size_t k = 0; k < L.P; ++k) {
        cplx s = std::pow(cplx(0, L.xi[k]), m);
        if (k == ny) s = (m % 2) ? cplx(0) : cplx(s.real(), 0);
        F[k] *= s;
    }
    return {f.origin, f.spacing, unspectrum<T>(F, L, f.size())};
}

template GridFunction duhamel_inhomog<double>(const SpaceTimeField&, double, const GroupOptions&);
template CGridFunction duhamel_inhomog<cplx>(const CSpaceTimeField&, double, const GroupOptions&);
template SpaceTimeField duhamel_inhomog_all<double>(const SpaceTimeField&, const GroupOptions&);
template CSpaceTimeField duhamel_inhomog_all<cplx>(const CSpaceTimeField&, const GroupOptions&);
template SpaceTimeField free_evolution<double>(const GridFunction&, double, std::size_t, const GroupOptions&);
template CSpaceTimeField free_evolution<cplx>(const CGridFunction&, double, std::size_t, const GroupOptions&);
template GridFunction spectral_derivative<double>(const GridFunction&, int, const GroupOptions&);
template CGridFunction spectral_derivative<cplx>(const CGridFunction&, int, const GroupOptions&);

std::vector<double> fd_weights(double z, std::span<const double> x, int m)
{
    const int n = int(x.size());
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
    double c1 = 1.0, c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[std::size_t(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[std::size_t(i)] - x[std::size_t(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k > 0; --k)
                    c[std::size_t(i)][std::size_t(k)] =
                        c1 * (k * c[std::size_t(i - 1)][std::size_t(k - 1)] - c5 * c[std::size_t(i - 1)][std::size_t(k)]) / c2;
                c[std::size_t(i)][0] = -c1 * c5 * c[std::size_t(i - 1)][0] / c2;
            }
            for (int k = mn; k > 0; --k)
                c[std::size_t(j)][std::size_t(k)] =
                    (c4 * c[std::size_t(j)][std::size_t(k)] - k * c[std::size_t(j)][std::size_t(k - 1)]) / c3;
            c[std::size_t(j)][0] = c4 * c[std::size_t(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[std::size_t(i)] = c[std::size_t(i)][std::size_t(m)];
    return w;
}

namespace {

struct ZeroLoc {
    bool on_node;
    long k;  // node at 0, or the last node left of 0
};

ZeroLoc locate_zero(double origin, double h, std::size_t n, const char* who)
{
    const double r = -origin / h;
    const double last = double(n - 1);
    if (r < -1e-9 || r > last + 1e-9) {
        std::ostringstream os;
        os << who << ": x = 0 is outside the grid [" << origin << ", " << origin + h * last << "]";
        throw DomainError(os.str());
    }
    const double rr = std::round(r);
    if (std::fabs(r - rr) < 1e-9) return {true, long(rr)};
    return {false, long(std::floor(r))};
}

// node indices used for a one-sided or centered stencil
std::vector<long> stencil_nodes(const ZeroLoc& z, std::size_t n, Side side, int count, const char* who)
{
    std::vector<long> idx;
    const long N = long(n);
    if (side == Side::Centered) {
        const int half = count / 2;
        if (z.on_node)
            for (long i = z.k - half; i <= z.k + half; ++i) idx.push_back(i);
        else
            for (long i = z.k - half + 1; i <= z.k + half; ++i) idx.push_back(i);
    } else if (side == Side::Left) {
        long start = z.k;
        if (z.on_node && z.k != N - 1) start = z.k - 1;
        for (long i = start; i > start - count; --i) idx.push_back(i);
    } else {
        long start = z.on_node ? z.k : z.k + 1;
        if (z.on_node && z.k != 0) start = z.k + 1;
        for (long i = start; i < start + count; ++i) idx.push_back(i);
    }
    for (long i : idx)
        if (i < 0 || i >= N) {
            std::ostringstream os;
            os << who << ": not enough grid nodes around x = 0 for the requested stencil";
            throw DomainError(os.str());
        }
    return idx;
}

template <class T>
T apply_stencil(const GridFunctionT<T>& f, const std::vector<long>& idx, int m)
{
    std::vector<double> xs;
    for (long i : idx) xs.push_back(f.x(std::size_t(i)));
    auto w = fd_weights(0.0, xs, m);
    T s(0);
    for (std::size_t q = 0; q < idx.size(); ++q) s += w[q] * f.samples[std::size_t(idx[q])];
    return s;
}

} // namespace

template <class T>
T trace_at_zero(const GridFunctionT<T>& f, int j, Side side)
{
    if (j < 0 || j > 2) throw DomainError("trace_at_zero: derivative order must be 0, 1 or 2");
    auto z = locate_zero(f.origin, f.spacing, f.size(), "trace_at_zero");
    if (side == Side::Centered && z.on_node && j == 0) return f.samples[std::size_t(z.k)];
    const int count = side == Side::Centered ? (z.on_node ? 5 : 6) : j + 4;
    auto idx = stencil_nodes(z, f.size(), side, count, "trace_at_zero");
    return apply_stencil(f, idx, j);
}

template <class T>
TimeTraceT<T> trace_at_zero(const SpaceTimeFieldT<T>& f, int j, Side side)
{
    TimeTraceT<T> out{f.dt, std::vector<T>(f.levels.size()), true};
    for (std::size_t n = 0; n < f.levels.size(); ++n) out.samples[n] = trace_at_zero(f.level(n), j, side);
    return out;
}

template <class T>
T one_sided_limit(const GridFunctionT<T>& f, Side side, int nodes)
{
    auto z = locate_zero(f.origin, f.spacing, f.size(), "jump_size");
    std::vector<long> idx;
    const long N = long(f.size());
    if (side == Side::Left) {
        long start = z.on_node ? z.k - 1 : z.k;
        for (long i = start; i > start - nodes; --i) idx.push_back(i);
    } else {
        long start = z.k + 1;
        for (long i = start; i < start + nodes; ++i) idx.push_back(i);
    }
    for (long i : idx)
        if (i < 0 || i >= N) throw DomainError("jump_size: fewer than 4 nodes on one side of x = 0");
    return apply_stencil(f, idx, 0);
}

template <class T>
T jump_size(const GridFunctionT<T>& f)
{
    return one_sided_limit(f, Side::Right, 4) - one_sided_limit(f, Side::Left, 4);
}

template <class T>
T jump_size(const SpaceTimeFieldT<T>& f, double t)
{
    return jump_size(f.level(level_index(f.dt, f.levels.size(), t, "jump_size")));
}

template double trace_at_zero<double>(const GridFunction&, int, Side);
template cplx trace_at_zero<cplx>(const CGridFunction&, int, Side);
template TimeTrace trace_at_zero<double>(const SpaceTimeField&, int, Side);
template CTimeTrace trace_at_zero<cplx>(const CSpaceTimeField&, int, Side);
template double one_sided_limit<double>(const GridFunction&, Side, int);
template cplx one_sided_limit<cplx>(const CGridFunction&, Side, int);
template double jump_size<double>(const GridFunction&);
template cplx jump_size<cplx>(const CGridFunction&);
template double jump_size<double>(const SpaceTimeField&, double);
template cplx jump_size<cplx>(const CSpaceTimeField&, double);

namespace {
template <class T>
double sobolev_impl(const GridFunctionT<T>& f, double s)
{
    if (!(s >= -1.0 && s <= 2.0)) throw DomainError("sobolev_norm: s must lie in [-1, 2]");
    check_decay(f, 1e-8, "sobolev_norm");
    const std::size_t n = f.size();
    std::vector<cplx> a(n), F(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = to_c(f.samples[i]);
    fft_for(n).forward(a.data(), F.data());
    const auto xi = fft_frequencies(n, f.spacing);
    const double h = f.spacing, dxi = 2.0 * std::numbers::pi / (double(n) * h);
    double acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double wgt = std::pow(1.0 + std::fabs(xi[k]), 2.0 * s);
        acc += wgt * std::norm(h * F[k]);
    }
    // <xi>^{2s} has a kink at xi = 0; the Euler-Maclaurin term for a kink at
    // a node restores O(dxi^4) accuracy of the frequency sum.
    const double kink = dxi * dxi / 3.0 * s * std::norm(h * F[0]);
    return std::sqrt((acc * dxi + kink) / (2.0 * std::numbers::pi));
}
} // namespace

double sobolev_norm(const GridFunction& f, double s) { return sobolev_impl(f, s); }
double sobolev_norm(const CGridFunction& f, double s) { return sobolev_impl(f, s); }

} // namespace ygraph
