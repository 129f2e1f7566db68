#include "ygraph/forcing.hpp"

#include "ygraph/errors.hpp"
#include "ygraph/parallel.hpp"
#include "ygraph/specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace ygraph {
namespace {

constexpr double kPi = std::numbers::pi;

struct Rule {
    std::vector<double> x, w; // on [-1, 1]
};

template <unsigned N>
Rule make_rule()
{
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.x.push_back(-a[i]);
        r.w.push_back(w[i]);
        if (a[i] != 0) {
            r.x.push_back(a[i]);
            r.w.push_back(w[i]);
        }
    }
    return r;
}

const Rule& rule12()
{
    static const Rule r = make_rule<12>();
    return r;
}

const Rule& rule8()
{
    static const Rule r = make_rule<8>();
    return r;
}

// A and A' on a fine grid; quintic Hermite in between using A'' = yA/3 and
// A''' = (A + yA')/3. Outside the table the direct evaluation is used.
class AiryTable {
public:
    static const AiryTable& get()
    {
        static const AiryTable t;
        return t;
    }

    void eval(double y, double& a, double& ap) const
    {
        if (y >= hi_) {
            a = ap = 0;
            return;
        }
        if (y <= lo_) {
            const AiryValue v = airy_value(y);
            a = v.a;
            ap = v.a_prime;
            return;
        }
        const double u = (y - lo_) / step_;
        const std::size_t i = std::min(std::size_t(u), a_.size() - 2);
        const double s = u - double(i), h = step_;
        const double y0 = lo_ + step_ * double(i), y1 = y0 + step_;
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
        const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
        const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
        const double H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
        const double H3 = 0.5 * (s3 - 2 * s4 + s5);
        const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
        const double H5 = 10 * s3 - 15 * s4 + 6 * s5;
        const double f0 = a_[i], f1 = a_[i + 1], g0 = ap_[i], g1 = ap_[i + 1];
        const double f0xx = y0 * f0 / 3, f1xx = y1 * f1 / 3;
        const double g0xx = (f0 + y0 * g0) / 3, g1xx = (f1 + y1 * g1) / 3;
        a = f0 * H0 + h * g0 * H1 + h * h * f0xx * H2 + h * h * f1xx * H3 + h * g1 * H4 + f1 * H5;
        ap = g0 * H0 + h * f0xx * H1 + h * h * g0xx * H2 + h * h * g1xx * H3 + h * f1xx * H4 + g1 * H5;
    }

private:
    AiryTable()
    {
        const std::size_t n = std::size_t(std::llround((hi_ - lo_) / step_)) + 1;
        a_.resize(n);
        ap_.resize(n);
#pragma omp parallel for schedule(static) num_threads(max_threads())
        for (std::size_t i = 0; i < n; ++i) {
            const AiryValue v = airy_value(lo_ + step_ * double(i));
            a_[i] = v.a;
            ap_[i] = v.a_prime;
        }
    }

    static constexpr double lo_ = -1300.0, hi_ = 40.0, step_ = 0.01;
    std::vector<double> a_, ap_;
};

// Phase of A(-Y) ~ cos(psi(Y) - pi/4): psi = (2/3) (Y 3^{-1/3})^{3/2}.
double airy_phase(double Y) { return 2.0 / (3.0 * std::sqrt(3.0)) * std::pow(Y, 1.5); }
double airy_phase_inv(double psi) { return std::pow(psi * 1.5 * std::sqrt(3.0), 2.0 / 3.0); }

// Half-wave breakpoints of A(-Y) strictly inside (a, b).
void half_waves(double a, double b, std::vector<double>& out)
{
    const double k0 = std::ceil((airy_phase(a) - 0.75 * kPi) / kPi);
    for (double k = std::max(k0, 0.0);; k += 1) {
        const double y = airy_phase_inv(0.75 * kPi + k * kPi);
        if (y >= b)
            break;
        if (y > a)
            out.push_back(y);
    }
}

// A^{(j)}(y) Y^{j-3} with Y = |y|; for j = 2 this is sign(y) A(y) / 3 / |y|^0.
double airy_weighted(int j, double y, double Y)
{
    double a, ap;
    AiryTable::get().eval(y, a, ap);
    switch (j) {
    case 0: return a / (Y * Y * Y);
    case 1: return ap / (Y * Y);
    default: return (y < 0 ? -a : a) / 3.0;
    }
}

double wynn_epsilon(const std::vector<double>& s)
{
    std::vector<double> prev(s.size() + 1, 0.0), cur(s);
    double best = s.back();
    for (int r = 1; cur.size() > 1 && r <= 12; ++r) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            const double d = cur[k + 1] - cur[k];
            if (d == 0)
                return best;
            next[k] = prev[k + 1] + 1.0 / d;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (r % 2 == 0)
            best = cur.back();
    }
    return best;
}

// T[j][m] = int_{Ycut}^inf A^{(j)}(-Y) Y^{j-3-3m} dY, accelerated over half-waves.
struct Tail {
    double v[3][2];
};

Tail compute_tail(double ycut)
{
    std::vector<double> br{ycut};
    half_waves(ycut, airy_phase_inv(airy_phase(ycut) + 40 * kPi), br);
    const Rule& r = rule8();
    Tail out{};
    for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 2; ++m) {
            std::vector<double> partial;
            double acc = 0;
            for (std::size_t p = 0; p + 1 < br.size(); ++p) {
                const double c = 0.5 * (br[p] + br[p + 1]), hw = 0.5 * (br[p + 1] - br[p]);
                for (std::size_t q = 0; q < r.x.size(); ++q) {
                    const double Y = c + hw * r.x[q];
                    acc += hw * r.w[q] * airy_weighted(j, -Y, Y) / std::pow(Y, 3 * m);
                }
                partial.push_back(acc);
            }
            out.v[j][m] = wynn_epsilon(partial);
        }
    return out;
}

const Tail& tail_for(double ycut)
{
    static std::mutex mu;
    static std::map<double, Tail> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ycut);
    if (it == cache.end())
        it = cache.emplace(ycut, compute_tail(ycut)).first;
    return it->second;
}

constexpr double kPositiveCutoff = 30.0; // A(Y) < 1e-40 beyond

template <class F>
cplx integrate_panels(const std::vector<double>& br, const Rule& r, F&& f)
{
    cplx acc = 0;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        const double c = 0.5 * (br[p] + br[p + 1]), hw = 0.5 * (br[p + 1] - br[p]);
        if (hw <= 0)
            continue;
        cplx s = 0;
        for (std::size_t q = 0; q < r.x.size(); ++q)
            s += r.w[q] * f(c + hw * r.x[q]);
        acc += hw * s;
    }
    return acc;
}

void check_causal_trace(const CTimeTrace& g, const char* who)
{
    if (!g.causal)
        throw ContractError(std::string(who) + ": trace must be causal");
    if (g.size() < 4 || !(g.dt > 0))
        throw ContractError(std::string(who) + ": trace needs dt > 0 and at least 4 samples");
}

void check_grid(const GridLayout& grid, const char* who)
{
    if (grid.n < 2 || !(grid.spacing > 0))
        throw DomainError(std::string(who) + ": empty grid");
    if (!(grid.origin < 0 && grid.right() > 0))
        throw DomainError(std::string(who) + ": grid must contain x = 0 strictly inside");
}

void check_levels(const TimeLevels& times, const CTimeTrace& g, const char* who)
{
    if (times.count == 0 || !(times.dt > 0))
        throw DomainError(std::string(who) + ": empty time levels");
    const double tmax = times.dt * double(times.count - 1);
    if (tmax > g.t(g.size() - 1) * (1 + 1e-12))
        throw DomainError(std::string(who) + ": times exceed the trace");
}

CTimeTrace to_complex(const TimeTrace& g)
{
    CTimeTrace c{g.dt, {}, g.causal};
    c.samples.assign(g.samples.begin(), g.samples.end());
    return c;
}

SpaceTimeField real_part(const CSpaceTimeField& f)
{
    SpaceTimeField r{f.origin, f.spacing, f.dt, {}};
    for (const auto& lv : f.levels) {
        std::vector<double> v(lv.size());
        for (std::size_t i = 0; i < lv.size(); ++i)
            v[i] = lv[i].real();
        r.levels.push_back(std::move(v));
    }
    return r;
}

} // namespace

ForcingKernel::ForcingKernel(CTimeTrace q, const ForcingOptions& opt) : q_(std::move(q)), opt_(opt)
{
    check_causal_trace(q_, "ForcingKernel");
    AiryTable::get();
}

cplx ForcingKernel::q_at(double s) const
{
    if (s <= 0)
        return 0;
    const long n = long(q_.size());
    const double u = s / q_.dt;
    const long i0 = std::clamp(long(std::floor(u)) - 1, 0L, n - 4);
    const double r = u - double(i0);
    const double l0 = -(r - 1) * (r - 2) * (r - 3) / 6, l1 = r * (r - 2) * (r - 3) / 2;
    const double l2 = -r * (r - 1) * (r - 3) / 2, l3 = r * (r - 1) * (r - 2) / 6;
    const cplx* p = q_.samples.data() + i0;
    return l0 * p[0] + l1 * p[1] + l2 * p[2] + l3 * p[3];
}

cplx ForcingKernel::q_deriv(double s) const
{
    if (s <= 0)
        return 0;
    const long n = long(q_.size());
    const double u = s / q_.dt;
    const long i0 = std::clamp(long(std::floor(u)) - 1, 0L, n - 4);
    const double r = u - double(i0);
    const double d0 = -(3 * r * r - 12 * r + 11) / 6, d1 = (3 * r * r - 10 * r + 6) / 2;
    const double d2 = -(3 * r * r - 8 * r + 3) / 2, d3 = (3 * r * r - 6 * r + 2) / 6;
    const cplx* p = q_.samples.data() + i0;
    return (d0 * p[0] + d1 * p[1] + d2 * p[2] + d3 * p[3]) / q_.dt;
}

cplx ForcingKernel::sigma_part(int j, double x, double t, double lo, double hi) const
{
    std::vector<double> br{lo};
    const double mid = 0.5 * (lo + hi);
    if (lo > 0)
        for (double p = 2 * lo; p < mid; p *= 2)
            br.push_back(p);
    br.push_back(mid);
    for (int k = 2; k <= 10; ++k)
        br.push_back(hi - (hi - lo) * std::ldexp(1.0, -k));
    br.push_back(hi);
    const AiryTable& tab = AiryTable::get();
    return integrate_panels(br, rule12(), [&](double s) -> cplx {
        double a, ap;
        tab.eval(x / s, a, ap);
        double k;
        switch (j) {
        case 0: k = a * s; break;
        case 1: k = ap; break;
        default: k = x * a / (3 * s * s); break;
        }
        return k * q_at(t - s * s * s);
    });
}

cplx ForcingKernel::y_part(int j, double x, double t, double T) const
{
    const double ax = std::abs(x), ax3 = ax * ax * ax;
    const double ylo = std::max(opt_.y_switch, ax / T);
    const double sgn = x < 0 ? -1.0 : 1.0;
    const double pre = j == 0 ? ax * ax : (j == 1 ? ax : 1.0);
    auto f = [&](double Y) -> cplx { return airy_weighted(j, sgn * Y, Y) * q_at(t - ax3 / (Y * Y * Y)); };

    std::vector<double> br{ylo};
    auto grade = [&](double next) {
        // q(t - |x|^3/Y^3) is at or near its rough start s = 0 close to ylo
        for (int k = 6; k >= 1; --k)
            br.push_back(ylo + (next - ylo) * std::ldexp(1.0, -k));
    };
    if (x > 0) {
        if (ylo >= kPositiveCutoff)
            return 0;
        grade(std::min(ylo + 1.0, kPositiveCutoff));
        for (double y = std::floor(ylo) + 1; y < kPositiveCutoff; y += 1)
            br.push_back(y);
        br.push_back(kPositiveCutoff);
        std::sort(br.begin(), br.end());
        return pre * integrate_panels(br, rule12(), f);
    }

    double ycut = 40;
    while (ycut < 2 * ax / T)
        ycut *= 2;
    std::vector<double> hw;
    half_waves(ylo, ycut, hw);
    grade(hw.empty() ? ycut : hw.front());
    br.insert(br.end(), hw.begin(), hw.end());
    br.push_back(ycut);
    const cplx body = integrate_panels(br, rule8(), f);
    const Tail& tl = tail_for(ycut);
    const cplx tail = q_at(t) * tl.v[j][0] - q_deriv(t) * ax3 * tl.v[j][1];
    return pre * (body + tail);
}

cplx ForcingKernel::phi(int j, double x, double t) const
{
    if (j < 0 || j > 2)
        throw DomainError("Phi_j: j must be 0, 1 or 2");
    if (!(t > 0))
        return 0;
    if (t > q_.t(q_.size() - 1) * (1 + 1e-12))
        throw DomainError("Phi_j: t beyond the trace");
    if (x == 0 && j == 2)
        return -0.5 * q_at(t);
    const double T = std::cbrt(t);
    const double lo = std::abs(x) / opt_.y_switch;
    cplx acc = 0;
    if (lo < T)
        acc += sigma_part(j, x, t, lo, T);
    if (x != 0)
        acc += y_part(j, x, t, T);
    return 9.0 * acc;
}

namespace kernels {

void phi_level_serial(const ForcingKernel& k, int j, const GridLayout& grid, double t, std::span<cplx> out)
{
    for (std::size_t i = 0; i < grid.n; ++i)
        out[i] = k.phi(j, grid.x(i), t);
}

void phi_level(const ForcingKernel& k, int j, const GridLayout& grid, double t, std::span<cplx> out)
{
    const long n = long(grid.n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(max_threads())
    for (long i = 0; i < n; ++i)
        out[std::size_t(i)] = k.phi(j, grid.x(std::size_t(i)), t);
}

} // namespace kernels

CSpaceTimeField duhamel_forcing(const CTimeTrace& g, const GridLayout& grid, const TimeLevels& times, int deriv,
                                const ForcingOptions& opt)
{
    check_causal_trace(g, "duhamel_forcing");
    check_grid(grid, "duhamel_forcing");
    check_levels(times, g, "duhamel_forcing");
    if (deriv < 0 || deriv > 2)
        throw DomainError("duhamel_forcing: derivative order must be 0, 1 or 2");
    const ForcingKernel k(riemann_liouville(g, -2.0 / 3.0), opt);
    CSpaceTimeField f{grid.origin, grid.spacing, times.dt, {}};
    for (std::size_t l = 0; l < times.count; ++l) {
        std::vector<cplx> lv(grid.n);
        kernels::phi_level(k, deriv, grid, times.dt * double(l), lv);
        f.levels.push_back(std::move(lv));
    }
    return f;
}

SpaceTimeField duhamel_forcing(const TimeTrace& g, const GridLayout& grid, const TimeLevels& times, int deriv,
                               const ForcingOptions& opt)
{
    return real_part(duhamel_forcing(to_complex(g), grid, times, deriv, opt));
}

SpaceTimeField ForcingEvaluation::real() const { return real_part(field); }

SpaceTimeField ForcingEvaluation::imag() const
{
    SpaceTimeField r{field.origin, field.spacing, field.dt, {}};
    for (const auto& lv : field.levels) {
        std::vector<double> v(lv.size());
        for (std::size_t i = 0; i < lv.size(); ++i)
            v[i] = lv[i].imag();
        r.levels.push_back(std::move(v));
    }
    return r;
}

ForcingEvaluation forcing_class(double lambda, Sign sign, const CTimeTrace& g, const GridLayout& grid,
                                const TimeLevels& times, int deriv, const ForcingOptions& opt)
{
    if (!(lambda > -2 && lambda < 1))
        throw DomainError("forcing_class: lambda must lie in (-2, 1)");
    check_causal_trace(g, "forcing_class");
    check_grid(grid, "forcing_class");
    check_levels(times, g, "forcing_class");
    const int k = lambda < 0 ? int(std::ceil(-lambda)) : 0;
    const double mu = lambda + k;
    if (deriv < 0 || k + deriv > 2)
        throw DomainError("forcing_class: derivative order too high for this lambda");
    const ForcingKernel ker(riemann_liouville(g, -(2 + lambda) / 3), opt);
    const cplx factor = sign == Sign::Plus ? std::polar(k % 2 ? -1.0 : 1.0, kPi * lambda) : cplx(1);

    const double tmax = times.dt * double(times.count - 1);
    const double reach = std::max(1.0, std::cbrt(tmax));
    std::size_t ext = 0;
    if (mu > 0) {
        const double len = sign == Sign::Minus ? opt.left_extension : opt.right_extension;
        ext = std::size_t(std::ceil(len * reach / grid.spacing));
    }
    GridLayout wide = grid;
    wide.n += ext;
    if (sign == Sign::Minus)
        wide.origin -= grid.spacing * double(ext);

    ForcingEvaluation ev{lambda, sign, g, {grid.origin, grid.spacing, times.dt, {}}};
    std::vector<cplx> w(wide.n), out(wide.n);
    for (std::size_t l = 0; l < times.count; ++l) {
        const double t = times.dt * double(l);
        kernels::phi_level(ker, k + deriv, wide, t, w);
        if (mu > 0) {
            // Phi_2 steps by 3q(t) at x = 0; the step is integrated exactly.
            const cplx jump = k + deriv == 2 ? 3.0 * ker.q_at(t) : cplx(0);
            auto step = [&](double x) { return sign == Sign::Minus ? (x > 0 ? 1.0 : x == 0 ? 0.5 : 0.0) : (x < 0 ? -1.0 : x == 0 ? -0.5 : 0.0); };
            for (std::size_t i = 0; i < wide.n; ++i)
                w[i] -= jump * step(wide.x(i));
            if (sign == Sign::Plus)
                std::reverse(w.begin(), w.end());
            kernels::rl_positive<cplx>(w, grid.spacing, mu, out);
            if (sign == Sign::Plus)
                std::reverse(out.begin(), out.end());
            const double gmu = gamma_fn(mu + 1);
            for (std::size_t i = 0; i < wide.n; ++i) {
                const double x = wide.x(i);
                if (sign == Sign::Minus && x > 0)
                    out[i] += jump * std::pow(x, mu) / gmu;
                if (sign == Sign::Plus && x < 0)
                    out[i] -= jump * std::pow(-x, mu) / gmu;
            }
        } else {
            out = w;
        }
        const std::size_t off = sign == Sign::Minus ? ext : 0;
        std::vector<cplx> lv(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i)
            lv[i] = factor * out[off + i];
        ev.field.levels.push_back(std::move(lv));
    }
    return ev;
}

ForcingEvaluation forcing_class(double lambda, Sign sign, const TimeTrace& g, const GridLayout& grid,
                                const TimeLevels& times, int deriv, const ForcingOptions& opt)
{
    return forcing_class(lambda, sign, to_complex(g), grid, times, deriv, opt);
}

cplx trace_coefficient(double lambda, Sign sign, int j)
{
    if (!(lambda - j > -2))
        throw DomainError("trace_coefficient: needs lambda - j > -2");
    if (sign == Sign::Minus)
        return 2 * std::sin(kPi * (lambda - j) / 3 + kPi / 6);
    return std::polar(1.0, kPi * (lambda - j));
}

namespace {

GridLayout layout_of(const GridFunction& f) { return {f.origin, f.spacing, f.size()}; }

TimeTrace difference(const TimeTrace& a, const TimeTrace& b)
{
    TimeTrace d{a.dt, a.samples, true};
    for (std::size_t i = 0; i < d.size(); ++i)
        d.samples[i] -= b.samples[i];
    return d;
}

void add_into(SpaceTimeField& f, const SpaceTimeField& g)
{
    for (std::size_t l = 0; l < f.levels.size(); ++l)
        for (std::size_t i = 0; i < f.levels[l].size(); ++i)
            f.levels[l][i] += g.levels[l][i];
}

} // namespace

SpaceTimeField halfline_construct_right(const GridFunction& phi, const TimeTrace& g, const ForcingOptions& opt,
                                        const GroupOptions& gopt)
{
    check_causal_trace(to_complex(g), "halfline_construct_right");
    const GridLayout grid = layout_of(phi);
    check_grid(grid, "halfline_construct_right");
    SpaceTimeField v = free_evolution(phi, g.dt, g.size(), gopt);
    const TimeTrace corr = difference(g, trace_at_zero(v, 0, Side::Centered));
    add_into(v, duhamel_forcing(corr, grid, {g.dt, g.size()}, 0, opt));
    return v;
}

std::array<double, 2> halfline_left_weights(double G, double H)
{
    return {(2 * G - H) / 3, (-G - H) / 3};
}

SpaceTimeField halfline_construct_left(const GridFunction& phi, const TimeTrace& g, const TimeTrace& h,
                                       const ForcingOptions& opt, const GroupOptions& gopt)
{
    check_causal_trace(to_complex(g), "halfline_construct_left");
    check_causal_trace(to_complex(h), "halfline_construct_left");
    if (g.size() != h.size() || g.dt != h.dt)
        throw ContractError("halfline_construct_left: g and h must share one time grid");
    const GridLayout grid = layout_of(phi);
    check_grid(grid, "halfline_construct_left");
    SpaceTimeField v = free_evolution(phi, g.dt, g.size(), gopt);
    const TimeTrace G = difference(g, trace_at_zero(v, 0, Side::Centered));
    const TimeTrace H = riemann_liouville(difference(h, trace_at_zero(v, 1, Side::Centered)), 1.0 / 3.0);
    TimeTrace h1{g.dt, std::vector<double>(g.size()), true}, h2 = h1;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto w = halfline_left_weights(G.samples[i], H.samples[i]);
        h1.samples[i] = w[0];
        h2.samples[i] = w[1];
    }
    const TimeLevels lv{g.dt, g.size()};
    add_into(v, duhamel_forcing(h1, grid, lv, 0, opt));
    add_into(v, forcing_class(-1.0, Sign::Minus, h2, grid, lv, 0, opt).real());
    return v;
}

} // namespace ygraph
