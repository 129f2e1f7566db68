#include "ygraph/specfun.hpp"

#include "ygraph/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace ygraph {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;  // Ai(0)
constexpr long double kAip0 = 0.258819403792806798405183560189203963L; // -Ai'(0)

// Below this the decaying asymptotic series is used; its smallest term is
// ~exp(-2 zeta) relative, which at z = 5 keeps the absolute error near 1e-12.
constexpr double kPosSwitch = 5.0;
constexpr double kNegSwitch = -8.0;

void check_finite(double x, const char* what)
{
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << what << ": non-finite argument " << x;
        throw DomainError(os.str());
    }
}

// Maclaurin series in extended precision. Returns {Ai, Ai'}.
std::pair<double, double> maclaurin(double zd)
{
    const long double z = zd;
    const long double z3 = z * z * z;
    long double f = 1, g = z, fp = z * z / 2, gp = 1;
    long double tf = 1, tg = z, tfp = fp, tgp = 1;
    for (int k = 1; k < 200; ++k) {
        const long double k3 = 3.0L * k;
        tf *= z3 / ((k3 - 1) * k3);
        tg *= z3 / (k3 * (k3 + 1));
        tfp *= z3 / (k3 * (k3 + 2));
        tgp *= z3 / ((k3 - 2) * k3);
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        const long double m = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
        if (m < 1e-22L * (std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp)))
            break;
    }
    return {double(kAi0 * f - kAip0 * g), double(kAi0 * fp - kAip0 * gp)};
}

// u_k and v_k of the Airy asymptotic expansions, up to the useful order.
struct AsymCoeffs {
    static constexpr int n = 40;
    double u[n];
    double v[n];
    AsymCoeffs()
    {
        u[0] = v[0] = 1.0;
        for (int k = 1; k < n; ++k) {
            u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
            v[k] = -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
        }
    }
};
const AsymCoeffs& coeffs()
{
    static const AsymCoeffs c;
    return c;
}

// Sum of sign^k c_k zeta^{-k} stopped at the smallest term.
double asym_sum(const double* c, double zeta, int start, int stride, double sign)
{
    double s = 0, prev = HUGE_VAL, sg = 1;
    for (int k = start; k < AsymCoeffs::n; k += stride) {
        double t = c[k] * std::pow(zeta, -double(k));
        if (std::fabs(t) > prev) break;
        prev = std::fabs(t);
        s += sg * t;
        sg *= sign;
    }
    return s;
}

std::pair<double, double> asym_positive(double z)
{
    const auto& c = coeffs();
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    const double e = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
    const double q = std::pow(z, 0.25);
    return {e / q * asym_sum(c.u, zeta, 0, 1, -1.0), -e * q * asym_sum(c.v, zeta, 0, 1, -1.0)};
}

std::pair<double, double> asym_negative(double z)
{
    const auto& c = coeffs();
    const double x = -z;
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double q = std::pow(x, 0.25);
    const double ph = zeta - std::numbers::pi / 4;
    const double cs = std::cos(ph), sn = std::sin(ph);
    const double ue = asym_sum(c.u, zeta, 0, 2, -1.0), uo = asym_sum(c.u, zeta, 1, 2, -1.0);
    const double ve = asym_sum(c.v, zeta, 0, 2, -1.0), vo = asym_sum(c.v, zeta, 1, 2, -1.0);
    const double rp = 1.0 / std::sqrt(std::numbers::pi);
    return {rp / q * (cs * ue + sn * uo), rp * q * (sn * ve - cs * vo)};
}

std::pair<double, double> airy_pair(double z)
{
    if (z >= kPosSwitch) return asym_positive(z);
    if (z <= kNegSwitch) return asym_negative(z);
    return maclaurin(z);
}

const double kS1 = std::cbrt(1.0 / 3.0); // 3^{-1/3}

} // namespace

double airy_ai(double z)
{
    check_finite(z, "airy_ai");
    return airy_pair(z).first;
}

double airy_ai_prime(double z)
{
    check_finite(z, "airy_ai_prime");
    return airy_pair(z).second;
}

AiryValue airy_value(double x)
{
    check_finite(x, "airy_scaled");
    auto [a, ap] = airy_pair(kS1 * x);
    return {x, kS1 * a, kS1 * kS1 * ap};
}

double airy_scaled(double x) { return airy_value(x).a; }
double airy_scaled_deriv(double x) { return airy_value(x).a_prime; }
double airy_scaled_deriv2(double x) { return x / 3.0 * airy_value(x).a; }

double gamma_fn(double z)
{
    check_finite(z, "gamma_fn");
    if (z <= 0 && z == std::floor(z)) {
        std::ostringstream os;
        os << "gamma_fn: pole at z = " << z;
        throw DomainError(os.str());
    }
    return std::tgamma(z);
}

} // namespace ygraph
