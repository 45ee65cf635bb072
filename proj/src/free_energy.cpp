#include "polypin/free_energy.hpp"

#include "polypin/errors.hpp"
#include "polypin/numeric.hpp"
#include "polypin/srw_kernel.hpp"
#include "polypin/strip_walk.hpp"

#include <cmath>
#include <numbers>

namespace polypin {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int kMaxIterations = 200;

// tan(g) tan(T g/2), strictly increasing from 0 to +inf on [0, pi/T).
double qtilde_minus_one(long T, double gamma) {
    return std::tan(gamma) * std::tan(0.5 * static_cast<double>(T) * gamma);
}

// log cos(gamma) without cancellation for small gamma.
double log_cos(double gamma) {
    const double s = std::sin(0.5 * gamma);
    return std::log1p(-2.0 * s * s);
}

// gamma(lambda) = arctan sqrt(e^{-2 lambda} - 1) for lambda <= 0.
double gamma_of_lambda(double lambda) { return std::atan(std::sqrt(std::expm1(-2.0 * lambda))); }

} // namespace

void ModelParams::validate() const {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be an even integer >= 2");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ParameterError("delta must be finite and >= 0");
}

long ScalingPoint::T_N() const {
    const double raw = std::pow(static_cast<double>(N), a.value());
    return 2 * std::max(1L, std::lround(raw / 2.0));
}

double ScalingPoint::delta_N() const { return beta * std::pow(static_cast<double>(N), -b.value()); }

void ScalingPoint::validate() const {
    if (!(a.value() > 0.0) || !(a.value() < 1.0)) throw ParameterError("exponent a must lie in (0, 1)");
    if (!(b.value() >= 0.0) || !std::isfinite(b.value())) throw ParameterError("exponent b must be >= 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be > 0");
    if (N < 2 || N % 2 != 0) throw ParameterError("N must be an even integer >= 2");
}

double laplace_Q(long T, double lambda) {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be an even integer >= 2");
    const double half_T = 0.5 * static_cast<double>(T);
    if (lambda > 0.0) {
        const double eta = std::atanh(std::sqrt(-std::expm1(-2.0 * lambda)));
        return 1.0 - std::tanh(eta) * std::tanh(half_T * eta);
    }
    const double gamma = gamma_of_lambda(lambda);
    if (static_cast<double>(T) * gamma >= pi)
        throw DomainError("Laplace transform diverges: T*gamma >= pi", log_cos(pi / static_cast<double>(T)));
    return 1.0 + std::tan(gamma) * std::tan(half_T * gamma);
}

double laplace_Q1(long T, double lambda) {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be an even integer >= 2");
    const double Td = static_cast<double>(T);
    if (lambda == 0.0) return 1.0 / (2.0 * Td);
    if (lambda > 0.0) {
        const double eta = std::atanh(std::sqrt(-std::expm1(-2.0 * lambda)));
        return std::tanh(eta) / (2.0 * std::sinh(Td * eta));
    }
    const double gamma = gamma_of_lambda(lambda);
    if (Td * gamma >= pi)
        throw DomainError("Laplace transform diverges: T*gamma >= pi", log_cos(pi / Td));
    return std::tan(gamma) / (2.0 * std::sin(Td * gamma));
}

FreeEnergyResult free_energy(const ModelParams& params, double tol) {
    params.validate();
    const long T = params.T;
    FreeEnergyResult r;
    r.g = g_of_T(T);
    if (params.delta == 0.0) return r;

    const double target = std::expm1(params.delta);
    if (T == 2) {
        // Q_2(lambda) = e^{-2 lambda}: closed form, no root finding needed.
        r.gamma = std::atan(std::sqrt(target));
        r.phi = -0.5 * params.delta;
        r.residual = std::fabs(qtilde_minus_one(2, r.gamma) - target);
        return r;
    }

    double lo = 0.0, hi = pi / static_cast<double>(T);
    bool collapsed = false;
    for (r.iterations = 0; r.iterations < kMaxIterations; ++r.iterations) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            collapsed = true;
            break;
        }
        (qtilde_minus_one(T, mid) < target ? lo : hi) = mid;
    }
    const double res_lo = std::fabs(qtilde_minus_one(T, lo) - target);
    const double res_hi = std::fabs(qtilde_minus_one(T, hi) - target);
    r.gamma = res_lo <= res_hi ? lo : hi;
    r.residual = std::min(res_lo, res_hi);
    if (!collapsed && r.residual > tol)
        throw SolverError("free-energy bisection did not converge within the iteration cap");
    r.phi = log_cos(r.gamma);
    return r;
}

double laplace_sum_dp(long T, double phi, double cutoff) {
    if (phi > 0.0) throw ParameterError("laplace_sum_dp expects phi <= 0");
    const double gamma = phi == 0.0 ? 0.0 : gamma_of_lambda(phi);
    if (static_cast<double>(T) * gamma >= pi)
        throw DomainError("Laplace transform diverges: T*gamma >= pi", log_cos(pi / static_cast<double>(T)));
    DenormalGuard guard;
    StripWalk walk(T, std::exp(-phi));
    KahanSum sum;
    for (;;) {
        const Absorbed a = walk.advance2();
        sum += a.zero;
        sum += a.plus;
        sum += a.minus;
        if ((walk.time() & 31) == 0 || T <= 4) {
            const double s = walk.survival();
            if (s <= cutoff) break;
        }
    }
    sum += walk.harmonic_tail(gamma);
    return sum.value();
}

std::string to_string(PhiBranch b) {
    switch (b) {
    case PhiBranch::a_less_b: return "a<b";
    case PhiBranch::a_equals_b: return "a=b";
    case PhiBranch::a_greater_b: return "a>b";
    }
    return "?";
}

AsymptoticPhi asymptotic_phi(const ScalingPoint& point) {
    point.validate();
    const ModelParams p = point.params();
    const double T = static_cast<double>(p.T), d = p.delta;
    AsymptoticPhi out;
    out.exact = free_energy(p).phi;
    const int c = Exponent::compare(point.a, point.b);
    if (c < 0) {
        out.branch = PhiBranch::a_less_b;
        out.approx = -d / T;
    } else if (c == 0) {
        out.branch = PhiBranch::a_equals_b;
        const double x = x_beta(point.beta);
        out.approx = -x * x / (2.0 * T * T);
    } else {
        out.branch = PhiBranch::a_greater_b;
        out.approx = -(pi * pi / (2.0 * T * T)) * (1.0 - 4.0 / (T * d));
    }
    out.rel_error = std::fabs(out.approx - out.exact) / std::fabs(out.exact);
    return out;
}

double x_beta(double beta, double tol) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be > 0");
    // beta sin x / (1 - cos x) = beta cot(x/2), strictly decreasing on (0, pi).
    auto F = [beta](double x) { return beta / std::tan(0.5 * x) - x; };
    double lo = 0.0, hi = pi;
    for (int it = 0; it < kMaxIterations && hi - lo > tol; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (F(mid) > 0.0 ? lo : hi) = mid;
    }
    return lo + 0.5 * (hi - lo);
}

double kappa(double beta) {
    const double x = x_beta(beta);
    return std::sqrt(x * x * x / (beta * (x + std::sin(x))));
}

std::string to_string(MomentMethod m) {
    return m == MomentMethod::closed_form ? "closed_form" : "direct_sum";
}

namespace {

RenewalMoments moments_closed_form(const ModelParams& params, const FreeEnergyResult& fe) {
    const double T = static_cast<double>(params.T);
    const double g = fe.gamma, lambda = fe.phi;
    const double tg = std::tan(g), sec2 = 1.0 + tg * tg;
    const double th = std::tan(0.5 * T * g), sech2 = 1.0 + th * th;
    // Derivatives of Q~(gamma) = 1 + tan(gamma) tan(T gamma / 2).
    const double dq = sec2 * th + tg * 0.5 * T * sech2;
    const double d2q = 2.0 * sec2 * tg * th + T * sec2 * sech2 + tg * 0.5 * T * T * sech2 * th;
    // gamma(lambda) = arctan w, w = sqrt(e^{-2 lambda} - 1) = tan(gamma).
    const double w = tg;
    const double e2 = std::exp(-2.0 * lambda);
    const double dg = -1.0 / w;
    const double d2g = -e2 / (w * w * w);
    const double damp = std::exp(-params.delta);
    RenewalMoments m;
    m.method = MomentMethod::closed_form;
    m.mean_tau = -damp * dq * dg;
    m.second_tau = damp * (d2g * dq + dg * dg * d2q);
    m.switch_prob = damp * tg / std::sin(T * g);
    return m;
}

RenewalMoments moments_direct(const ModelParams& params, const FreeEnergyResult& fe) {
    DenormalGuard guard;
    const double damp = std::exp(-params.delta);
    StripWalk walk(params.T, std::exp(-fe.phi));
    const double rate = fe.g + fe.phi; // tilted survival decays like e^{-rate n}
    const double rho = params.T == 2 ? 0.0 : std::exp(-2.0 * rate);
    KahanSum s0, s1, s2, ssw;
    for (;;) {
        const Absorbed a = walk.advance2();
        const double n = static_cast<double>(walk.time());
        const double f = damp * (a.zero + a.plus + a.minus);
        s0 += f;
        s1 += n * f;
        s2 += n * n * f;
        ssw += damp * (a.plus + a.minus);
        if ((walk.time() & 63) != 0 && params.T > 2) continue;
        const double tail = damp * walk.harmonic_tail(fe.gamma);
        if (tail <= 0.0) break;
        // Geometric tail model: even n = H + 2j, j >= 1, weights rho^j.
        const double H = n, q = 1.0 - rho;
        const double en = H + 2.0 / q;
        const double en2 = H * H + 4.0 * H / q + 4.0 * (1.0 + rho) / (q * q);
        if (tail * en2 <= 1e-13 * s2.value()) {
            s1 += tail * en;
            s2 += tail * en2;
            ssw += tail * (ssw.value() / s0.value());
            break;
        }
    }
    RenewalMoments m;
    m.method = MomentMethod::direct_sum;
    m.mean_tau = s1.value();
    m.second_tau = s2.value();
    m.switch_prob = ssw.value();
    return m;
}

} // namespace

RenewalMoments renewal_moments(const ModelParams& params, MomentMethod method) {
    params.validate();
    if (!(params.delta > 0.0)) throw ParameterError("renewal moments need delta > 0");
    const FreeEnergyResult fe = free_energy(params);
    return method == MomentMethod::closed_form ? moments_closed_form(params, fe) : moments_direct(params, fe);
}

} // namespace polypin
