#include "polypin/srw_kernel.hpp"

#include "polypin/errors.hpp"
#include "polypin/numeric.hpp"
#include "polypin/strip_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace polypin {

namespace {

void require_even_horizon(long horizon) {
    if (horizon < 2) throw ParameterError("horizon must be >= 2");
    if (horizon % 2 != 0) throw ParameterError("horizon must be even");
}

double entry(const std::vector<double>& v, long n) noexcept {
    if (n < 0 || n % 2 != 0) return 0.0;
    const auto i = static_cast<std::size_t>(n / 2);
    return i < v.size() ? v[i] : 0.0;
}

// Direct O(n^2) products are fine up to this many multiply-adds per convolution.
constexpr double kDirectConvolutionBudget = 5e8;

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             std::size_t len) {
    const double cost = 0.5 * static_cast<double>(len) * static_cast<double>(len);
    if (cost <= kDirectConvolutionBudget) return convolve_kahan(a, b, len);
    auto c = convolve_fft(a, b, len);
    for (double& x : c) x = std::max(x, 0.0);
    return c;
}

} // namespace

InterfaceSpec InterfaceSpec::finite(long T) {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be an even integer >= 2");
    return InterfaceSpec(Kind::finite, T);
}

double HittingLaw::q0_at(long n) const noexcept { return entry(q0, n); }
double HittingLaw::q1_at(long n) const noexcept { return entry(q1, n); }
double HittingLaw::q_at(long n) const noexcept { return q0_at(n) + 2.0 * q1_at(n); }

std::vector<double> HittingLaw::total() const {
    std::vector<double> q(q0.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = q0[i] + 2.0 * q1[i];
    return q;
}

double KFoldLaw::at(long n) const noexcept { return entry(mass, n); }

double g_of_T(long T) noexcept {
    if (T <= 2) return std::numeric_limits<double>::infinity();
    return -std::log(std::cos(std::numbers::pi / static_cast<double>(T)));
}

HittingLaw hitting_law(const InterfaceSpec& spec, long horizon) {
    require_even_horizon(horizon);
    HittingLaw law{spec, horizon, {}, {}, {}, 0.0};
    const auto len = static_cast<std::size_t>(horizon / 2 + 1);
    law.q0.assign(len, 0.0);
    law.q1.assign(len, 0.0);
    law.qm1.assign(len, 0.0);

    if (spec.is_infinite()) {
        // p = P(S_{2i} = 0) = P(tau_1 > 2i); q(2i) = p_{i-1} - p_i = p_{i-1}/(2i).
        double p = 1.0;
        for (std::size_t i = 1; i < len; ++i) {
            const double di = static_cast<double>(i);
            law.q0[i] = p / (2.0 * di);
            p *= (2.0 * di - 1.0) / (2.0 * di);
        }
        law.tail_mass = p;
        return law;
    }

    DenormalGuard guard;
    StripWalk walk(spec.T());
    for (std::size_t i = 1; i < len; ++i) {
        const Absorbed a = walk.advance2();
        law.q0[i] = a.zero;
        law.q1[i] = a.plus;
        law.qm1[i] = a.minus;
        if ((i & 63) == 0 && walk.survival() == 0.0) break;
    }
    law.tail_mass = walk.survival();
    return law;
}

std::vector<KFoldLaw> k_fold_hitting_all(const InterfaceSpec& spec, int k_max, long horizon,
                                         bool constrained) {
    if (k_max < 1) throw ParameterError("k must be >= 1");
    if (constrained && spec.is_infinite())
        throw ParameterError("the gap constraint needs a finite T");
    const HittingLaw law = hitting_law(spec, horizon);
    std::vector<double> base = law.total();
    if (constrained) {
        const long cap = spec.T() * spec.T();
        for (std::size_t i = 0; i < base.size(); ++i)
            if (2 * static_cast<long>(i) > cap) base[i] = 0.0;
    }
    std::vector<KFoldLaw> out;
    out.reserve(static_cast<std::size_t>(k_max));
    out.push_back(KFoldLaw{spec, 1, horizon, constrained, base});
    for (int k = 2; k <= k_max; ++k)
        out.push_back(KFoldLaw{spec, k, horizon, constrained,
                               convolve(out.back().mass, base, base.size())});
    return out;
}

KFoldLaw k_fold_hitting(const InterfaceSpec& spec, int k, long horizon, bool constrained) {
    return std::move(k_fold_hitting_all(spec, k, horizon, constrained).back());
}

double hitting_bound_ratio(const InterfaceSpec& spec, int k, long n, double mass) noexcept {
    const double nn = static_cast<double>(n);
    double scale = std::pow(nn, 1.5);
    double expo = 0.0;
    if (!spec.is_infinite()) {
        const double T = static_cast<double>(spec.T());
        scale = std::min(T * T * T, scale);
        if (spec.T() > 2) expo = nn * g_of_T(spec.T());
    }
    return mass * scale * std::exp(expo) / static_cast<double>(k);
}

namespace {

BoundRow bound_row(long T, int k_max, long constrained_span) {
    const InterfaceSpec spec = InterfaceSpec::finite(T);
    BoundRow row;
    row.T = T;
    const long n_max = 2 * T * T - 2; // n < 2T^2
    const auto laws = k_fold_hitting_all(spec, k_max, n_max, false);
    for (const auto& law : laws) {
        for (long n = 2; n <= n_max; n += 2) {
            const double m = law.at(n);
            if (m <= 0.0) continue;
            const double r = hitting_bound_ratio(spec, law.k, n, m);
            if (r > row.max_ratio) {
                row.max_ratio = r;
                row.arg_k = law.k;
                row.arg_n = n;
            }
        }
    }
    if (constrained_span < 2) return row;

    // Constrained part: n in [2T^2, span*T^2]; fit log rho(k) = log C + k log(1 + C'/T).
    const long lo = 2 * T * T, hi = constrained_span * T * T;
    const auto claws = k_fold_hitting_all(spec, k_max, hi, true);
    const double g = g_of_T(T), T3 = static_cast<double>(T) * T * T;
    std::vector<double> ks, logs, rho(claws.size(), 0.0);
    for (std::size_t i = 0; i < claws.size(); ++i) {
        for (long n = lo; n <= hi; n += 2) {
            const double m = claws[i].at(n);
            if (m > 0.0) rho[i] = std::max(rho[i], m * T3 * std::exp(static_cast<double>(n) * g));
        }
        if (rho[i] > 0.0) {
            ks.push_back(static_cast<double>(i + 1));
            logs.push_back(std::log(rho[i]));
        }
    }
    if (ks.size() >= 2) {
        const double n = static_cast<double>(ks.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            sx += ks[i];
            sy += logs[i];
            sxx += ks[i] * ks[i];
            sxy += ks[i] * logs[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        row.fitted_C_prime = std::max(0.0, static_cast<double>(T) * std::expm1(slope));
        row.fitted_C = std::exp((sy - slope * sx) / n);
    } else if (ks.size() == 1) {
        row.fitted_C = std::exp(logs[0]);
    }
    const double growth = std::log1p(row.fitted_C_prime / static_cast<double>(T));
    for (std::size_t i = 0; i < claws.size(); ++i) {
        if (rho[i] <= 0.0) continue;
        const double r = rho[i] * std::exp(-static_cast<double>(i + 1) * growth);
        if (r > row.max_ratio_constrained) {
            row.max_ratio_constrained = r;
            row.arg_k_constrained = static_cast<int>(i + 1);
            for (long n2 = lo; n2 <= hi; n2 += 2) {
                const double m = claws[i].at(n2);
                if (m > 0.0 && m * T3 * std::exp(static_cast<double>(n2) * g) >= rho[i] * (1 - 1e-15)) {
                    row.arg_n_constrained = n2;
                    break;
                }
            }
        }
    }
    return row;
}

} // namespace

BoundReport verify_hitting_bounds(const BoundGrid& grid) {
    if (grid.T_values.empty()) throw ParameterError("bound grid needs at least one T");
    for (long T : grid.T_values) InterfaceSpec::finite(T);
    if (grid.k_max < 1) throw ParameterError("k_max must be >= 1");

    BoundReport report;
    report.rows.resize(grid.T_values.size());
    const std::size_t workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(grid.threads, 1)), 1,
                                grid.T_values.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < grid.T_values.size(); ++i)
            report.rows[i] = bound_row(grid.T_values[i], grid.k_max, grid.constrained_span);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < grid.T_values.size(); i += workers)
                    report.rows[i] = bound_row(grid.T_values[i], grid.k_max, grid.constrained_span);
            });
        }
    }

    // Deterministic merge by grid index.
    const long T_max = *std::max_element(grid.T_values.begin(), grid.T_values.end());
    for (const auto& row : report.rows) {
        if (row.max_ratio > report.max_ratio) {
            report.max_ratio = row.max_ratio;
            report.arg_T = row.T;
            report.arg_k = row.arg_k;
            report.arg_n = row.arg_n;
        }
        report.max_ratio_constrained = std::max(report.max_ratio_constrained, row.max_ratio_constrained);
    }
    report.interior = report.arg_k < grid.k_max && report.arg_n < 2 * report.arg_T * report.arg_T - 2 &&
                      (report.arg_T < T_max || grid.T_values.size() == 1);
    return report;
}

double interface_visit_prob(const InterfaceSpec& spec, long n) {
    if (n < 0) throw ParameterError("n must be >= 0");
    if (n % 2 != 0) return 0.0;
    if (n == 0) return 1.0;
    // Centre term P(S_n = 0) = binom(n, n/2)/2^n as a running product, then walk outwards
    // with the ratio P(S_n = x + 2)/P(S_n = x) = (n - x)/(n + x + 2).
    const long m = n / 2;
    double centre = 1.0;
    for (long i = 1; i <= m; ++i) centre *= (2.0 * static_cast<double>(i) - 1.0) / (2.0 * static_cast<double>(i));
    if (spec.is_infinite()) return centre;
    const long T = spec.T();
    KahanSum sum;
    sum += centre;
    double p = centre;
    for (long x = 0; x + 2 <= n; x += 2) {
        p *= static_cast<double>(n - x) / static_cast<double>(n + x + 2);
        if (p == 0.0) break;
        const long y = x + 2;
        if (y % T == 0) sum += 2.0 * p;
    }
    return sum.value();
}

VisitBand interface_visit_band(const InterfaceSpec& spec, const std::vector<long>& n_values) {
    VisitBand band{std::numeric_limits<double>::infinity(), 0.0};
    for (long n : n_values) {
        if (n <= 0 || n % 2 != 0) throw ParameterError("band needs positive even n");
        double scale = std::sqrt(static_cast<double>(n));
        if (!spec.is_infinite()) scale = std::min(scale, static_cast<double>(spec.T()));
        const double v = interface_visit_prob(spec, n) * scale;
        band.lo = std::min(band.lo, v);
        band.hi = std::max(band.hi, v);
    }
    return band;
}

ExpansionReport return_origin_expansions(const std::vector<long>& n_values) {
    ExpansionReport rep;
    const double pi = std::numbers::pi, sqpi = std::sqrt(pi);
    for (long n : n_values) {
        if (n < 2 || n % 2 != 0) throw ParameterError("expansion needs even n >= 2");
        const double nn = static_cast<double>(n), l = nn / 2.0;
        const double pr = interface_visit_prob(InterfaceSpec::infinite(), n);
        ExpansionRow r;
        r.n = n;
        r.p_return = pr;
        r.p_first = pr / (nn - 1.0);
        r.p_first_le = 1.0 - pr; // P(tau_1 > 2l) = P(S_{2l} = 0)
        r.residual_return = pr * std::sqrt(pi * nn / 2.0) - (1.0 - 1.0 / (4.0 * nn));
        r.residual_first = r.p_first * std::sqrt(pi / 2.0) * std::pow(nn, 1.5) - (1.0 + 3.0 / (4.0 * nn));
        // Work with the complement to avoid cancellation against 1.
        const double stated_tail = 1.0 / std::sqrt(pi * l) + 3.0 / (8.0 * sqpi * std::pow(l, 1.5));
        const double true_tail = 1.0 / std::sqrt(pi * l) - 1.0 / (8.0 * sqpi * std::pow(l, 1.5));
        r.residual_first_le = stated_tail - pr;
        r.residual_first_le_corrected = true_tail - pr;
        if (r.p_first_le > 1.0 - stated_tail) rep.stated_bound_holds = false;
        rep.rows.push_back(r);
    }
    if (rep.rows.size() >= 2) {
        const auto& a = rep.rows[rep.rows.size() - 2];
        const auto& b = rep.rows.back();
        const double dl = std::log(static_cast<double>(b.n) / static_cast<double>(a.n));
        auto slope = [&](double ra, double rb) {
            if (ra == 0.0 || rb == 0.0) return 0.0;
            return -std::log(std::fabs(rb) / std::fabs(ra)) / dl;
        };
        rep.order_return = slope(a.residual_return, b.residual_return);
        rep.order_first = slope(a.residual_first, b.residual_first);
        rep.order_first_le = slope(a.residual_first_le, b.residual_first_le);
        rep.order_first_le_corrected = slope(a.residual_first_le_corrected, b.residual_first_le_corrected);
    }
    return rep;
}

double reflection_identity_check(long T, long horizon) {
    if (T < 4 || T % 4 != 0) throw ParameterError("reflection identity needs T divisible by 4");
    require_even_horizon(horizon);
    const HittingLaw full = hitting_law(InterfaceSpec::finite(T), horizon);
    const HittingLaw half = hitting_law(InterfaceSpec::finite(T / 2), horizon);
    double worst = 0.0;
    for (long n = 2; n <= horizon; n += 2)
        worst = std::max(worst, std::fabs(2.0 * full.q1_at(n) - full.q0_at(n) + half.q0_at(n)));
    return worst;
}

} // namespace polypin
