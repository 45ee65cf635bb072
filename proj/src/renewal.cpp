#include "polypin/renewal.hpp"

#include "polypin/enumeration.hpp"
#include "polypin/errors.hpp"
#include "polypin/numeric.hpp"
#include "polypin/report_io.hpp"
#include "polypin/strip_walk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace polypin {

namespace {

constexpr double kSupportTailFraction = 1e-15;
constexpr double kFftSwitchOps = 1e9;
constexpr double kNegativeClamp = -1e-13;
constexpr std::size_t kLeaf = 128;

double entry(const std::vector<double>& v, long n) noexcept {
    if (n < 0 || n % 2 != 0) return 0.0;
    const auto i = static_cast<std::size_t>(n / 2);
    return i < v.size() ? v[i] : 0.0;
}

double clamp_roundoff(double x, std::size_t i) {
    if (x >= 0.0) return x;
    if (x >= kNegativeClamp) return 0.0;
    throw NumericError("renewal mass negative beyond round-off at n=" + std::to_string(2 * i));
}

std::vector<double> invert_direct(const std::vector<double>& f, std::size_t len, std::size_t S) {
    std::vector<double> u(len, 0.0);
    u[0] = 1.0;
    for (std::size_t i = 1; i < len; ++i) {
        const std::size_t kmax = std::min(i, S);
        double s = 0.0;
        for (std::size_t k = 1; k <= kmax; ++k) s += f[k] * u[i - k];
        u[i] = s;
    }
    return u;
}

// Online (divide-and-conquer) convolution: u[i] = sum_{k>=1} f[k] u[i-k].
class CdqInverter {
public:
    CdqInverter(const std::vector<double>& f, std::size_t len, std::size_t S)
        : f_(f), S_(S), u_(len, 0.0), acc_(len, 0.0) {}

    std::vector<double> run() {
        solve(0, u_.size());
        return std::move(u_);
    }

private:
    void solve(std::size_t l, std::size_t r) {
        if (r - l <= kLeaf) {
            for (std::size_t i = l; i < r; ++i) {
                if (i == 0) {
                    u_[0] = 1.0;
                    continue;
                }
                double s = acc_[i];
                const std::size_t jlo = (i > S_) ? std::max(l, i - S_) : l;
                for (std::size_t j = jlo; j < i; ++j) s += f_[i - j] * u_[j];
                u_[i] = clamp_roundoff(s, i);
            }
            return;
        }
        const std::size_t m = l + (r - l) / 2;
        solve(l, m);
        // Contribution of u[l, m) to acc[m, r): needs f[1 .. r-l).
        const std::size_t flen = std::min(r - l, S_ + 1);
        if (flen > 1) {
            std::span<const double> a(u_.data() + l, m - l);
            std::span<const double> b(f_.data(), flen);
            const std::vector<double> c = convolve_fft(a, b, r - l);
            for (std::size_t i = m; i < r; ++i) acc_[i] += c[i - l];
        }
        solve(m, r);
    }

    const std::vector<double>& f_;
    std::size_t S_;
    std::vector<double> u_;
    std::vector<double> acc_;
};

} // namespace

double RenewalModel::f_at(long n) const noexcept { return entry(f0, n) + 2.0 * entry(f1, n); }
double RenewalModel::f1_at(long n) const noexcept { return entry(f1, n); }

std::vector<double> RenewalModel::total() const {
    std::vector<double> f(f0.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = f0[i] + 2.0 * f1[i];
    return f;
}

RenewalModel build_renewal(const ModelParams& params, long horizon, double tail_tol) {
    params.validate();
    if (horizon < 2 || horizon % 2 != 0) throw ParameterError("horizon must be even and >= 2");
    RenewalModel m;
    m.params = params;
    m.fe = free_energy(params);
    m.horizon = horizon;
    const auto len = static_cast<std::size_t>(horizon / 2 + 1);
    m.f0.assign(len, 0.0);
    m.f1.assign(len, 0.0);
    m.tilted_tail.assign(len, 0.0);
    m.tilted_tail[0] = 1.0;

    DenormalGuard guard;
    const double damp = std::exp(-params.delta);
    StripWalk walk(params.T, std::exp(-m.fe.phi));
    KahanSum mass;
    m.support = len - 1;
    bool support_found = false;
    for (std::size_t i = 1; i < len; ++i) {
        const Absorbed a = walk.advance2();
        m.f0[i] = damp * a.zero;
        m.f1[i] = damp * a.plus;
        mass += m.f0[i] + 2.0 * m.f1[i];
        const double s = walk.survival();
        m.tilted_tail[i] = s;
        if (s == 0.0) {
            if (!support_found) m.support = i;
            support_found = true;
            break;
        }
        if (!support_found && (i & 63) == 0) {
            if (damp * walk.harmonic_tail(m.fe.gamma) < kSupportTailFraction * mass.value()) {
                m.support = i;
                support_found = true;
            }
        }
    }
    m.truncated_mass = walk.time() == horizon ? damp * walk.harmonic_tail(m.fe.gamma) : 0.0;
    m.normalization_defect = std::fabs(1.0 - (mass.value() + m.truncated_mass));
    if (std::isfinite(tail_tol) && m.truncated_mass > tail_tol)
        throw HorizonError("horizon " + std::to_string(horizon) + " leaves tail mass above tolerance",
                           m.truncated_mass);
    return m;
}

long horizon_for_tail(const ModelParams& params, double tail_tol) {
    params.validate();
    if (!(tail_tol > 0.0)) throw ParameterError("tail tolerance must be > 0");
    const FreeEnergyResult fe = free_energy(params);
    const double damp = std::exp(-params.delta);
    DenormalGuard guard;
    StripWalk walk(params.T, std::exp(-fe.phi));
    // h >= 1 on the strip, so damp * survival is a lower bound for the exact tail.
    for (;;) {
        walk.advance2();
        const double s = walk.survival();
        if (s == 0.0) return walk.time();
        if (damp * s <= tail_tol && damp * walk.harmonic_tail(fe.gamma) <= tail_tol) return walk.time();
    }
}

double direct_inversion_cost(const RenewalModel& model) noexcept {
    const double len = static_cast<double>(model.f0.size());
    return len * static_cast<double>(std::max<std::size_t>(model.support, 1));
}

std::vector<double> mass_function(const RenewalModel& model, MassMethod method) {
    const std::vector<double> f = model.total();
    const std::size_t len = f.size();
    const std::size_t S = std::min(model.support, len - 1);
    if (method == MassMethod::automatic)
        method = direct_inversion_cost(model) > kFftSwitchOps ? MassMethod::fft : MassMethod::direct;
    if (method == MassMethod::direct) return invert_direct(f, len, S);
    DenormalGuard guard;
    return CdqInverter(f, len, S).run();
}

namespace {

long even_ceil(double x) {
    long n = static_cast<long>(std::ceil(x));
    return n % 2 == 0 ? n : n + 1;
}
long even_floor(double x) {
    long n = static_cast<long>(std::floor(x));
    return n % 2 == 0 ? n : n - 1;
}

template <class Profile>
ProfileRange scan_range(std::string name, long lo, long hi, long horizon, const std::vector<double>& u,
                        Profile profile, long covered_from) {
    ProfileRange r;
    r.name = std::move(name);
    r.n_lo = std::max(2L, lo);
    r.n_hi = hi;
    r.covered = horizon >= covered_from;
    r.partial = !r.covered && horizon >= r.n_lo;
    if (!r.covered && !r.partial) return r;
    r.sup = 0.0;
    r.inf = std::numeric_limits<double>::infinity();
    const long top = std::min(hi, horizon);
    for (long n = r.n_lo; n <= top; n += 2) {
        const double ratio = u[static_cast<std::size_t>(n / 2)] / profile(static_cast<double>(n));
        r.sup = std::max(r.sup, ratio);
        r.inf = std::min(r.inf, ratio);
    }
    if (r.inf == std::numeric_limits<double>::infinity()) r.inf = 0.0;
    return r;
}

} // namespace

ProfileReport regime_profile_report(const RenewalModel& model, const std::vector<double>& u,
                                    ProfileFamily family) {
    const double T = static_cast<double>(model.params.T), d = model.params.delta;
    const long H = model.horizon;
    ProfileReport rep;
    if (family == ProfileFamily::automatic)
        family = (d > 0.0 && T * d > 1.0) ? ProfileFamily::three_range : ProfileFamily::min_sqrt_T;
    rep.family = family;
    rep.mean_tau = d > 0.0 ? renewal_moments(model.params, MomentMethod::closed_form).mean_tau : T;

    const long T2 = even_floor(T * T);
    if (family == ProfileFamily::three_range) {
        const long n1 = even_floor(1.0 / (d * d));
        rep.ranges.push_back(scan_range("short: 1/sqrt(n)", 2, n1, H, u,
                                        [](double n) { return 1.0 / std::sqrt(n); }, n1));
        rep.ranges.push_back(scan_range("intermediate: 1/(delta^2 n^1.5)", even_ceil(1.0 / (d * d)), T2, H, u,
                                        [d](double n) { return 1.0 / (d * d * n * std::sqrt(n)); }, T2));
        const long hi = std::max(H, 2 * T2);
        rep.ranges.push_back(scan_range("stationary: 1/(T^3 delta^2)", T2, hi, H, u,
                                        [T, d](double) { return 1.0 / (T * T * T * d * d); }, 2 * T2));
    } else {
        rep.ranges.push_back(scan_range("short: 1/sqrt(n)", 2, T2, H, u,
                                        [](double n) { return 1.0 / std::sqrt(n); }, T2));
        const long hi = std::max(H, 2 * T2);
        rep.ranges.push_back(scan_range("long: 1/T", T2, hi, H, u, [T](double) { return 1.0 / T; }, 2 * T2));
    }

    rep.stationary_n = even_floor(20.0 * rep.mean_tau + 1.0);
    if (rep.stationary_n <= H)
        rep.stationary_check = u[static_cast<std::size_t>(rep.stationary_n / 2)] * rep.mean_tau / 2.0;

    rep.finite_positive = true;
    for (const auto& r : rep.ranges) {
        if (!r.covered && !r.partial) continue;
        if (!(r.inf > 0.0) || !std::isfinite(r.sup)) rep.finite_positive = false;
    }
    return rep;
}

double profile_stability(const ProfileReport& a, const ProfileReport& b) {
    double worst = 1.0;
    const std::size_t n = std::min(a.ranges.size(), b.ranges.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto &x = a.ranges[i], &y = b.ranges[i];
        if (!x.covered || !y.covered || !(x.inf > 0.0) || !(y.inf > 0.0)) continue;
        worst = std::max({worst, x.sup / y.sup, y.sup / x.sup, x.inf / y.inf, y.inf / x.inf});
    }
    return worst;
}

std::vector<double> contact_weights_transfer(const ModelParams& params, long k_max) {
    params.validate();
    if (k_max < 0) throw ParameterError("k_max must be >= 0");
    const auto T = static_cast<std::size_t>(params.T);
    const double damp = std::exp(-params.delta);
    std::vector<double> p(T, 0.0), q(T, 0.0), out(static_cast<std::size_t>(k_max + 1), 0.0);
    p[0] = 1.0;
    out[0] = 1.0;
    for (long k = 1; k <= k_max; ++k) {
        cyclic_average(p.data(), q.data(), T);
        q[0] *= damp;
        p.swap(q);
        out[static_cast<std::size_t>(k)] = p[0];
    }
    return out;
}

TiltIdentityReport tilt_identity_check(const ModelParams& params, long k_max) {
    if (k_max > 20) throw ParameterError("tilt identity check supports k_max <= 20");
    const long H = std::max(2L, k_max - (k_max % 2));
    const RenewalModel model = build_renewal(params, H);
    const std::vector<double> u = mass_function(model, MassMethod::direct);
    const std::vector<double> lhs = contact_weights_transfer(params, k_max);
    TiltIdentityReport rep;
    rep.enumerated = k_max <= 16;
    for (long k = 0; k <= k_max; k += 2) {
        const double rhs = std::exp(model.fe.phi * static_cast<double>(k)) * u[static_cast<std::size_t>(k / 2)];
        rep.max_defect_transfer =
            std::max(rep.max_defect_transfer, std::fabs(lhs[static_cast<std::size_t>(k)] - rhs) / rhs);
        if (rep.enumerated) {
            const double e = enumerate_contact_weight(params.T, params.delta, k);
            rep.max_defect_enumeration = std::max(rep.max_defect_enumeration, std::fabs(e - rhs) / rhs);
        }
    }
    return rep;
}

void write_renewal_csv(std::ostream& os, const RenewalModel& model, const std::vector<double>& u) {
    os << "n,f,u\n";
    for (std::size_t i = 0; i < u.size() && i < model.f0.size(); ++i)
        os << 2 * i << ',' << fmt_double(model.f0[i] + 2.0 * model.f1[i]) << ',' << fmt_double(u[i]) << '\n';
}

} // namespace polypin
