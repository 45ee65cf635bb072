#include "polypin/polymer.hpp"

#include "polypin/errors.hpp"
#include "polypin/numeric.hpp"
#include "polypin/report_io.hpp"
#include "polypin/srw_kernel.hpp"
#include "polypin/strip_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

namespace polypin {

namespace {

constexpr double kTinyMass = 1e-280;
constexpr long kMaxTrajectoryN = 10000;

// Walks the renewal bridge backwards from a sampled last contact, reporting every
// (contact time, sign) from the last one to the first.
template <class Visit>
long walk_back(const PolymerInstance& inst, Rng& rng, Visit&& visit) {
    const auto& cdf = inst.last_contact_cdf;
    const double target = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t r = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                                      static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    while (r > 0 && inst.last_contact[r] == 0.0) --r; // never land on a null atom

    const auto& f0 = inst.renewal.f0;
    const auto& f1 = inst.renewal.f1;
    const auto& u = inst.u;
    const std::size_t S = inst.renewal.support;
    std::size_t s = r;
    while (s > 0) {
        const std::size_t kmax = std::min(s, S);
        const double uu = rng.uniform();
        std::size_t pick = 0;
        if (u[s] > kTinyMass) {
            const double goal = uu * u[s];
            double acc = 0.0;
            for (std::size_t k = 1; k <= kmax; ++k) {
                const double w = (f0[k] + 2.0 * f1[k]) * u[s - k];
                if (w <= 0.0) continue;
                pick = k;
                acc += w;
                if (acc > goal) break;
            }
        } else {
            // u(s) too small to trust as a normaliser: two-pass draw on the explicit weights.
            double total = 0.0;
            for (std::size_t k = 1; k <= kmax; ++k) total += (f0[k] + 2.0 * f1[k]) * u[s - k];
            const double goal = uu * total;
            double acc = 0.0;
            for (std::size_t k = 1; k <= kmax; ++k) {
                const double w = (f0[k] + 2.0 * f1[k]) * u[s - k];
                if (w <= 0.0) continue;
                pick = k;
                acc += w;
                if (acc > goal) break;
            }
        }
        if (pick == 0) throw NumericError("renewal bridge has no admissible gap");
        const double f = f0[pick] + 2.0 * f1[pick];
        const double v = rng.uniform() * f;
        const int sign = v < f0[pick] ? 0 : (v < f0[pick] + f1[pick] ? 1 : -1);
        visit(static_cast<long>(2 * s), sign);
        s -= pick;
    }
    return static_cast<long>(2 * r);
}

struct SkeletonSummary {
    long last = 0, L = 0, m = 0, level = 0;
};

SkeletonSummary summarize(const PolymerInstance& inst, Rng& rng) {
    SkeletonSummary out;
    out.last = walk_back(inst, rng, [&](long, int sign) {
        ++out.L;
        if (sign != 0) ++out.m;
        out.level += sign;
    });
    return out;
}

TrajectoryStats assemble(const PolymerInstance& inst, const SkeletonSummary& sk, long offset) {
    TrajectoryStats st;
    st.tau_last = sk.last;
    st.L = sk.L;
    st.m = sk.m;
    st.visited_other_interface = sk.m > 0;
    st.S_N = inst.params.T * sk.level + offset;
    return st;
}

long draw_offset(const ConditionedExcursion& exc, Rng& rng) {
    if (exc.length() == 0) return 0;
    const long x = exc.draw(rng.uniform());
    if (x == 0) throw NumericError("final excursion has no admissible height");
    return rng.uniform() < 0.5 ? x : -x;
}

} // namespace

double PolymerInstance::srw_tail(long j) const {
    if (j < 0 || j % 2 != 0 || j > N) throw ParameterError("srw_tail needs even 0 <= j <= N");
    const double a = renewal.tilted_tail[static_cast<std::size_t>(j / 2)];
    if (a <= 0.0) return 0.0;
    return std::exp(std::log(a) + renewal.fe.phi * static_cast<double>(j));
}

PolymerInstance make_instance(const ModelParams& params, long N, MassMethod method) {
    params.validate();
    if (N < 2 || N % 2 != 0) throw ParameterError("N must be an even integer >= 2");
    PolymerInstance inst;
    inst.params = params;
    inst.N = N;
    inst.renewal = build_renewal(params, N);
    inst.u = mass_function(inst.renewal, method);

    const std::size_t len = inst.u.size();
    const auto& A = inst.renewal.tilted_tail;
    inst.last_contact.assign(len, 0.0);
    KahanSum z;
    for (std::size_t i = 0; i < len; ++i) {
        const double w = inst.u[i] * A[len - 1 - i];
        inst.last_contact[i] = w;
        z += w;
    }
    const double sum = z.value();
    inst.log_z = static_cast<double>(N) * inst.renewal.fe.phi + std::log(sum);
    inst.last_contact_cdf.assign(len, 0.0);
    KahanSum c;
    for (std::size_t i = 0; i < len; ++i) {
        inst.last_contact[i] /= sum;
        c += inst.last_contact[i];
        inst.last_contact_cdf[i] = c.value();
    }
    return inst;
}

PartitionFunction partition_function(const PolymerInstance& inst) {
    return PartitionFunction{std::exp(inst.log_z), inst.log_z};
}

PartitionFunction partition_function_transfer(const ModelParams& params, long N) {
    params.validate();
    if (N < 2 || N % 2 != 0) throw ParameterError("N must be an even integer >= 2");
    const auto T = static_cast<std::size_t>(params.T);
    const double damp = std::exp(-params.delta);
    std::vector<double> p(T, 0.0), q(T, 0.0);
    p[0] = 1.0;
    double log_scale = 0.0;
    for (long k = 1; k <= N; ++k) {
        cyclic_average(p.data(), q.data(), T);
        q[0] *= damp;
        const double s = std::accumulate(q.begin(), q.end(), 0.0);
        log_scale += std::log(s);
        for (double& v : q) v /= s;
        p.swap(q);
    }
    return PartitionFunction{std::exp(log_scale), log_scale};
}

const std::vector<double>& last_contact_law(const PolymerInstance& inst) { return inst.last_contact; }

std::vector<double> srw_last_contact_law(long T, long N) {
    if (N < 2 || N % 2 != 0) throw ParameterError("N must be an even integer >= 2");
    const InterfaceSpec spec = InterfaceSpec::finite(T);
    std::vector<double> tail(static_cast<std::size_t>(N / 2 + 1), 0.0);
    tail[0] = 1.0;
    StripWalk walk(T);
    for (std::size_t i = 1; i < tail.size(); ++i) {
        walk.advance2();
        tail[i] = walk.survival();
    }
    std::vector<double> law(tail.size(), 0.0);
    for (std::size_t i = 0; i < law.size(); ++i)
        law[i] = interface_visit_prob(spec, static_cast<long>(2 * i)) * tail[law.size() - 1 - i];
    return law;
}

long ContactSkeleton::level() const noexcept {
    long s = 0;
    for (auto e : signs) s += e;
    return s;
}

ContactSkeleton sample_skeleton(const PolymerInstance& inst, Rng& rng) {
    ContactSkeleton sk;
    sk.last_contact = walk_back(inst, rng, [&](long t, int sign) {
        sk.contacts.push_back(t);
        sk.signs.push_back(static_cast<std::int8_t>(sign));
        if (sign != 0) ++sk.m;
    });
    std::reverse(sk.contacts.begin(), sk.contacts.end());
    std::reverse(sk.signs.begin(), sk.signs.end());
    sk.L = static_cast<long>(sk.contacts.size());
    return sk;
}

TrajectoryStats sample_endpoint(const PolymerInstance& inst, const ContactSkeleton& sk, Rng& rng) {
    ConditionedExcursion exc(inst.params.T);
    exc.advance_to(inst.N - sk.last_contact);
    const long offset = draw_offset(exc, rng);
    return assemble(inst, SkeletonSummary{sk.last_contact, sk.L, sk.m, sk.level()}, offset);
}

std::vector<TrajectoryStats> sample_batch(const PolymerInstance& inst, std::size_t n, std::uint64_t seed,
                                          int threads) {
    std::vector<SkeletonSummary> sk(n);
    std::vector<Rng> rngs;
    rngs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rngs.push_back(Rng::stream(seed, i));

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                        std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) sk[i] = summarize(inst, rngs[i]);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) sk[i] = summarize(inst, rngs[i]);
            });
    }

    // One sweep over the realised residual lengths, in increasing order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sk[x].last > sk[y].last; });
    std::vector<TrajectoryStats> out(n);
    ConditionedExcursion exc(inst.params.T);
    for (std::size_t idx : order) {
        exc.advance_to(inst.N - sk[idx].last);
        out[idx] = assemble(inst, sk[idx], draw_offset(exc, rngs[idx]));
    }
    return out;
}

void write_samples_csv(std::ostream& os, const std::vector<TrajectoryStats>& samples) {
    os << "sample_id,S_N,tau_last,L,m,visited_other\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        os << i << ',' << s.S_N << ',' << s.tau_last << ',' << s.L << ',' << s.m << ','
           << (s.visited_other_interface ? 1 : 0) << '\n';
    }
}

namespace {

// Uniform path of n steps from 0 to `target` whose interior (and, when `free_end`, also
// its end) avoids T·Z. Heights are relative to the starting interface.
std::vector<long> bridge(long T, long n, long target, Rng& rng) {
    const auto W = static_cast<std::size_t>(2 * T + 1);
    auto idx = [T](long x) { return static_cast<std::size_t>(x + T); };
    std::vector<double> B(static_cast<std::size_t>(n + 1) * W, 0.0);
    auto row = [&](long t) { return B.data() + static_cast<std::size_t>(t) * W; };
    row(n)[idx(target)] = 1.0;
    for (long t = n - 1; t >= 0; --t) {
        double* cur = row(t);
        const double* nxt = row(t + 1);
        double mx = 0.0;
        for (long x = -T; x <= T; ++x) {
            if (t > 0 && x % T == 0) continue;
            const double l = x > -T ? nxt[idx(x - 1)] : 0.0;
            const double r = x < T ? nxt[idx(x + 1)] : 0.0;
            cur[idx(x)] = 0.5 * (l + r);
            mx = std::max(mx, cur[idx(x)]);
        }
        if (mx > 0.0)
            for (std::size_t j = 0; j < W; ++j) cur[j] /= mx;
    }
    if (row(0)[idx(0)] <= 0.0) throw NumericError("no admissible bridge for the sampled excursion");
    std::vector<long> path(static_cast<std::size_t>(n + 1), 0);
    long x = 0;
    for (long t = 0; t < n; ++t) {
        const double* nxt = row(t + 1);
        const double up = x < T ? nxt[idx(x + 1)] : 0.0;
        const double down = x > -T ? nxt[idx(x - 1)] : 0.0;
        x += rng.uniform() * (up + down) < up ? 1 : -1;
        path[static_cast<std::size_t>(t + 1)] = x;
    }
    return path;
}

} // namespace

std::vector<long> fill_trajectory(const PolymerInstance& inst, const ContactSkeleton& sk, long S_N, Rng& rng) {
    if (inst.N > kMaxTrajectoryN) throw ParameterError("trajectory export is limited to N <= 10000");
    const long T = inst.params.T;
    std::vector<long> path;
    path.reserve(static_cast<std::size_t>(inst.N + 1));
    path.push_back(0);
    long base = 0, t0 = 0;
    for (std::size_t i = 0; i < sk.contacts.size(); ++i) {
        const long gap = sk.contacts[i] - t0;
        const long eps = sk.signs[i];
        const auto seg = bridge(T, gap, eps * T, rng);
        for (std::size_t j = 1; j < seg.size(); ++j) path.push_back(base + seg[j]);
        base += eps * T;
        t0 = sk.contacts[i];
    }
    const long rest = inst.N - t0;
    if (rest > 0) {
        const auto seg = bridge(T, rest, S_N - base, rng);
        for (std::size_t j = 1; j < seg.size(); ++j) path.push_back(base + seg[j]);
    }
    return path;
}

} // namespace polypin
