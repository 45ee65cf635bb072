#include "polypin/regime.hpp"

#include "polypin/errors.hpp"
#include "polypin/polymer.hpp"
#include "polypin/strip_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace polypin {

std::string to_string(RegimeLabel label) {
    switch (label) {
    case RegimeLabel::TH1_LOCALIZED: return "TH1_LOCALIZED";
    case RegimeLabel::R1_SUBDIFFUSIVE: return "R1_SUBDIFFUSIVE";
    case RegimeLabel::R2_DIFFUSIVE: return "R2_DIFFUSIVE";
    case RegimeLabel::R3_SRW: return "R3_SRW";
    case RegimeLabel::BC1_DIAGONAL: return "BC1_DIAGONAL";
    case RegimeLabel::BC2_HALFLINE: return "BC2_HALFLINE";
    case RegimeLabel::BC3_CRITICAL: return "BC3_CRITICAL";
    }
    return "?";
}

Classification classify(const Exponent& a, const Exponent& b) {
    if (!(a.value() > 0.0)) throw ParameterError("exponent a must be > 0");
    if (!(b.value() >= 0.0)) throw ParameterError("exponent b must be >= 0");
    const Exponent half(Rational::make(1, 2));
    const int ab = Exponent::compare(a, b);
    const int bh = Exponent::compare(b, half);
    const int ah = Exponent::compare(a, half);
    const int crit = Exponent::compare(a.affine(3, -1), b); // sign of (3a - 1) - b

    // Borders first.
    if (ab == 0 && bh <= 0) return {RegimeLabel::BC1_DIAGONAL, "", "border a = b <= 1/2"};
    if (bh == 0 && ah > 0) return {RegimeLabel::BC2_HALFLINE, "", "border b = 1/2, a > 1/2"};
    if (bh < 0 && crit == 0) return {RegimeLabel::BC3_CRITICAL, "", "border 3a - 1 = b, b < 1/2"};

    if (ah >= 0) {
        if (bh > 0) return {RegimeLabel::R3_SRW, "", "region a >= 1/2, b > 1/2"};
        return {RegimeLabel::TH1_LOCALIZED, "weakly_depinned",
                "diagram region a >= 1/2, b < 1/2 (labelled weakly depinned)"};
    }
    if (ab < 0) {
        std::string prov = "diagram region a < 1/2, b > a";
        if (bh >= 0) prov += "; the text of the localization theorem also claims this sub-case (b >= 1/2)";
        return {RegimeLabel::R2_DIFFUSIVE, "", prov};
    }
    if (crit > 0) return {RegimeLabel::TH1_LOCALIZED, "localized", "region a < 1/2, 3a - 1 > b"};
    return {RegimeLabel::R1_SUBDIFFUSIVE, "", "region a < 1/2, b < a, 3a - 1 < b"};
}

Prediction predicted_orders(const ScalingPoint& point) {
    point.validate();
    const Classification c = classify(point.a, point.b);
    const double N = static_cast<double>(point.N);
    const double T = static_cast<double>(point.T_N());
    const double d = point.delta_N();
    const double sqN = std::sqrt(N);
    Prediction p;
    p.contacts_renewal = N / renewal_moments(point.params(), MomentMethod::closed_form).mean_tau;
    switch (c.label) {
    case RegimeLabel::TH1_LOCALIZED:
        if (c.sub_tag == "weakly_depinned") {
            p.endpoint_scale = std::min(T, sqN);
            p.endpoint_formula = "min{T_N, sqrt(N)}";
        } else {
            p.endpoint_scale = T;
            p.endpoint_formula = "T_N";
        }
        p.last_contact_scale = 1.0 / (d * d);
        p.last_contact_formula = "1/delta_N^2";
        p.contacts_scale = 1.0 / d;
        p.contacts_formula = "1/delta_N";
        break;
    case RegimeLabel::R1_SUBDIFFUSIVE:
        p.constant = std::numbers::pi;
        p.endpoint_scale = std::numbers::pi * std::sqrt(N / (T * d));
        p.endpoint_formula = "pi sqrt(N/(T_N delta_N))";
        p.last_contact_scale = N;
        p.last_contact_formula = "N";
        p.contacts_scale = T * T * T * d * d;
        p.contacts_formula = "T_N^3 delta_N^2";
        break;
    case RegimeLabel::R2_DIFFUSIVE:
    case RegimeLabel::BC1_DIAGONAL:
        if (c.label == RegimeLabel::BC1_DIAGONAL) {
            p.constant = kappa(point.beta);
            p.endpoint_scale = *p.constant * sqN;
            p.endpoint_formula = "kappa(beta) sqrt(N)";
        } else {
            p.endpoint_scale = sqN;
            p.endpoint_formula = "sqrt(N)";
        }
        p.last_contact_scale = N;
        p.last_contact_formula = "N";
        p.contacts_scale = std::min(sqN, N / T);
        p.contacts_formula = "min{sqrt(N), N/T_N}";
        break;
    case RegimeLabel::R3_SRW:
    case RegimeLabel::BC2_HALFLINE:
        p.endpoint_scale = sqN;
        p.endpoint_formula = "sqrt(N)";
        p.last_contact_scale = N;
        p.last_contact_formula = "N";
        p.contacts_scale = sqN;
        p.contacts_formula = "sqrt(N)";
        break;
    case RegimeLabel::BC3_CRITICAL:
        p.endpoint_scale = T;
        p.endpoint_formula = "T_N";
        p.last_contact_scale = N;
        p.last_contact_formula = "N";
        p.contacts_scale = T * T * T * d * d;
        p.contacts_formula = "T_N^3 delta_N^2";
        break;
    }
    return p;
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double experiment_cost(const ScalingPoint& point, std::size_t n_samples) {
    const double N = static_cast<double>(point.N), T = static_cast<double>(point.T_N());
    const double len = N / 2.0 + 1.0;
    const double lg = std::log2(len + 1.0);
    const double inversion = std::min(len * len, 60.0 * len * lg * lg);
    // Strip DP + endpoint sweep + inversion + backward bridges (at most N/2 lookups each).
    return 2.0 * N * T + inversion + static_cast<double>(n_samples) * N / 2.0;
}

double srw_window_contact_prob(long T, long N, double eps) {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be even >= 2");
    if (N < 2 || N % 2 != 0) throw ParameterError("N must be even >= 2");
    if (!(eps >= 0.0) || !(eps <= 1.0)) throw ParameterError("eps must lie in [0, 1]");
    const long m = static_cast<long>(std::ceil((1.0 - eps) * static_cast<double>(N) - 1e-9));
    if (m <= 0) return 1.0;
    const auto Tz = static_cast<std::size_t>(T);
    std::vector<double> p(Tz, 0.0), q(Tz, 0.0);
    p[0] = 1.0;
    for (long k = 1; k <= N; ++k) {
        cyclic_average(p.data(), q.data(), Tz);
        if (k >= m) q[0] = 0.0;
        p.swap(q);
    }
    return 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
}

double srw_contrast(const ScalingPoint& point, double eps) {
    point.validate();
    if (!(point.a.value() < 0.5)) throw ParameterError("the contrast is defined for a < 1/2");
    return srw_window_contact_prob(point.T_N(), point.N, eps);
}

namespace {

bool wanted(const ExperimentConfig& cfg, const std::string& name) {
    return cfg.criteria.empty() || std::find(cfg.criteria.begin(), cfg.criteria.end(), name) != cfg.criteria.end();
}

void add(ExperimentReport& rep, const ExperimentConfig& cfg, std::string name, double stat,
         std::string threshold, bool pass) {
    if (!wanted(cfg, name)) return;
    rep.criteria.push_back(CriterionResult{std::move(name), stat, std::move(threshold), pass});
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.point.validate();
    const ScalingPoint& pt = cfg.point;
    const ModelParams params = pt.params();
    const double cost = experiment_cost(pt, cfg.n_samples);
    if (pt.N > kMaxN || params.T > kMaxT || cfg.n_samples > kMaxSamples || cfg.n_samples == 0)
        throw InfeasibleError("experiment outside the desk-scale guardrails (N <= 2e6, T <= 2000, "
                              "1 <= samples <= 1e5)",
                              cost);
    if (cost > 1e12) throw InfeasibleError("experiment cost estimate above 1e12 operations", cost);

    ExperimentReport rep;
    rep.point = pt;
    rep.classification = classify(pt.a, pt.b);
    rep.prediction = predicted_orders(pt);
    rep.T = params.T;
    rep.delta = params.delta;
    rep.n_samples = cfg.n_samples;
    rep.seed = cfg.seed;
    rep.cost_estimate = cost;
    const RenewalMoments mom = renewal_moments(params, MomentMethod::closed_form);
    rep.mean_tau = mom.mean_tau;
    rep.switch_prob = mom.switch_prob;

    const PolymerInstance inst = make_instance(params, pt.N);
    rep.phi = inst.renewal.fe.phi;
    rep.log_z = inst.log_z;
    rep.abs_z_minus_1 = std::fabs(std::expm1(inst.log_z));
    const auto samples = sample_batch(inst, cfg.n_samples, cfg.seed, cfg.threads);
    const double n = static_cast<double>(samples.size());
    const double N = static_cast<double>(pt.N);
    const double d = params.delta;

    // Endpoint.
    rep.v_N = rep.prediction.endpoint_scale;
    double sx = 0.0, sxx = 0.0, sl = 0.0, sL = 0.0;
    std::size_t gt[3] = {0, 0, 0}, other = 0, in_window = 0, below_M = 0;
    const double lo_t = cfg.nu / (d * d), hi_t = cfg.M / (d * d);
    const std::vector<double> edges{-std::numeric_limits<double>::infinity(), -2, -1, 0, 1, 2,
                                    std::numeric_limits<double>::infinity()};
    std::vector<std::size_t> cell(edges.size() - 1, 0);
    long m_max = 0;
    for (const auto& s : samples) m_max = std::max(m_max, s.m);
    rep.m_histogram.assign(static_cast<std::size_t>(m_max + 1), 0);
    for (const auto& s : samples) {
        const double x = static_cast<double>(s.S_N) / rep.v_N;
        sx += x;
        sxx += x * x;
        for (int k = 0; k < 3; ++k)
            if (std::fabs(x) > k + 1) ++gt[k];
        for (std::size_t c = 0; c + 1 < edges.size(); ++c)
            if (x > edges[c] && x <= edges[c + 1]) ++cell[c];
        const double tl = static_cast<double>(s.tau_last);
        sl += tl / N;
        sL += static_cast<double>(s.L);
        if (tl >= lo_t && tl <= hi_t) ++in_window;
        if (tl <= hi_t) ++below_M;
        if (s.visited_other_interface) ++other;
        ++rep.m_histogram[static_cast<std::size_t>(s.m)];
    }
    rep.mean_x = sx / n;
    rep.var_x = sxx / n - rep.mean_x * rep.mean_x;
    for (int k = 0; k < 3; ++k) rep.tail_fraction.push_back(static_cast<double>(gt[k]) / n);
    rep.band_C = 1.0;
    for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
        BandCell b{edges[c], edges[c + 1], static_cast<double>(cell[c]) / n,
                   normal_cdf(edges[c + 1]) - normal_cdf(edges[c])};
        rep.band_C = b.empirical > 0.0 ? std::max({rep.band_C, b.empirical / b.normal, b.normal / b.empirical})
                                       : std::numeric_limits<double>::infinity();
        rep.bands.push_back(b);
    }
    rep.mean_last_over_N = sl / n;
    rep.mean_L = sL / n;
    rep.frac_last_in_window = static_cast<double>(in_window) / n;
    rep.frac_last_below_M = static_cast<double>(below_M) / n;
    rep.frac_visited_other = static_cast<double>(other) / n;
    for (std::size_t i = 0; i < inst.last_contact.size(); ++i)
        if (static_cast<double>(2 * i) <= hi_t) rep.exact_last_below_M += inst.last_contact[i];

    // Interface switches: P(m >= k+1)/P(m >= k) and a log-linear fit of P(m >= k).
    std::vector<double> at_least(rep.m_histogram.size() + 1, 0.0);
    for (std::size_t k = rep.m_histogram.size(); k-- > 0;)
        at_least[k] = at_least[k + 1] + static_cast<double>(rep.m_histogram[k]);
    for (std::size_t k = 1; k <= 3; ++k) {
        const double num = k + 1 < at_least.size() ? at_least[k + 1] : 0.0;
        const double den = k < at_least.size() ? at_least[k] : 0.0;
        rep.m_ratios.push_back(den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN());
    }
    {
        double s1 = 0, s2 = 0, s11 = 0, s12 = 0, cnt = 0;
        for (std::size_t k = 1; k < at_least.size(); ++k) {
            if (at_least[k] < 10.0) break;
            const double y = std::log(at_least[k] / n);
            s1 += static_cast<double>(k);
            s2 += y;
            s11 += static_cast<double>(k * k);
            s12 += static_cast<double>(k) * y;
            ++cnt;
        }
        if (cnt >= 2) rep.theta_fit = std::exp((cnt * s12 - s1 * s2) / (cnt * s11 - s1 * s1));
    }

    // Late-contact windows.
    for (double eps : cfg.windows) {
        WindowStat w;
        w.eps = eps;
        const double start = std::ceil((1.0 - eps) * N - 1e-9);
        std::size_t hit = 0;
        for (const auto& s : samples)
            if (static_cast<double>(s.tau_last) >= start) ++hit;
        w.measured = static_cast<double>(hit) / n;
        for (std::size_t i = 0; i < inst.last_contact.size(); ++i)
            if (static_cast<double>(2 * i) >= start) w.exact += inst.last_contact[i];
        if (pt.a.value() < 0.5) w.srw_contrast = srw_contrast(pt, eps);
        rep.windows.push_back(w);
    }

    // Criteria per label.
    const RegimeLabel label = rep.classification.label;
    if (label == RegimeLabel::TH1_LOCALIZED) {
        add(rep, cfg, "th1_other_interface_fraction", rep.frac_visited_other, "<= 0.05",
            rep.frac_visited_other <= 0.05);
        add(rep, cfg, "th1_last_contact_below_M", rep.frac_last_below_M, ">= 0.80", rep.frac_last_below_M >= 0.80);
    } else if (label == RegimeLabel::BC3_CRITICAL) {
        for (std::size_t k = 0; k < 3; ++k) {
            const double r = rep.m_ratios[k];
            add(rep, cfg, "bc3_m_decay_k" + std::to_string(k + 1), r, "<= 0.9", r <= 0.9);
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, srw = 1.0;
        for (const auto& w : rep.windows) {
            lo = std::min(lo, w.measured / w.eps);
            hi = std::max(hi, w.measured / w.eps);
            srw = std::min(srw, w.srw_contrast);
        }
        const double stab = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        add(rep, cfg, "bc3_window_stability", stab, "<= 3", stab <= 3.0);
        add(rep, cfg, "bc3_srw_contrast", srw, ">= 0.9", srw >= 0.9);
    } else if (label == RegimeLabel::R3_SRW) {
        add(rep, cfg, "r3_partition_identity", rep.abs_z_minus_1, "<= 0.05", rep.abs_z_minus_1 <= 0.05);
        const PolymerInstance free = make_instance(ModelParams{params.T, 0.0}, pt.N);
        rep.mean_L_srw = std::accumulate(free.u.begin() + 1, free.u.end(), 0.0);
    } else {
        add(rep, cfg, "diffusive_variance", rep.var_x, "0.6 <= x <= 1.4", rep.var_x >= 0.6 && rep.var_x <= 1.4);
        add(rep, cfg, "diffusive_tail", rep.tail_fraction[2], "<= 0.02", rep.tail_fraction[2] <= 0.02);
    }
    return rep;
}

} // namespace polypin
