#include "polypin/json_io.hpp"

#include "polypin/report_io.hpp"

#include <cmath>
#include <ostream>

namespace polypin {

using json = nlohmann::ordered_json;

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const ScalingPoint& p) {
    return json{{"a", p.a.str()},       {"b", p.b.str()},           {"beta", p.beta},
                {"N", p.N},             {"T_N", p.T_N()},           {"delta_N", p.delta_N()}};
}

json to_json(const Classification& c) {
    return json{{"label", to_string(c.label)}, {"sub_tag", c.sub_tag}, {"provenance", c.provenance}};
}

json to_json(const Prediction& p) {
    json j{{"endpoint_scale", num(p.endpoint_scale)},
           {"endpoint_formula", p.endpoint_formula},
           {"last_contact_scale", num(p.last_contact_scale)},
           {"last_contact_formula", p.last_contact_formula},
           {"contacts_scale", num(p.contacts_scale)},
           {"contacts_formula", p.contacts_formula},
           {"contacts_renewal", num(p.contacts_renewal)}};
    j["constant"] = p.constant ? num(*p.constant) : json(nullptr);
    return j;
}

json to_json(const FreeEnergyResult& r) {
    return json{{"phi", num(r.phi)}, {"gamma", num(r.gamma)}, {"g", num(r.g)},
                {"residual", num(r.residual)}, {"iterations", r.iterations}};
}

json to_json(const RenewalMoments& m) {
    return json{{"method", to_string(m.method)}, {"mean_tau", num(m.mean_tau)},
                {"second_tau", num(m.second_tau)}, {"switch_prob", num(m.switch_prob)}};
}

json to_json(const ProfileReport& r) {
    json ranges = json::array();
    for (const auto& x : r.ranges)
        ranges.push_back(json{{"name", x.name},     {"n_lo", x.n_lo},       {"n_hi", x.n_hi},
                              {"covered", x.covered}, {"partial", x.partial}, {"sup", num(x.sup)},
                              {"inf", num(x.inf)},  {"band", num(x.band())}});
    const char* fam = r.family == ProfileFamily::three_range ? "three_range" : "min_sqrt_T";
    return json{{"family", fam},
                {"mean_tau", num(r.mean_tau)},
                {"stationary_n", r.stationary_n},
                {"stationary_check", num(r.stationary_check)},
                {"finite_positive", r.finite_positive},
                {"ranges", ranges}};
}

json to_json(const BoundReport& r) {
    json rows = json::array();
    for (const auto& x : r.rows)
        rows.push_back(json{{"T", x.T},
                            {"max_ratio", num(x.max_ratio)},
                            {"arg_k", x.arg_k},
                            {"arg_n", x.arg_n},
                            {"fitted_C", num(x.fitted_C)},
                            {"fitted_C_prime", num(x.fitted_C_prime)},
                            {"max_ratio_constrained", num(x.max_ratio_constrained)},
                            {"arg_k_constrained", x.arg_k_constrained},
                            {"arg_n_constrained", x.arg_n_constrained}});
    return json{{"max_ratio", num(r.max_ratio)}, {"arg_T", r.arg_T},   {"arg_k", r.arg_k},
                {"arg_n", r.arg_n},             {"interior", r.interior},
                {"max_ratio_constrained", num(r.max_ratio_constrained)}, {"rows", rows}};
}

json to_json(const ExperimentReport& r) {
    json bands = json::array();
    for (const auto& b : r.bands)
        bands.push_back(json{{"lo", num(b.lo)}, {"hi", num(b.hi)}, {"empirical", num(b.empirical)},
                             {"normal", num(b.normal)}});
    json windows = json::array();
    for (const auto& w : r.windows)
        windows.push_back(json{{"eps", w.eps}, {"measured", num(w.measured)}, {"exact", num(w.exact)},
                               {"srw_contrast", w.srw_contrast >= 0.0 ? num(w.srw_contrast) : json(nullptr)}});
    json crit = json::array();
    for (const auto& c : r.criteria)
        crit.push_back(json{{"name", c.name}, {"statistic", num(c.statistic)}, {"threshold", c.threshold},
                            {"verdict", c.pass ? "pass" : "fail"}});
    json ratios = json::array();
    for (double x : r.m_ratios) ratios.push_back(num(x));
    json tails = json::array();
    for (double x : r.tail_fraction) tails.push_back(num(x));
    return json{{"point", to_json(r.point)},
                {"classification", to_json(r.classification)},
                {"prediction", to_json(r.prediction)},
                {"model", json{{"T", r.T}, {"delta", num(r.delta)}, {"phi", num(r.phi)}, {"log_z", num(r.log_z)},
                               {"mean_tau", num(r.mean_tau)}, {"switch_prob", num(r.switch_prob)}}},
                {"n_samples", r.n_samples},
                {"seed", r.seed},
                {"cost_estimate", num(r.cost_estimate)},
                {"endpoint", json{{"v_N", num(r.v_N)}, {"mean", num(r.mean_x)}, {"variance", num(r.var_x)},
                                  {"tail_fraction", tails}, {"bands", bands}, {"band_C", num(r.band_C)}}},
                {"last_contact", json{{"mean_over_N", num(r.mean_last_over_N)},
                                      {"frac_in_nu_M_window", num(r.frac_last_in_window)},
                                      {"frac_below_M", num(r.frac_last_below_M)},
                                      {"exact_below_M", num(r.exact_last_below_M)},
                                      {"frac_visited_other", num(r.frac_visited_other)}}},
                {"switches", json{{"histogram", r.m_histogram}, {"ratios", ratios}, {"theta_fit", num(r.theta_fit)}}},
                {"windows", windows},
                {"free_walk", json{{"abs_z_minus_1", num(r.abs_z_minus_1)}, {"mean_L", num(r.mean_L)},
                                   {"mean_L_srw", num(r.mean_L_srw)}}},
                {"criteria", crit}};
}

void write_criteria_csv(std::ostream& os, const ExperimentReport& r) {
    os << "name,statistic,threshold,verdict\n";
    for (const auto& c : r.criteria)
        os << c.name << ',' << fmt_double(c.statistic) << ',' << c.threshold << ',' << (c.pass ? "pass" : "fail")
           << '\n';
}

} // namespace polypin
