/// polypin: command-line front end for the interface-pinning toolkit.
///
/// Every run is fully described by a RunConfig. Values come from, in increasing priority,
/// the POLYPIN_THREADS environment variable, a --config file, and explicit flags.

#include "polypin/errors.hpp"
#include "polypin/free_energy.hpp"
#include "polypin/json_io.hpp"
#include "polypin/polymer.hpp"
#include "polypin/regime.hpp"
#include "polypin/renewal.hpp"
#include "polypin/report_io.hpp"
#include "polypin/run_config.hpp"
#include "polypin/srw_kernel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace polypin;
using json = nlohmann::ordered_json;

constexpr int kExitParameter = 2;
constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 3;
constexpr long kMaxDefaultHorizon = 2'000'000;

/// Writes to --out atomically, or to stdout when no path is given.
void emit(const RunConfig& cfg, const std::function<void(std::ostream&)>& body) {
    if (cfg.out.empty()) {
        body(std::cout);
        std::cout.flush();
    } else {
        write_atomically(cfg.out, body);
    }
}

void emit_json(const RunConfig& cfg, const json& j) {
    emit(cfg, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

bool has_point(const RunConfig& c) { return !c.a.empty() || !c.b.empty(); }

ScalingPoint point_of(const RunConfig& c) {
    if (c.a.empty() || c.b.empty()) throw ParameterError("both --a and --b are required");
    ScalingPoint p{Exponent::parse(c.a), Exponent::parse(c.b), c.beta, c.N};
    p.validate();
    return p;
}

/// Model parameters from either a scaling point (--a/--b/--beta/--n) or explicit --t/--delta.
ModelParams params_of(const RunConfig& c) {
    if (has_point(c)) {
        if (c.N <= 0) throw ParameterError("a scaling point needs --n");
        return point_of(c).params();
    }
    if (c.T <= 0) throw ParameterError("give either --t and --delta or a scaling point --a --b --n");
    ModelParams p{c.T, c.delta};
    p.validate();
    return p;
}

long even_ceil(double x) {
    const auto n = static_cast<long>(std::ceil(x));
    return n + (n % 2 != 0 ? 1 : 0);
}

std::string csv_header_and_row(const std::vector<std::pair<std::string, std::string>>& cells) {
    std::string head, row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            head += ',';
            row += ',';
        }
        head += cells[i].first;
        row += cells[i].second;
    }
    return head + '\n' + row + '\n';
}

// ---------------------------------------------------------------- subcommands

void cmd_phase(const RunConfig& cfg) {
    if (cfg.a.empty() || cfg.b.empty()) throw ParameterError("both --a and --b are required");
    // Classification is defined on all a > 0, b >= 0; predictions need a full scaling point.
    ScalingPoint pt{Exponent::parse(cfg.a), Exponent::parse(cfg.b), cfg.beta, cfg.N};
    if (!(pt.a.value() > 0.0)) throw ParameterError("exponent a must be > 0");
    if (!(pt.b.value() >= 0.0)) throw ParameterError("exponent b must be >= 0");
    const Classification c = classify(pt.a, pt.b);
    std::optional<Prediction> pred;
    if (cfg.N > 0) {
        pt.validate();
        pred = predicted_orders(pt);
    }

    if (cfg.format == "csv") {
        std::vector<std::pair<std::string, std::string>> cells{
            {"a", pt.a.str()}, {"b", pt.b.str()}, {"label", to_string(c.label)}, {"sub_tag", c.sub_tag}};
        if (pred) {
            cells.emplace_back("N", std::to_string(pt.N));
            cells.emplace_back("endpoint_scale", fmt_double(pred->endpoint_scale));
            cells.emplace_back("last_contact_scale", fmt_double(pred->last_contact_scale));
            cells.emplace_back("contacts_scale", fmt_double(pred->contacts_scale));
            cells.emplace_back("contacts_renewal", fmt_double(pred->contacts_renewal));
            cells.emplace_back("constant", pred->constant ? fmt_double(*pred->constant) : "");
        }
        emit(cfg, [&](std::ostream& os) { os << csv_header_and_row(cells); });
        return;
    }
    json j{{"command", "phase"}, {"a", pt.a.str()}, {"b", pt.b.str()}, {"classification", to_json(c)}};
    if (pred) {
        j["point"] = to_json(pt);
        j["prediction"] = to_json(*pred);
    }
    emit_json(cfg, j);
}

void cmd_free_energy(const RunConfig& cfg) {
    const ModelParams mp = params_of(cfg);
    const FreeEnergyResult fe = free_energy(mp);
    std::optional<RenewalMoments> mom;
    if (mp.delta > 0.0) mom = renewal_moments(mp, MomentMethod::closed_form);
    std::optional<AsymptoticPhi> asym;
    if (has_point(cfg)) asym = asymptotic_phi(point_of(cfg));

    if (cfg.format == "csv") {
        std::vector<std::pair<std::string, std::string>> cells{
            {"T", std::to_string(mp.T)},      {"delta", fmt_double(mp.delta)},
            {"phi", fmt_double(fe.phi)},      {"gamma", fmt_double(fe.gamma)},
            {"g", fmt_double(fe.g)},          {"residual", fmt_double(fe.residual)},
            {"mean_tau", mom ? fmt_double(mom->mean_tau) : ""},
            {"second_tau", mom ? fmt_double(mom->second_tau) : ""},
            {"switch_prob", mom ? fmt_double(mom->switch_prob) : ""}};
        emit(cfg, [&](std::ostream& os) { os << csv_header_and_row(cells); });
        return;
    }
    json j{{"command", "free-energy"}, {"T", mp.T}, {"delta", num(mp.delta)}, {"free_energy", to_json(fe)}};
    j["moments"] = mom ? to_json(*mom) : json(nullptr);
    if (asym)
        j["asymptotic"] = json{{"branch", to_string(asym->branch)},
                               {"approx", num(asym->approx)},
                               {"exact", num(asym->exact)},
                               {"rel_error", num(asym->rel_error)}};
    else
        j["asymptotic"] = nullptr;
    emit_json(cfg, j);
}

void cmd_renewal(const RunConfig& cfg) {
    const ModelParams mp = params_of(cfg);
    long H = cfg.horizon;
    if (H <= 0) {
        // Enough to reach the stationary check at 20 E[tau_1] and the last profile range at 2 T^2.
        const double mean = mp.delta > 0.0 ? renewal_moments(mp, MomentMethod::closed_form).mean_tau
                                           : static_cast<double>(mp.T);
        const double want = std::max(2.0 * static_cast<double>(mp.T) * static_cast<double>(mp.T), 40.0 * mean);
        H = std::min(kMaxDefaultHorizon, std::max(2L, even_ceil(want)));
    }
    if (H % 2 != 0) throw ParameterError("--horizon must be even");
    const RenewalModel model = build_renewal(mp, H);
    const std::vector<double> u = mass_function(model);

    if (cfg.dump) {
        emit(cfg, [&](std::ostream& os) { write_renewal_csv(os, model, u); });
        return;
    }
    const ProfileReport prof = regime_profile_report(model, u);
    if (cfg.format == "csv") {
        emit(cfg, [&](std::ostream& os) {
            os << "name,n_lo,n_hi,covered,partial,sup,inf,band\n";
            for (const auto& r : prof.ranges)
                os << r.name << ',' << r.n_lo << ',' << r.n_hi << ',' << (r.covered ? 1 : 0) << ','
                   << (r.partial ? 1 : 0) << ',' << fmt_double(r.sup) << ',' << fmt_double(r.inf) << ','
                   << fmt_double(r.band()) << '\n';
        });
        return;
    }
    json j{{"command", "renewal"},
           {"T", mp.T},
           {"delta", num(mp.delta)},
           {"horizon", H},
           {"phi", num(model.fe.phi)},
           {"support", model.support},
           {"truncated_mass", num(model.truncated_mass)},
           {"normalization_defect", num(model.normalization_defect)},
           {"profile", to_json(prof)}};
    emit_json(cfg, j);
}

void write_paths(const RunConfig& cfg, const PolymerInstance& inst, const std::string& path, long count) {
    if (inst.N > 10000) throw ParameterError("trajectory export is limited to N <= 10000");
    const long n = std::min<long>(count, static_cast<long>(cfg.samples));
    write_atomically(path, [&](std::ostream& os) {
        os << "sample_id,t,S\n";
        for (long i = 0; i < n; ++i) {
            // Same stream as sample_batch, so the exported path ends at the reported S_N.
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
            const ContactSkeleton sk = sample_skeleton(inst, rng);
            const TrajectoryStats st = sample_endpoint(inst, sk, rng);
            const std::vector<long> heights = fill_trajectory(inst, sk, st.S_N, rng);
            for (std::size_t t = 0; t < heights.size(); ++t) os << i << ',' << t << ',' << heights[t] << '\n';
        }
    });
}

void cmd_sample(const RunConfig& cfg, const std::string& paths_file, long n_paths) {
    const ModelParams mp = params_of(cfg);
    const long N = cfg.N;
    if (N <= 0) throw ParameterError("--n is required");
    if (N > kMaxN || mp.T > kMaxT) throw InfeasibleError("sample outside the guardrails N <= 2e6, T <= 2000", 0.0);
    if (cfg.samples == 0 || cfg.samples > kMaxSamples) throw ParameterError("--samples must lie in [1, 1e5]");
    const PolymerInstance inst = make_instance(mp, N);
    const auto samples = sample_batch(inst, cfg.samples, cfg.seed, cfg.threads);
    if (!paths_file.empty()) write_paths(cfg, inst, paths_file, n_paths);

    if (cfg.format == "csv") {
        emit(cfg, [&](std::ostream& os) { write_samples_csv(os, samples); });
        return;
    }
    json rows = json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        rows.push_back(json{{"sample_id", i},  {"S_N", s.S_N}, {"tau_last", s.tau_last},
                            {"L", s.L},        {"m", s.m},     {"visited_other", s.visited_other_interface}});
    }
    json j{{"command", "sample"}, {"T", mp.T},       {"delta", num(mp.delta)}, {"N", N},
           {"seed", cfg.seed},    {"log_z", num(inst.log_z)}, {"samples", rows}};
    emit_json(cfg, j);
}

void cmd_experiment(const RunConfig& cfg) {
    ExperimentConfig ec;
    if (cfg.N <= 0) throw ParameterError("--n is required");
    ec.point = point_of(cfg);
    ec.n_samples = cfg.samples;
    ec.seed = cfg.seed;
    ec.threads = cfg.threads;
    ec.criteria = cfg.criteria;
    const ExperimentReport rep = run_experiment(ec);
    if (cfg.format == "csv") {
        emit(cfg, [&](std::ostream& os) { write_criteria_csv(os, rep); });
        return;
    }
    json j{{"command", "experiment"}};
    const json body = to_json(rep);
    for (const auto& [k, v] : body.items()) j[k] = v;
    emit_json(cfg, j);
}

void cmd_verify_bounds(const RunConfig& cfg, long constrained_span) {
    if (cfg.t_values.empty()) throw ParameterError("--t needs at least one even T >= 4 (comma separated)");
    BoundGrid grid;
    grid.T_values = cfg.t_values;
    grid.k_max = cfg.k_max;
    grid.constrained_span = constrained_span;
    grid.threads = cfg.threads;
    const BoundReport rep = verify_hitting_bounds(grid);
    if (cfg.format == "csv") {
        emit(cfg, [&](std::ostream& os) {
            os << "T,max_ratio,arg_k,arg_n,fitted_C,fitted_C_prime,max_ratio_constrained\n";
            for (const auto& r : rep.rows)
                os << r.T << ',' << fmt_double(r.max_ratio) << ',' << r.arg_k << ',' << r.arg_n << ','
                   << fmt_double(r.fitted_C) << ',' << fmt_double(r.fitted_C_prime) << ','
                   << fmt_double(r.max_ratio_constrained) << '\n';
        });
        return;
    }
    json j{{"command", "verify-bounds"}, {"k_max", cfg.k_max}};
    const json body = to_json(rep);
    for (const auto& [k, v] : body.items()) j[k] = v;
    emit_json(cfg, j);
}

/// Finds --config before the real parse so that file values act as defaults for the flags.
std::optional<std::string> prescan_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string s = argv[i];
        if (s == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (s.rfind("--config=", 0) == 0) return s.substr(9);
    }
    return std::nullopt;
}

int run(int argc, char** argv) {
    RunConfig cfg;
    if (const char* env = std::getenv("POLYPIN_THREADS")) {
        try {
            cfg.threads = std::stoi(env);
        } catch (const std::exception&) {
            throw ParameterError("POLYPIN_THREADS must be an integer");
        }
    }
    if (auto path = prescan_config(argc, argv)) cfg = load_run_config(*path);

    CLI::App app{"Directed polymer with repulsive interfaces: exact laws, sampling and regime experiments"};
    app.set_version_flag("--version", "polypin 1.0");
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path, save_config;
    app.add_option("--config", config_path, "Load a RunConfig JSON file (flags override it)");
    app.add_option("--save-config", save_config, "Write the effective RunConfig JSON and continue");
    app.add_option("--seed", cfg.seed, "64-bit seed (default 0)");
    app.add_option("--threads", cfg.threads, "Worker threads (env POLYPIN_THREADS; default 1)")
        ->check(CLI::Range(1, 1024));
    app.add_option("--out", cfg.out, "Output file (written atomically); stdout when absent");
    app.add_option("--format", cfg.format, "Output format (default: csv for sample, json otherwise)")->check(CLI::IsMember({"csv", "json"}));

    auto add_point = [&](CLI::App* sub, bool required) {
        auto* a = sub->add_option("--a", cfg.a, "Exponent a of T_N (decimal or p/q)");
        auto* b = sub->add_option("--b", cfg.b, "Exponent b of delta_N (decimal or p/q)");
        if (required && cfg.a.empty()) a->required();
        if (required && cfg.b.empty()) b->required();
        sub->add_option("--beta", cfg.beta, "Prefactor of delta_N");
        sub->add_option("--n", cfg.N, "Polymer length N (even)");
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--t", cfg.T, "Interface spacing T (even)");
        sub->add_option("--delta", cfg.delta, "Repulsion strength delta >= 0");
    };

    auto* phase = app.add_subcommand("phase", "Classify (a, b) and predict observable scales");
    add_point(phase, true);

    auto* fe = app.add_subcommand("free-energy", "Free energy, angle gamma and renewal moments");
    add_point(fe, false);
    add_model(fe);

    auto* ren = app.add_subcommand("renewal", "Renewal law, mass function and profile report");
    add_point(ren, false);
    add_model(ren);
    ren->add_option("--horizon", cfg.horizon, "Even horizon (default: enough for the profile checks)");
    ren->add_flag("--dump", cfg.dump, "Emit the n,f,u table as CSV");

    std::string paths_file;
    long n_paths = 10;
    auto* smp = app.add_subcommand("sample", "Exact samples of (S_N, tau_last, L, m)");
    add_point(smp, false);
    add_model(smp);
    smp->add_option("--samples", cfg.samples, "Number of samples (<= 1e5)");
    smp->add_option("--paths", paths_file, "Also export full height paths as CSV (N <= 1e4)");
    smp->add_option("--n-paths", n_paths, "How many paths to export")->check(CLI::PositiveNumber);

    auto* exp = app.add_subcommand("experiment", "Monte-Carlo regime experiment with pass/fail criteria");
    add_point(exp, true);
    exp->add_option("--samples", cfg.samples, "Number of samples (<= 1e5)");
    exp->add_option("--criteria", cfg.criteria, "Restrict to these criterion names")->delimiter(',');

    long span = 4;
    auto* vb = app.add_subcommand("verify-bounds", "Ratio table for the k-fold hitting bounds");
    vb->add_option("--t", cfg.t_values, "Comma-separated list of even T")->delimiter(',');
    vb->add_option("--k-max", cfg.k_max, "Largest k")->check(CLI::Range(1, 200));
    vb->add_option("--constrained-span", span, "Constrained-part span in units of T (< 2 skips it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParameter;
    }

    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) cfg.command = sub->get_name();
    if (cfg.command.empty()) throw ParameterError("no subcommand given (and no command in --config)");
    if (cfg.format.empty()) cfg.format = cfg.command == "sample" ? "csv" : "json";
    if (cfg.format != "csv" && cfg.format != "json") throw ParameterError("format must be csv or json");
    if (cfg.threads < 1) throw ParameterError("threads must be >= 1");
    if (!save_config.empty()) save_run_config(save_config, cfg);

    if (cfg.command == "phase") cmd_phase(cfg);
    else if (cfg.command == "free-energy") cmd_free_energy(cfg);
    else if (cfg.command == "renewal") cmd_renewal(cfg);
    else if (cfg.command == "sample") cmd_sample(cfg, paths_file, n_paths);
    else if (cfg.command == "experiment") cmd_experiment(cfg);
    else if (cfg.command == "verify-bounds") cmd_verify_bounds(cfg, span);
    else throw ParameterError("unknown command '" + cfg.command + "'");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << " (estimated " << e.estimated_ops() << " operations)\n";
        return kExitInfeasible;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << " (boundary " << e.boundary() << ")\n";
        return kExitParameter;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
