// Copyright 2026 The retrocap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "retrocap/choi.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/estimators.hpp"
#include "retrocap/ladder.hpp"
#include "retrocap/protocols.hpp"

using namespace retrocap;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised after the output was written when the run violated an invariant.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Options shared by every command. Only `format` enters the embedded config.
struct Common {
    std::string out;
    std::string format;
    unsigned workers = 1;
    bool timing = false;
};

const std::set<std::string> kNotInConfig{"help", "out", "workers", "timing", "trace-out"};

json scalar_value(const std::string &s) {
    if (s == "true" || s == "false") {
        return s == "true";
    }
    if (!s.empty()) {
        std::size_t used = 0;
        try {
            long long i = std::stoll(s, &used);
            if (used == s.size()) {
                return i;
            }
            double d = std::stod(s, &used);
            if (used == s.size()) {
                return d;
            }
        } catch (const std::exception &) {
        }
    }
    return s;
}

std::vector<std::string> split_list(std::string s) {
    if (!s.empty() && (s.front() == '[' || s.front() == '{')) {
        s = s.substr(1, s.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// Every option of the subcommand with its effective value (given or default).
json run_config(const CLI::App *sub) {
    json options = json::object();
    for (const CLI::Option *opt : sub->get_options()) {
        std::string name = opt->get_single_name();
        if (kNotInConfig.count(name)) {
            continue;
        }
        if (opt->get_items_expected_max() == 0) {
            options[name] = opt->count() > 0;
        } else if (opt->get_items_expected_max() > 1) {
            std::vector<std::string> vals = opt->count() > 0 ? opt->results() : split_list(opt->get_default_str());
            json arr = json::array();
            for (const auto &v : vals) {
                arr.push_back(scalar_value(v));
            }
            options[name] = arr;
        } else if (opt->count() > 0) {
            options[name] = scalar_value(opt->results().front());
        } else if (!opt->get_default_str().empty()) {
            options[name] = scalar_value(opt->get_default_str());
        }
    }
    return {{"command", sub->get_name()}, {"options", options}};
}

std::string arg_string(const json &v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

/// Command line reproducing an embedded config.
std::vector<std::string> config_args(const json &config) {
    std::vector<std::string> args{config.at("command").get<std::string>()};
    for (const auto &[name, v] : config.at("options").items()) {
        if (v.is_boolean()) {
            if (v.get<bool>()) {
                args.push_back("--" + name);
            }
        } else if (v.is_array()) {
            if (v.empty()) {
                continue;
            }
            args.push_back("--" + name);
            for (const auto &x : v) {
                args.push_back(arg_string(x));
            }
        } else {
            args.push_back("--" + name);
            args.push_back(arg_string(v));
        }
    }
    return args;
}

void write_output(const Common &common, const std::string &text) {
    if (common.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(common.out, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + common.out + "'");
    }
    f << text;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json estimate_json(const Estimate &e) {
    return {{"estimate", e.mean}, {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

json ledger_json(const ResourceLedger &l) {
    return {
        {"channel_uses", l.channel_uses},
        {"forward_messages", l.forward_messages},
        {"backward_messages", l.backward_messages},
        {"forward_bits", l.forward_bits},
        {"backward_bits", l.backward_bits},
        {"ebits_consumed", l.ebits_consumed},
        {"ebits_produced", l.ebits_produced},
        {"qubits_transmitted", l.qubits_transmitted},
        {"cbits_transmitted", l.cbits_transmitted},
    };
}

json trace_json(const ProtocolTrace &t) {
    json events = json::array();
    for (const auto &e : t.events) {
        events.push_back({{"kind", to_string(e.kind)}, {"party", e.party}, {"detail", e.detail}});
    }
    json messages = json::array();
    for (const auto &m : t.messages) {
        messages.push_back(
            {{"direction", to_string(m.direction)}, {"label", m.label}, {"payload", m.payload}, {"sources", m.sources}});
    }
    json echoes = json::array();
    for (const auto &e : t.echoes) {
        echoes.push_back({{"hidden", e.hidden}, {"echoed", e.echoed}});
    }
    return {
        {"trial", t.trial},
        {"events", events},
        {"messages", messages},
        {"echoes", echoes},
        {"fidelity", t.fidelity},
        {"bit_errors", t.bit_errors},
        {"ledger", ledger_json(t.ledger)},
    };
}

void write_traces(const std::string &path, const std::vector<ProtocolTrace> &traces) {
    if (path.empty()) {
        return;
    }
    json arr = json::array();
    for (const auto &t : traces) {
        arr.push_back(trace_json(t));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + path + "'");
    }
    f << json{{"schema_version", kSchemaVersion}, {"traces", arr}}.dump(2) << "\n";
}

std::string retro_label(const RetroChannelSpec &spec) {
    return std::string(spec.variant == RetroVariant::dephased ? "dephased-retro-" : "retro-") + std::to_string(spec.c) + "-" +
           std::to_string(spec.d);
}

void check_dims(std::size_t c, std::size_t d) {
    if (c < 2 || d < 2 || c > 64 || d > 64) {
        throw UsageError("--c and --d must lie in [2, 64]");
    }
}

RetroVariant parse_variant(const std::string &s) {
    if (s == "standard") {
        return RetroVariant::standard;
    }
    if (s == "dephased") {
        return RetroVariant::dephased;
    }
    throw UsageError("--variant must be standard or dephased");
}

SimplifiedChannelSpec simplified_spec(const std::vector<std::size_t> &trigger) {
    if (trigger.size() != 2 || trigger[0] > 1 || trigger[1] > 1) {
        throw UsageError("--trigger takes two outcomes in {0, 1}");
    }
    SimplifiedChannelSpec spec;
    spec.trigger = {trigger[0], trigger[1]};
    return spec;
}

/// A command: registers its options, then runs and returns the output text.
struct Command {
    CLI::App *app = nullptr;
    std::function<std::string(const Common &, json &)> run;
};

void add_common(CLI::App *sub, Common &common, bool stochastic) {
    sub->add_option("--out", common.out, "Write the output to this file instead of stdout");
    sub->add_option("--format", common.format, "Output format: json or csv (command default when omitted)");
    sub->add_flag("--timing", common.timing, "Add wall_time_ms to JSON output");
    if (stochastic) {
        sub->add_option("--workers", common.workers, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    }
}

std::string json_text(json j) {
    return j.dump(2) + "\n";
}

std::string format_or(const Common &c, const std::string &fallback, std::initializer_list<const char *> allowed) {
    std::string f = c.format.empty() ? fallback : c.format;
    for (const char *a : allowed) {
        if (f == a) {
            return f;
        }
    }
    throw UsageError("unsupported --format '" + f + "' for this command");
}

Command estimator_command(CLI::App &app, Common &common, bool coherent) {
    struct Args {
        std::size_t c = 2, d = 2;
        std::uint64_t samples = 1000000, seed = 1, batch_size = 10000;
        std::string variant = "standard";
        bool identity = false;
    };
    auto args = std::make_shared<Args>();
    CLI::App *sub = coherent ? app.add_subcommand("coherent", "Monte Carlo one-shot coherent information of R_{c,d}")
                             : app.add_subcommand("holevo", "Monte Carlo one-shot Holevo quantity of R_{c,d}");
    sub->add_option("--c", args->c, "Control dimension");
    sub->add_option("--d", args->d, "Data dimension");
    sub->add_option("--samples", args->samples, "Monte Carlo samples (>= 1000)");
    sub->add_option("--seed", args->seed, "Random seed");
    sub->add_option("--batch-size", args->batch_size, "Samples per batch of the convergence trace")->check(CLI::PositiveNumber);
    sub->add_option("--variant", args->variant, "standard or dephased");
    sub->add_flag("--identity-unitaries", args->identity, "Force every unitary to the identity");
    add_common(sub, common, true);
    return {sub, [args, coherent](const Common &c, json &out) {
                check_dims(args->c, args->d);
                RetroChannelSpec spec = parse_variant(args->variant) == RetroVariant::dephased
                                            ? RetroChannelSpec::dephased(args->c, args->d)
                                            : RetroChannelSpec::standard(args->c, args->d);
                if (args->identity) {
                    spec = spec.with_identity_unitaries();
                }
                std::string format = format_or(c, "json", {"json", "csv"});
                McOptions mc;
                mc.samples = args->samples;
                mc.seed = args->seed;
                mc.workers = c.workers;
                mc.batch_size = args->batch_size;
                Estimate e = coherent ? coherent_info_retro_mc(spec, mc) : holevo_retro_mc(spec, mc);
                if (format == "csv") {
                    std::string s = "batch_index,batch_mean\n";
                    for (std::size_t k = 0; k < e.batch_means.size(); k++) {
                        s += std::to_string(k) + "," + fmt_double(e.batch_means[k]) + "\n";
                    }
                    return s;
                }
                CapacityReport report{retro_label(spec), {}};
                report.add(coherent ? CapacityKind::I_c : CapacityKind::C_H, e, "Monte Carlo over Haar flags");
                out.update(estimate_json(e));
                out["quantity"] = e.quantity;
                out["channel"] = report.channel;
                out["params"] = {
                    {"c", args->c}, {"d", args->d}, {"variant", args->variant}, {"identity_unitaries", args->identity}};
                out["batches"] = e.batch_means.size();
                out["report"] = to_json(report);
                return std::string();
            }};
}

Command protocol_command(CLI::App &app, Common &common) {
    struct Args {
        std::string name;
        std::size_t d = 2, c = 0;
        std::uint64_t trials = 1000, seed = 1;
        bool identity = false, no_strict = false;
        std::string echo = "conjugate", correction = "conjugate";
        std::size_t keep_traces = 1, resolution = 100;
        std::vector<unsigned> messages{0, 1, 2, 3};
        std::vector<std::size_t> trigger{1, 1};
        std::string trace_out;
    };
    auto a = std::make_shared<Args>();
    CLI::App *sub = app.add_subcommand("protocol", "Simulate an echo-assisted protocol");
    sub->add_option("--name", a->name, "fig2, fig3, fig4, qubit-2s-back, sd-3s-back, dephased-c2, erasure-mes or flagged-opt")
        ->required()
        ->check(CLI::IsMember(
            {"fig2", "fig3", "fig4", "qubit-2s-back", "sd-3s-back", "dephased-c2", "erasure-mes", "flagged-opt"}));
    sub->add_option("--d", a->d, "Data dimension");
    sub->add_option("--c", a->c, "Control dimension (0: same as --d)");
    sub->add_option("--trials", a->trials, "Trials (per message for sd-3s-back; simulation trials for flagged-opt)");
    sub->add_option("--seed", a->seed, "Random seed");
    sub->add_flag("--identity-unitaries", a->identity, "Force every unitary to the identity");
    sub->add_option("--echo", a->echo, "Echo measurement basis: conjugate or direct")->check(CLI::IsMember({"conjugate", "direct"}));
    sub->add_option("--correction", a->correction, "fig3 correction: conjugate or transpose")
        ->check(CLI::IsMember({"conjugate", "transpose"}));
    sub->add_flag("--no-strict", a->no_strict, "Report failing trials instead of stopping at the first");
    sub->add_option("--keep-traces", a->keep_traces, "Leading trial traces kept for --trace-out");
    sub->add_option("--messages", a->messages, "sd-3s-back messages (0-3)")->delimiter(',');
    sub->add_option("--trigger", a->trigger, "Simplified channel trigger outcome per basis")->delimiter(',');
    sub->add_option("--resolution", a->resolution, "flagged-opt grid points per axis");
    sub->add_option("--trace-out", a->trace_out, "Write kept traces as a JSON event log");
    add_common(sub, common, true);
    return {sub, [a, sub](const Common &c, json &out) {
                format_or(c, "json", {"json"});
                const bool qubit_only = a->name == "sd-3s-back" || a->name == "dephased-c2" || a->name == "erasure-mes" ||
                                        a->name == "flagged-opt";
                if (qubit_only && ((sub->count("--d") && a->d != 2) || (sub->count("--c") && a->c != 0 && a->c != 2))) {
                    throw UsageError("protocol " + a->name + " is defined for qubits only");
                }
                check_dims(a->c == 0 ? a->d : a->c, a->d);
                if (a->trials == 0) {
                    throw UsageError("--trials must be positive");
                }
                ProtocolOptions o;
                o.d = a->d;
                o.c = a->c;
                o.trials = a->trials;
                o.seed = a->seed;
                o.workers = c.workers;
                o.identity_unitaries = a->identity;
                o.echo = a->echo == "direct" ? EchoBasis::direct : EchoBasis::conjugate;
                o.correction = a->correction == "transpose" ? CorrectionConvention::transpose : CorrectionConvention::conjugate;
                o.strict = !a->no_strict;
                o.keep_traces = a->keep_traces;
                o.messages = a->messages;
                out["quantity"] = "protocol";
                out["protocol"] = a->name;
                out["seed"] = a->seed;

                if (a->name == "flagged-opt") {
                    SimplifiedChannelSpec spec = simplified_spec(a->trigger);
                    FlaggedOptimum f = optimize_flagged_rate(spec, a->resolution, a->trials, a->seed, c.workers);
                    out["channel"] = "simplified";
                    out["params"] = {{"trigger", a->trigger}, {"resolution", a->resolution}};
                    out["rate"] = f.rate;
                    out["best"] = {{"a", f.best.a}, {"alpha", f.best.alpha}, {"schmidt_weight", std::max(f.best.a, 1 - f.best.a)}};
                    out["grid"] = {
                        {"points", f.grid_points}, {"a", f.grid_best.a}, {"alpha", f.grid_best.alpha}, {"rate", f.grid_rate}};
                    out["simulation"] = estimate_json(f.simulation.rate);
                    out["simulation"]["misses"] = f.simulation.misses;
                    out["trials"] = a->trials;
                    bool agrees = std::abs(f.simulation.rate.mean - f.rate) <= 3 * f.simulation.rate.std_error;
                    out["audit"] = {{"misses", f.simulation.misses}, {"simulation_agrees", agrees}};
                    if (f.simulation.misses > 0 || !agrees) {
                        throw InvariantViolation("flagged simulation disagrees with the closed form or missed a depolarization");
                    }
                    return std::string();
                }

                ProtocolResult r;
                json extra = json::object();
                bool failed = false;
                if (a->name == "fig2") {
                    r = run_fig2(o);
                } else if (a->name == "fig3") {
                    r = run_fig3(o);
                } else if (a->name == "fig4") {
                    r = run_fig4(o);
                } else if (a->name == "qubit-2s-back") {
                    r = compose_qubit_2S_back(o);
                } else if (a->name == "sd-3s-back") {
                    SuperdenseResult s = compose_2cbits_3S_back(o);
                    extra["errors_by_message"] = s.errors_by_message;
                    extra["trials_by_message"] = s.trials_by_message;
                    r = std::move(s);
                } else if (a->name == "dephased-c2") {
                    DephasedC2Result s = run_dephased_c2(o);
                    extra["withheld_errors"] = s.withheld_errors;
                    r = std::move(s);
                } else {
                    ErasureResult s = erasure_conversion_mes(simplified_spec(a->trigger), o);
                    extra["flagged"] = s.flagged;
                    extra["misses"] = s.misses;
                    extra["false_flags"] = s.false_flags;
                    extra["erasure_fraction"] = s.erasure_fraction;
                    extra["erasure_stderr"] = s.erasure_stderr;
                    extra["q2_lower_bound"] = s.q2_lower_bound;
                    failed = s.misses > 0;
                    r = std::move(s);
                }
                write_traces(a->trace_out, r.traces);
                if (a->name == "erasure-mes") {
                    out["channel"] = "simplified";
                    out["params"] = {{"trigger", a->trigger}};
                } else {
                    RetroChannelSpec spec =
                        protocol_channel(o, a->name == "dephased-c2" ? RetroVariant::dephased : RetroVariant::standard);
                    if (a->name == "sd-3s-back" || a->name == "dephased-c2") {
                        spec = protocol_channel(
                            ProtocolOptions{.d = 2, .c = 2, .identity_unitaries = a->identity},
                            a->name == "dephased-c2" ? RetroVariant::dephased : RetroVariant::standard);
                    }
                    out["channel"] = retro_label(spec);
                    out["params"] = {
                        {"d", spec.d},
                        {"c", spec.c},
                        {"identity_unitaries", a->identity},
                        {"echo", a->echo},
                        {"correction", a->correction}};
                }
                out["trials"] = r.trials;
                out["fidelity"] = {{"min", r.min_fidelity}, {"mean", r.mean_fidelity}, {"failures", r.fidelity_failures}};
                out["ledger"] = ledger_json(r.ledger);
                out["audit"] = {
                    {"echo_checks", r.echo_checks},
                    {"echo_mismatches", r.echo_mismatches},
                    {"independence_ok", r.independence_ok},
                    {"bits_sent", r.bits_sent},
                    {"bit_errors", r.bit_errors}};
                out.update(extra);
                failed = failed || r.fidelity_failures > 0 || r.echo_mismatches > 0 || r.bit_errors > 0 || !r.independence_ok;
                if (failed) {
                    throw InvariantViolation("protocol invariants violated (see audit)");
                }
                return std::string();
            }};
}

Command choi_command(CLI::App &app, Common &common) {
    struct Args {
        std::string channel = "dephased-retro";
        std::string bases = "ZX", unitaries = "pauli", check = "ppt";
        double p = 0.5, tol = 1e-10;
    };
    auto a = std::make_shared<Args>();
    CLI::App *sub = app.add_subcommand("choi", "Choi state of a channel and its PPT test");
    sub->add_option(
           "--channel",
           a->channel,
           "identity-qubit, classical-bit, depolarizing, erasure, retro or dephased-retro (qubit R_{2,2})")
        ->check(CLI::IsMember({"identity-qubit", "classical-bit", "depolarizing", "erasure", "retro", "dephased-retro"}));
    sub->add_option("--bases", a->bases, "Basis ensemble of the retro channels: ZX or haar");
    sub->add_option("--unitaries", a->unitaries, "Unitary ensemble of the retro channels: pauli or haar");
    sub->add_option("--p", a->p, "Parameter of depolarizing / erasure");
    sub->add_option("--check", a->check, "ppt or none")->check(CLI::IsMember({"ppt", "none"}));
    sub->add_option("--tol", a->tol, "PPT tolerance");
    add_common(sub, common, false);
    return {sub, [a](const Common &c, json &out) {
                format_or(c, "json", {"json"});
                ChoiMatrix choi;
                json params = json::object();
                const bool retro = a->channel == "retro" || a->channel == "dephased-retro";
                if (retro) {
                    if (a->bases == "haar" || a->unitaries == "haar") {
                        throw UsageError(
                            "Choi states need finite flag ensembles; use --bases ZX --unitaries pauli, or the holevo / "
                            "coherent Monte Carlo commands for Haar flags");
                    }
                    if (a->bases != "ZX" || a->unitaries != "pauli") {
                        throw UsageError("supported discretization: --bases ZX --unitaries pauli");
                    }
                    choi = choi_matrix(RetroChannelSpec::pauli_discretization(
                        a->channel == "dephased-retro" ? RetroVariant::dephased : RetroVariant::standard));
                    params = {{"c", 2}, {"d", 2}, {"bases", a->bases}, {"unitaries", a->unitaries}};
                } else {
                    if (a->p < 0 || a->p > 1) {
                        throw UsageError("--p must lie in [0, 1]");
                    }
                    KrausChannel ch = a->channel == "identity-qubit"  ? identity_qudit(2)
                                      : a->channel == "classical-bit" ? classical_bit()
                                      : a->channel == "depolarizing"  ? depolarizing(a->p)
                                                                      : erasure(a->p);
                    if (a->channel == "depolarizing" || a->channel == "erasure") {
                        params["p"] = a->p;
                    }
                    choi = choi_matrix(ch);
                }
                out["quantity"] = "choi";
                out["channel"] = a->channel;
                out["params"] = params;
                out["input_dim"] = choi.input_dim;
                out["output_dim"] = choi.output_dim;
                out["flag_count"] = choi.flag_count();
                out["trace"] = choi.trace();
                if (a->check == "ppt") {
                    PptResult p = is_ppt(choi, a->tol);
                    out["ppt"] = p.ppt;
                    out["min_eigenvalue"] = p.min_eigenvalue;
                    out["tolerance"] = a->tol;
                }
                return std::string();
            }};
}

Command trend_command(CLI::App &app, Common &common) {
    struct Args {
        std::vector<std::size_t> dims{2, 4, 8, 16};
        std::uint64_t samples = 100000, seed = 1;
    };
    auto a = std::make_shared<Args>();
    CLI::App *sub = app.add_subcommand("trend", "C_H estimates of R_{c,d} with c = d ceil(log2 d)^3");
    sub->add_option("--dims", a->dims, "Ascending data dimensions in [2, 32]")->delimiter(',');
    sub->add_option("--samples", a->samples, "Monte Carlo samples per dimension");
    sub->add_option("--seed", a->seed, "Random seed (shared by every row)");
    add_common(sub, common, true);
    return {sub, [a](const Common &c, json &out) {
                std::string format = format_or(c, "csv", {"csv", "json"});
                for (std::size_t k = 0; k < a->dims.size(); k++) {
                    if (a->dims[k] < 2 || a->dims[k] > 32 || (k > 0 && a->dims[k] <= a->dims[k - 1])) {
                        throw UsageError("--dims must be strictly ascending within [2, 32]");
                    }
                }
                auto rows = trend_scan(a->dims, a->samples, a->seed, c.workers);
                if (format == "csv") {
                    std::string s = "d,c,estimate,stderr\n";
                    for (const auto &r : rows) {
                        s += std::to_string(r.d) + "," + std::to_string(r.c) + "," + fmt_double(r.estimate.mean) + "," +
                             fmt_double(r.estimate.std_error) + "\n";
                    }
                    return s;
                }
                json arr = json::array();
                bool decreasing = true;
                for (std::size_t k = 0; k < rows.size(); k++) {
                    arr.push_back({{"d", rows[k].d}, {"c", rows[k].c}, {"estimate", rows[k].estimate.mean},
                                   {"stderr", rows[k].estimate.std_error}});
                    if (k > 0) {
                        double gap = rows[k - 1].estimate.mean - rows[k].estimate.mean;
                        decreasing = decreasing && gap > 3 * std::hypot(rows[k - 1].estimate.std_error, rows[k].estimate.std_error);
                    }
                }
                out["quantity"] = "C_H-trend";
                out["rows"] = arr;
                out["samples"] = a->samples;
                out["seed"] = a->seed;
                out["strictly_decreasing_3sigma"] = decreasing;
                return std::string();
            }};
}

CapacityReport read_report(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw UsageError("cannot read '" + path + "'");
    }
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception &e) {
        throw UsageError("'" + path + "' is not JSON: " + e.what());
    }
    try {
        return capacity_report_from_json(j.contains("report") ? j.at("report") : j);
    } catch (const DomainError &e) {
        throw UsageError("'" + path + "' is not a capacity report: " + e.what());
    }
}

Command ladder_command(CLI::App &app, Common &common) {
    struct Args {
        std::vector<std::string> reports;
        double sigmas = 3;
    };
    auto a = std::make_shared<Args>();
    CLI::App *sub = app.add_subcommand("ladder", "Capacity ladder, checked against capacity reports");
    sub->add_option("--reports", a->reports, "Report files written by the report, holevo or coherent commands");
    sub->add_option("--sigmas", a->sigmas, "Monte Carlo slack in joint standard errors");
    add_common(sub, common, false);
    return {sub, [a](const Common &c, json &out) {
                format_or(c, "json", {"json"});
                std::vector<CapacityReport> reports;
                for (const auto &p : a->reports) {
                    reports.push_back(read_report(p));
                }
                TolerancePolicy policy;
                policy.mc_sigmas = a->sigmas;
                LadderResult r = check_ladder(reports, policy);
                json checks = json::array();
                for (const auto &x : r.checks) {
                    checks.push_back(to_json(x));
                }
                json violations = json::array();
                for (const auto &x : r.violations) {
                    violations.push_back(to_json(x));
                }
                json seps = json::array();
                for (const auto &s : headline_separations(reports, policy)) {
                    seps.push_back(to_json(s));
                }
                json channels = json::array();
                for (const auto &rep : reports) {
                    channels.push_back(rep.channel);
                }
                out["quantity"] = "ladder";
                out["ladder"] = to_json(build_ladder());
                out["reports"] = channels;
                out["checks"] = checks;
                out["violations"] = violations;
                out["separations"] = seps;
                if (!r.violations.empty()) {
                    throw InvariantViolation("ladder violations found");
                }
                return std::string();
            }};
}

Command report_command(CLI::App &app, Common &common) {
    struct Args {
        std::string channel;
        std::uint64_t samples = 1000000, trials = 1000, seed = 1;
    };
    auto a = std::make_shared<Args>();
    CLI::App *sub = app.add_subcommand("report", "Capacity report of a channel for the ladder command");
    sub->add_option("--channel", a->channel, "identity-qubit, classical-bit, retro-2-2, dephased-retro-2-2 or simplified")
        ->required()
        ->check(CLI::IsMember(report_channels()));
    sub->add_option("--samples", a->samples, "Monte Carlo samples");
    sub->add_option("--trials", a->trials, "Protocol trials");
    sub->add_option("--seed", a->seed, "Random seed");
    add_common(sub, common, true);
    return {sub, [a](const Common &c, json &out) {
                format_or(c, "json", {"json"});
                ReportOptions o;
                o.samples = a->samples;
                o.trials = a->trials;
                o.seed = a->seed;
                o.workers = c.workers;
                CapacityReport r = build_report(a->channel, o);
                json seps = json::array();
                for (const auto &s : headline_separations({r})) {
                    seps.push_back(to_json(s));
                }
                out["quantity"] = "capacity-report";
                out["channel"] = r.channel;
                out["samples"] = a->samples;
                out["trials"] = a->trials;
                out["seed"] = a->seed;
                out["report"] = to_json(r);
                out["separations"] = seps;
                return std::string();
            }};
}

Command scan_command(CLI::App &app, Common &common) {
    struct Args {
        std::size_t resolution = 256;
        std::uint64_t mc_samples = 200000, seed = 1;
        std::vector<std::size_t> trigger{1, 1};
    };
    auto a = std::make_shared<Args>();
    CLI::App *sub = app.add_subcommand("simplified-scan", "Holevo quantity of the simplified channel along the x-z great circle");
    sub->add_option("--resolution", a->resolution, "Grid points over [0, 2 pi) (>= 64)");
    sub->add_option("--mc-samples", a->mc_samples, "Monte Carlo samples per cross-check");
    sub->add_option("--seed", a->seed, "Random seed");
    sub->add_option("--trigger", a->trigger, "Trigger outcome per basis")->delimiter(',');
    add_common(sub, common, true);
    return {sub, [a](const Common &c, json &out) {
                std::string format = format_or(c, "json", {"json", "csv"});
                if (a->resolution < 64) {
                    throw UsageError("--resolution must be at least 64");
                }
                SimplifiedChannelSpec spec = simplified_spec(a->trigger);
                ChiScan s = simplified_chi_scan(spec, a->resolution, a->mc_samples, a->seed, c.workers);
                if (format == "csv") {
                    std::string text = "t,chi\n";
                    for (const auto &p : s.curve) {
                        text += fmt_double(p.t) + "," + fmt_double(p.chi) + "\n";
                    }
                    return text;
                }
                json curve = json::array();
                for (const auto &p : s.curve) {
                    curve.push_back({{"t", p.t}, {"chi", p.chi}});
                }
                json checks = json::array();
                bool all_agree = true;
                for (const auto &x : s.cross_checks) {
                    json e = estimate_json(x.monte_carlo);
                    e["t"] = x.t;
                    e["closed_form"] = x.closed_form;
                    e["agrees"] = x.agrees;
                    checks.push_back(e);
                    all_agree = all_agree && x.agrees;
                }
                out["quantity"] = "chi-scan";
                out["channel"] = "simplified";
                out["params"] = {{"trigger", a->trigger}, {"resolution", a->resolution}};
                out["seed"] = a->seed;
                out["samples"] = a->mc_samples;
                out["curve"] = curve;
                out["grid_max"] = {{"t", s.grid_argmax_t}, {"chi", s.grid_max}};
                out["max"] = {{"t", s.argmax_t}, {"chi", s.max_value}};
                out["eigenstate_value"] = s.eigenstate_value;
                out["cross_checks"] = checks;
                out["finding"] = {
                    {"flagged", s.eigenstate_claim_violated},
                    {"detail",
                     s.eigenstate_claim_violated
                         ? "the maximum over the great circle exceeds the value at the basis eigenstate, so an eigenstate "
                           "control is not optimal under this channel model"
                         : "the basis eigenstate attains the maximum over the great circle"}};
                if (!all_agree) {
                    throw InvariantViolation("Monte Carlo cross-check disagrees with the closed form");
                }
                return std::string();
            }};
}

int run(std::vector<std::string> argv);

Command rerun_command(CLI::App &app, Common &common, std::string &from) {
    CLI::App *sub = app.add_subcommand("rerun", "Re-run the config embedded in a JSON output");
    sub->add_option("--from", from, "JSON output of an earlier run")->required();
    sub->add_option("--out", common.out, "Write the output to this file instead of stdout");
    sub->add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", common.timing, "Add wall_time_ms to JSON output");
    return {sub, nullptr};
}

int run(std::vector<std::string> argv) {
    CLI::App app{"retrocap: retrocorrectable channel toolkit"};
    app.name("retrocap");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    Common common;
    std::string from;
    std::vector<Command> commands{
        estimator_command(app, common, false),
        estimator_command(app, common, true),
        protocol_command(app, common),
        choi_command(app, common),
        trend_command(app, common),
        ladder_command(app, common),
        report_command(app, common),
        scan_command(app, common),
        rerun_command(app, common, from),
    };
    std::vector<std::string> reversed(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    for (const auto &cmd : commands) {
        if (!cmd.app->parsed()) {
            continue;
        }
        if (cmd.app->get_name() == "rerun") {
            std::ifstream f(from);
            if (!f) {
                std::cerr << "error: cannot read '" << from << "'\n";
                return kExitUsage;
            }
            std::vector<std::string> args{"retrocap"};
            try {
                json j = json::parse(f);
                for (auto &s : config_args(j.at("config"))) {
                    args.push_back(std::move(s));
                }
            } catch (const json::exception &e) {
                std::cerr << "error: '" << from << "' has no usable config: " << e.what() << "\n";
                return kExitUsage;
            }
            if (!common.out.empty()) {
                args.insert(args.end(), {"--out", common.out});
            }
            args.insert(args.end(), {"--workers", std::to_string(common.workers)});
            if (common.timing) {
                args.push_back("--timing");
            }
            return run(args);
        }
        auto start = std::chrono::steady_clock::now();
        json out = json::object();
        int code = kExitOk;
        std::string text;
        try {
            text = cmd.run(common, out);
        } catch (const UsageError &e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const InvariantViolation &e) {
            std::cerr << "invariant violation: " << e.what() << "\n";
            code = kExitInvariant;
        } catch (const ProtocolFailure &e) {
            std::cerr << "protocol failure: " << e.what() << "\n" << trace_json(e.trace()).dump(2) << "\n";
            return kExitInvariant;
        } catch (const ValidityError &e) {
            std::cerr << "invariant violation: " << e.what() << "\n";
            return kExitInvariant;
        } catch (const NumericalError &e) {
            std::cerr << "numerical failure: " << e.what() << "\n";
            return kExitInvariant;
        } catch (const Error &e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        if (text.empty()) {
            out["schema_version"] = kSchemaVersion;
            out["config"] = run_config(cmd.app);
            if (common.timing) {
                out["wall_time_ms"] =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            }
            text = json_text(out);
        }
        try {
            write_output(common, text);
        } catch (const UsageError &e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        return code;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char **argv) {
    return run(std::vector<std::string>(argv, argv + argc));
}
