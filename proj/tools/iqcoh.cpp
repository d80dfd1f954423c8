#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "iqcoh/coherence.hpp"
#include "iqcoh/entanglement.hpp"
#include "iqcoh/harness.hpp"

namespace {

using namespace iqcoh;

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 2;
constexpr int kExitInput = 3;
constexpr int kExitSolver = 4;

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find('x', pos);
        if (next == std::string::npos) next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        try {
            dims.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ParseError("bad dimension token '" + tok + "' in '" + text + "'");
        }
        if (dims.back() < 1) throw RangeError("dimensions must be positive");
        pos = next + 1;
    }
    if (dims.empty()) throw ParseError("empty dimension pattern");
    return dims;
}

const char* method_name(coherence::Method m) {
    switch (m) {
        case coherence::Method::ClosedForm: return "closed-form";
        case coherence::Method::Sdp: return "sdp";
        case coherence::Method::RoofSearch: return "roof-search";
        case coherence::Method::FormulaPure: return "formula-pure";
    }
    return "?";
}

const char* bound_name(coherence::BoundDirection b) {
    switch (b) {
        case coherence::BoundDirection::Exact: return "exact";
        case coherence::BoundDirection::Upper: return "upper";
        case coherence::BoundDirection::Lower: return "lower";
    }
    return "?";
}

nlohmann::json measure_report_json(const coherence::MeasureReport& rep) {
    nlohmann::json j;
    j["measure"] = rep.measure;
    j["value"] = rep.value;
    j["method"] = method_name(rep.method);
    j["bound_direction"] = bound_name(rep.bound);
    nlohmann::json meta = nlohmann::json::object();
    if (rep.meta.sdp_iterations > 0) {
        meta["sdp_iterations"] = rep.meta.sdp_iterations;
        meta["sdp_gap"] = rep.meta.sdp_gap;
    }
    if (rep.meta.roof_terms > 0) {
        meta["roof_terms"] = rep.meta.roof_terms;
        meta["restarts_agreeing"] = rep.meta.restarts_agreeing;
    }
    j["meta"] = meta;
    return j;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open output path " + out_path);
    out << text << '\n';
}

int cmd_measure(const std::string& state_path, const std::string& measure,
                const std::string& bipartition, int roof_restarts,
                const std::string& out_path) {
    const QuantumState state = states::load(state_path);
    coherence::Bipartition bp;
    const coherence::Bipartition* bp_ptr = nullptr;
    if (!bipartition.empty()) {
        const std::vector<int> dims = parse_dims(bipartition);
        if (dims.size() < 2) throw ParseError("bipartition needs at least dAxdB");
        bp.dA = dims[0];
        bp.dB = 1;
        for (std::size_t i = 1; i < dims.size(); ++i) bp.dB *= dims[i];
        bp_ptr = &bp;
    }
    convexroof::RoofConfig roof_cfg;
    if (roof_restarts > 0) roof_cfg.restarts = roof_restarts;

    coherence::MeasureReport rep;
    if (measure == "e_f" || measure == "e_a") {
        if (bp_ptr == nullptr)
            throw DimensionMismatchError("measure " + measure + " needs a bipartition");
        rep = measure == "e_f" ? entanglement::e_f(state.rho, bp, roof_cfg)
                               : entanglement::e_a(state.rho, bp, roof_cfg);
    } else {
        rep = coherence::evaluate(measure, state.rho, bp_ptr, roof_cfg);
    }
    emit(measure_report_json(rep).dump(2), out_path);
    return kExitOk;
}

int cmd_verify(harness::SuiteSpec spec) {
    const harness::SuiteReport report = harness::run_suite(spec);
    const std::string rendered = spec.format == "csv"
                                     ? harness::report_to_csv(report)
                                     : harness::report_to_json(report);
    if (spec.out.empty()) {
        std::cout << rendered;
        if (spec.format != "csv") std::cout << '\n';
    } else {
        harness::write_report(report, spec.out, spec.format);
    }
    std::fprintf(stderr, "suite %s: %d/%d pass, max margin %s, tol %s, %.2fs\n",
                 report.suite.c_str(), report.passes, report.trials,
                 harness::format_value(report.max_margin).c_str(),
                 harness::format_value(report.tolerance).c_str(),
                 report.wall_seconds);
    if (report.solver_failure) return kExitSolver;
    return report.all_pass() ? kExitOk : kExitTolerance;
}

int cmd_sample(const std::string& kind, const std::string& dims_text, int count,
               std::uint64_t seed, int rank, const std::string& out_dir) {
    EnsembleSpec spec;
    if (kind == "haar-pure") spec.kind = EnsembleKind::HaarPure;
    else if (kind == "ginibre") spec.kind = EnsembleKind::GinibreMixed;
    else if (kind == "random-iq") spec.kind = EnsembleKind::RandomIq;
    else if (kind == "random-incoherent") spec.kind = EnsembleKind::RandomIncoherent;
    else throw ParseError("unknown ensemble kind: " + kind);
    spec.dims = parse_dims(dims_text);
    spec.count = count;
    spec.rank = rank;
    spec.seed = seed;

    std::filesystem::create_directories(out_dir);
    const std::vector<QuantumState> ensemble = states::sample(spec);
    nlohmann::json manifest;
    manifest["kind"] = kind;
    manifest["dims"] = spec.dims;
    manifest["seed"] = seed;
    manifest["rank"] = rank;
    nlohmann::json files = nlohmann::json::array();
    for (int i = 0; i < count; ++i) {
        const std::string name = "state_" + std::to_string(i) + ".json";
        states::save(ensemble[i], out_dir + "/" + name);
        files.push_back({{"file", name}, {"stream", i}});
    }
    manifest["files"] = files;
    std::ofstream mf(out_dir + "/manifest.json");
    if (!mf) throw IoError("cannot write manifest in " + out_dir);
    mf << manifest.dump(2) << '\n';
    std::fprintf(stderr, "wrote %d states to %s\n", count, out_dir.c_str());
    return kExitOk;
}

int cmd_table(int grid_points, const std::string& out_path) {
    if (grid_points < 2) throw RangeError("table needs at least 2 grid points");
    std::string csv = "lambda,cl1_iq,cmax_iq,log2_1p_cl1\n";
    const coherence::Bipartition bp{2, 2};
    double worst = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double lam = static_cast<double>(k) / (grid_points - 1);
        const QuantumState st = states::rho_lambda(lam);
        const double l1 = coherence::cl1_iq(st.rho, bp).value;
        const double cmax = coherence::cmax_iq(st.rho, bp).value;
        const double log_form = std::log2(1.0 + l1);
        worst = std::max(worst, std::abs(cmax - log_form));
        csv += harness::format_value(lam) + ',' + harness::format_value(l1) + ',' +
               harness::format_value(cmax) + ',' + harness::format_value(log_form) + '\n';
    }
    emit(csv.substr(0, csv.size() - 1), out_path);
    if (worst > 1e-6) {
        std::fprintf(stderr, "table columns disagree: max |cmax - log2(1+cl1)| = %s\n",
                     harness::format_value(worst).c_str());
        return kExitTolerance;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"incoherent-quantum coherence measures and verification suites"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file (TOML/INI, keys mirror the flags)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // measure
    auto* measure = app.add_subcommand("measure", "evaluate one measure on a state file");
    std::string state_path, measure_name, bipartition, out_path;
    int roof_restarts = 0;
    measure->add_option("--state", state_path, "state JSON file")->required();
    measure->add_option("--measure", measure_name, "measure name")->required();
    measure->add_option("--bipartition", bipartition, "dAxdB (A is the coherent side)");
    measure->add_option("--roof-restarts", roof_restarts, "roof search restarts");
    measure->add_option("--out", out_path, "write report here instead of stdout");

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    harness::SuiteSpec spec;
    std::string dims_text, ensemble;
    verify->add_option("--suite", spec.suite, "suite name (see list-suites)")->required();
    verify->add_option("--trials", spec.trials, "trial count");
    verify->add_option("--dims", dims_text, "dimension pattern dAxdB[xdC]");
    verify->add_option("--seed", spec.seed, "master seed");
    verify->add_option("--tol", spec.tol, "override the suite tolerance");
    verify->add_option("--ensemble", ensemble, "ensemble override (e.g. rank2)");
    verify->add_option("--roof-restarts", spec.roof_restarts, "roof search restarts");
    verify->add_option("--threads", spec.threads, "worker threads")
        ->envname("IQCOH_THREADS");
    verify->add_option("--out", spec.out, "report path (default stdout)");
    verify->add_option("--format", spec.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // sample
    auto* sample = app.add_subcommand("sample", "write an ensemble of state files");
    std::string kind = "ginibre", sample_dims = "2x2", sample_dir = ".";
    int count = 1, rank = 0;
    std::uint64_t sample_seed = 1;
    sample->add_option("--ensemble", kind,
                       "haar-pure | ginibre | random-iq | random-incoherent");
    sample->add_option("--dims", sample_dims, "dimension pattern");
    sample->add_option("--count", count, "number of states");
    sample->add_option("--rank", rank, "ginibre rank (0 = full)");
    sample->add_option("--seed", sample_seed, "master seed");
    sample->add_option("--out", sample_dir, "output directory")->required();

    // table
    auto* table = app.add_subcommand("table", "rho(lambda) equality table as CSV");
    int grid_points = 11;
    std::string table_out;
    table->add_option("--grid", grid_points, "number of lambda grid points");
    table->add_option("--out", table_out, "write CSV here instead of stdout");

    auto* list = app.add_subcommand("list-suites", "print the suite catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (measure->parsed())
            return cmd_measure(state_path, measure_name, bipartition, roof_restarts,
                               out_path);
        if (verify->parsed()) {
            if (!dims_text.empty()) spec.dims = parse_dims(dims_text);
            spec.ensemble = ensemble;
            return cmd_verify(spec);
        }
        if (sample->parsed())
            return cmd_sample(kind, sample_dims, count, sample_seed, rank, sample_dir);
        if (table->parsed()) return cmd_table(grid_points, table_out);
        if (list->parsed()) {
            for (const std::string& name : harness::list_suites())
                std::cout << name << '\n';
            return kExitOk;
        }
    } catch (const MaxIterationsError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitInput;
}
