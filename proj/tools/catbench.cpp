#include "catbench/analytics/report.hpp"
#include "catbench/campaign/campaign.hpp"
#include "catbench/complexity/complexity.hpp"
#include "catbench/service/service.hpp"
#include "catbench/space/dataset_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

using namespace catbench;
namespace fs = std::filesystem;

namespace {

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_file_atomic(out, text);
}

int cmd_validate(const std::string& path) {
    const auto text = read_text_file(path);
    if (auto diag = validate_dataset_text(text)) {
        std::cerr << path << ":" << diag->line << ": " << diag->message << "\n";
        return 1;
    }
    const auto ds = parse_dataset(text);
    std::cout << path << ": ok (" << ds.space().dimension() << " parameters, " << ds.space().cardinality()
              << " combinations, " << ds.table().size() << " measured)\n";
    return 0;
}

int cmd_complexity(const std::vector<std::string>& paths, const std::string& policy_name, std::uint64_t seed,
                   const std::string& out) {
    std::vector<BenchmarkDataset> datasets;
    for (const auto& p : paths)
        datasets.push_back(load_dataset(p));
    const auto mode = aggregation_mode_from_string(policy_name);

    std::vector<complexity::ComplexityReport> reports;
    for (const auto& ds : datasets)
        reports.push_back(complexity::raw_metrics(ds, ds.default_policy(mode), seed));
    const bool normalized = reports.size() >= 2;
    if (normalized)
        reports = complexity::normalize_reports(std::move(reports));
    else
        std::cerr << "note: a single dataset has no comparison set; normalized columns are left empty\n";

    static const char* names[] = {"aop", "np", "pss", "skew", "si", "pib"};
    std::ostringstream csv;
    csv << "dataset";
    for (auto n : names)
        csv << "," << n;
    for (auto n : names)
        csv << ",norm_" << n;
    csv << ",radar_area\n";
    for (const auto& r : reports) {
        csv << analytics::csv_field(r.dataset);
        for (double v : r.raw())
            csv << "," << analytics::csv_number(v);
        for (double v : r.normalized)
            csv << "," << (normalized ? analytics::csv_number(v) : "");
        csv << "," << (normalized ? analytics::csv_number(r.radar_area_score) : "") << "\n";
    }
    emit(csv.str(), out);
    return 0;
}

struct RunArgs {
    std::string dataset, method = "random", out, agg = "lower_bound";
    std::size_t budget = kDefaultBudget, batch = kDefaultBatchSize, repeats = kDefaultRepeats;
    std::uint64_t seed = 0;
    std::string acquisition = "ei", featurization = "one_hot", label;
    double ucb_beta = bo::kDefaultUcbBeta;
    std::vector<double> tolerances;
    std::vector<std::string> descriptors;
    std::string provider, provider_config, mock_script;
    std::vector<std::string> context_docs;
    std::size_t parallel = 0;
};

int cmd_run(const RunArgs& a) {
    campaign::CampaignConfig cfg;
    cfg.dataset = std::make_shared<const BenchmarkDataset>(load_dataset(a.dataset));
    cfg.dataset_ref = a.dataset;
    cfg.budget = a.budget;
    cfg.batch_size = a.batch;
    cfg.repeats = a.repeats;
    cfg.base_seed = a.seed;
    cfg.aggregation = aggregation_mode_from_string(a.agg);
    cfg.output_dir = a.out;

    auto& m = cfg.method;
    m.modality = campaign::modality_from_string(a.method);
    m.label = a.label;
    if (m.modality == campaign::Modality::human)
        throw ConfigError("human campaigns run through the service, not the CLI");
    if (m.modality == campaign::Modality::bo) {
        m.bo.acquisition = bo::acquisition_from_string(a.acquisition);
        m.bo.featurization = bo::featurization_from_string(a.featurization);
        m.bo.ucb_beta = a.ucb_beta;
        m.bo.tolerances = a.tolerances;
        for (const auto& p : a.descriptors)
            m.bo.descriptors.push_back(bo::load_descriptor_csv(p));
    }
    if (m.modality == campaign::Modality::llm) {
        m.provider = a.provider.empty() ? (a.method == "mock" || !a.mock_script.empty() ? "mock" : "http") : a.provider;
        if (!a.mock_script.empty())
            m.mock_script = nlohmann::json::parse(read_text_file(a.mock_script));
        if (!a.provider_config.empty())
            m.provider_config = llm::provider_config_from_json(nlohmann::json::parse(read_text_file(a.provider_config)));
        for (const auto& doc : a.context_docs)
            m.context_documents.push_back(read_text_file(doc));
    }
    cfg.validate();

    std::size_t parallel = a.parallel;
    if (parallel == 0) {
        // remote providers are I/O bound; local optimizers are CPU bound
        parallel = m.modality == campaign::Modality::llm && m.provider == "http"
                       ? 4
                       : std::max(1u, std::thread::hardware_concurrency());
    }
    const auto runs = campaign::run_suite(campaign::expand_repeats(cfg), parallel);
    std::size_t aborted = 0;
    for (const auto& t : runs) {
        if (!cfg.output_dir.empty())
            write_trajectory(t, cfg.output_dir / (t.run_id + ".json"));
        const auto best = t.best();
        std::cout << t.run_id << "\t" << campaign::to_string(t.status);
        if (best)
            std::cout << "\tbest=" << best->first << " at " << best->second + 1;
        if (!t.abort_reason.empty())
            std::cout << "\t" << t.abort_reason;
        std::cout << "\n";
        aborted += t.status == campaign::RunStatus::aborted;
    }
    if (aborted)
        std::cerr << aborted << " of " << runs.size() << " runs aborted\n";
    return 0;
}

struct AnalyzeArgs {
    std::string kind, runs, out, dataset, summary, baseline = "random";
    std::vector<double> fractions{0.8, 0.95};
    bool include_aborted = false;
    std::uint64_t seed = 0;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const auto runs = campaign::read_trajectories(a.runs);
    if (runs.empty())
        throw ConfigError("no trajectories found in " + a.runs);
    if (a.kind == "entropy") {
        emit(analytics::entropy_csv(runs), a.out);
    } else if (a.kind == "duplicates") {
        emit(analytics::duplicates_csv(runs), a.out);
    } else if (a.kind == "convergence") {
        double reference = 0.0;
        if (!a.dataset.empty()) {
            const auto ds = load_dataset(a.dataset);
            reference = ds.best_aggregated(runs.front().policy);
        } else {
            bool any = false;
            for (const auto& t : runs)
                if (auto b = t.best()) {
                    reference = any ? std::max(reference, b->first) : b->first;
                    any = true;
                }
            std::cerr << "note: no --dataset given; using the best value across runs (" << reference
                      << ") as the reference\n";
        }
        emit(analytics::convergence_csv(runs, a.fractions, reference), a.out);
    } else if (a.kind == "stats") {
        const auto groups = analytics::best_values_by_method(runs, a.include_aborted);
        std::optional<std::string> baseline;
        if (!a.baseline.empty() && a.baseline != "none")
            baseline = a.baseline;
        const auto report = analytics::stats_battery(groups, baseline, a.seed);
        emit(analytics::stats_csv(report), a.out);
        if (!a.summary.empty())
            emit(analytics::summary_csv(report), a.summary);
    } else {
        throw ConfigError("unknown analysis '" + a.kind + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"catbench: benchmark optimizers on tabulated reaction datasets"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate-dataset", "Check a dataset manifest");
    validate->add_option("path", validate_path, "Manifest file")->required();

    std::vector<std::string> cx_paths;
    std::string cx_policy = "lower_bound", cx_out;
    std::uint64_t cx_seed = 0;
    auto* cx = app.add_subcommand("complexity", "Complexity metrics and radar scores");
    cx->add_option("datasets", cx_paths, "Manifest files")->required();
    cx->add_option("--policy", cx_policy, "Replicate aggregation: lower_bound, mean or upper_bound");
    cx->add_option("--seed", cx_seed, "Random forest seed");
    cx->add_option("--out", cx_out, "Output CSV (default stdout)");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run repeated optimization campaigns");
    run->add_option("--dataset", ra.dataset, "Manifest file")->required();
    run->add_option("--method", ra.method, "random, bo, llm or mock");
    run->add_option("--budget", ra.budget, "Suggestions per campaign");
    run->add_option("--batch", ra.batch, "Suggestions per iteration");
    run->add_option("--repeats", ra.repeats, "Independent campaigns");
    run->add_option("--seed", ra.seed, "Base seed");
    run->add_option("--agg", ra.agg, "lower_bound, mean or upper_bound");
    run->add_option("--out", ra.out, "Directory for trajectory files");
    run->add_option("--label", ra.label, "Method label used in reports");
    run->add_option("--acquisition", ra.acquisition, "ei, pi or ucb");
    run->add_option("--ucb-beta", ra.ucb_beta, "UCB exploration weight");
    run->add_option("--featurization", ra.featurization, "one_hot or descriptors");
    run->add_option("--descriptors", ra.descriptors, "One descriptor CSV per parameter, in parameter order");
    run->add_option("--tolerances", ra.tolerances, "Chimera relative tolerances per objective");
    run->add_option("--provider", ra.provider, "mock or http");
    run->add_option("--provider-config", ra.provider_config, "Provider JSON config");
    run->add_option("--mock-script", ra.mock_script, "Scripted responses for the mock provider");
    run->add_option("--context-doc", ra.context_docs, "Extra context document(s) for the LLM");
    run->add_option("--parallel", ra.parallel, "Concurrent campaigns (0 = auto)");

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "Analyze a directory of trajectories");
    analyze->add_option("kind", aa.kind, "entropy, convergence, stats or duplicates")
        ->required()
        ->check(CLI::IsMember({"entropy", "convergence", "stats", "duplicates"}));
    analyze->add_option("--runs", aa.runs, "Trajectory directory")->required();
    analyze->add_option("--out", aa.out, "Output CSV (default stdout)");
    analyze->add_option("--dataset", aa.dataset, "Dataset manifest for the convergence reference");
    analyze->add_option("--fractions", aa.fractions, "Convergence fractions");
    analyze->add_option("--summary", aa.summary, "Per-method summary CSV (stats only)");
    analyze->add_option("--baseline", aa.baseline, "Baseline method label, or none");
    analyze->add_option("--seed", aa.seed, "Bootstrap seed");
    analyze->add_flag("--include-aborted", aa.include_aborted, "Keep aborted runs in the statistics");

    service::ServiceOptions so;
    int port = 8080;
    std::string host = "127.0.0.1", data_dir, tokens, assets;
    auto* serve = app.add_subcommand("serve", "Start the HTTP service");
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--data-dir", data_dir, "Persistence directory");
    serve->add_option("--tokens", tokens, "Token file: one '<token> <handle>' per line");
    serve->add_option("--assets", assets, "Static files served at /");
    serve->add_option("--workers", so.workers, "Workers for machine campaigns");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate)
            return cmd_validate(validate_path);
        if (*cx)
            return cmd_complexity(cx_paths, cx_policy, cx_seed, cx_out);
        if (*run)
            return cmd_run(ra);
        if (*analyze)
            return cmd_analyze(aa);
        if (*serve) {
            so.data_dir = data_dir;
            so.token_file = tokens;
            so.assets_dir = assets;
            return service::serve(so, host, port);
        }
    } catch (const DatasetFormatError& e) {
        std::cerr << "error: line " << e.diagnostic().line << ": " << e.diagnostic().message << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
