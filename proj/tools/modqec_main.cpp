#include "modqec/errors.hpp"
#include "modqec/instances.hpp"
#include "modqec/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace modqec;

namespace {

InstanceSpec::Kind parse_kind(const std::string& kind) {
    if (kind == "identity") return InstanceSpec::Kind::identity;
    if (kind == "subsystem") return InstanceSpec::Kind::subsystem;
    if (kind == "block_sum") return InstanceSpec::Kind::block_sum;
    if (kind == "perturbed") return InstanceSpec::Kind::perturbed;
    if (kind == "random") return InstanceSpec::Kind::random;
    throw InvalidDims("unknown kind '" + kind + "'");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << text;
}

std::vector<std::string> sequence_paths(const std::string& input) {
    std::vector<std::string> paths;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::directory_iterator(input))
            if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
        std::sort(paths.begin(), paths.end());
        return paths;
    }
    // Manifest: {"instances": ["path", ...]}, entries relative to the manifest.
    std::ifstream in(input, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.contains("instances") || !j["instances"].is_array())
        throw ParseError("manifest needs an 'instances' array");
    const fs::path base = fs::path(input).parent_path();
    for (const auto& item : j["instances"])
        paths.push_back((base / item.get<std::string>()).string());
    return paths;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional modular theory and operator-algebra QEC verifier"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    RunConfig config;
    std::string t_grid_csv;
    app.add_option("--tolerance", config.tolerance, "pass/fail tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--samples", config.samples, "number of Haar-random sample states")
        ->check(CLI::Range(1, 100000));
    app.add_option("--t-grid", t_grid_csv, "comma-separated cocycle flow times");
    app.add_option("--seed", config.seed, "random seed (MODULAR_QEC_SEED overrides)");
    app.add_option("--jobs", config.jobs, "worker threads (default: logical cores)");
    std::string format = "json";
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));

    auto* generate = app.add_subcommand("generate", "generate an instance file");
    std::string kind = "subsystem", dims_csv, weights_csv, base_path, gen_out = "instance.json";
    double epsilon = 0.0;
    generate->add_option("--kind", kind, "identity|subsystem|block_sum|perturbed|random");
    generate->add_option("--dims", dims_csv, "comma-separated dimensions (per kind)");
    generate->add_option("--weights", weights_csv, "block_sum weights");
    generate->add_option("--epsilon", epsilon, "perturbation strength");
    generate->add_option("--base", base_path, "base instance file (perturbed kind)");
    generate->add_option("-o,--output", gen_out, "output path");

    auto* verify = app.add_subcommand("verify", "verify Theorem-1 conditions on an instance");
    std::string verify_input, verify_out;
    std::vector<std::string> checks;
    verify->add_option("instance", verify_input, "instance file")->required();
    verify->add_option("-o,--output", verify_out, "report path (default: stdout)");
    verify->add_option("--check", checks, "extra checks: support|lemma-cocycle")
        ->check(CLI::IsMember({"support", "lemma-cocycle"}));

    auto* sequence = app.add_subcommand("sequence", "Theorem-2 diagnostics over a sequence");
    std::string seq_input, seq_out;
    sequence->add_option("input", seq_input, "directory of instances or manifest file")
        ->required();
    sequence->add_option("-o,--output", seq_out, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (const char* env_seed = std::getenv("MODULAR_QEC_SEED"))
        config.seed = std::strtoull(env_seed, nullptr, 10);
    if (!t_grid_csv.empty()) {
        config.t_grid.clear();
        std::stringstream ss(t_grid_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) config.t_grid.push_back(std::stod(tok));
    }
    if (config.t_grid.empty()) {
        std::cerr << "error: empty t-grid\n";
        return 2;
    }

    try {
        if (*generate) {
            InstanceSpec spec;
            spec.kind = parse_kind(kind);
            spec.seed = config.seed;
            spec.epsilon = epsilon;
            spec.base_path = base_path;
            if (!dims_csv.empty()) {
                std::stringstream ss(dims_csv);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.dims.push_back(std::stoll(tok));
            }
            if (!weights_csv.empty()) {
                std::stringstream ss(weights_csv);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.weights.push_back(std::stod(tok));
            }
            const EncodingInstance instance = make_instance(spec);
            save_instance(instance, gen_out);
            std::cout << instance_content_hash(instance) << "\n";
            return 0;
        }

        if (*verify) {
            for (const std::string& c : checks) {
                if (c == "lemma-cocycle") config.check_lemma = true;
                if (c == "support") config.check_support = true;
            }
            const EncodingInstance instance = load_instance(verify_input);
            const VerificationReport report = verify_theorem1(instance, config);
            const std::string text =
                format == "text" ? report_to_text(report) : report_to_json(report, config);
            if (verify_out.empty())
                std::cout << text << "\n";
            else
                write_file(verify_out, text + "\n");
            return verdict_exit_code(report.verdict);
        }

        if (*sequence) {
            std::vector<EncodingInstance> instances;
            for (const std::string& path : sequence_paths(seq_input))
                instances.push_back(load_instance(path));
            const SequenceReport report = verify_theorem2(instances, config);
            const std::string text = format == "text"
                                         ? sequence_report_to_text(report)
                                         : sequence_report_to_json(report, config);
            if (seq_out.empty())
                std::cout << text << "\n";
            else
                write_file(seq_out, text + "\n");
            return 0;
        }
    } catch (const SequenceTooShort& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
