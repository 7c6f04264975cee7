#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "groupfb/io.hpp"
#include "groupfb/version.hpp"

namespace {

using groupfb::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw groupfb::ValidationError("cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw groupfb::ValidationError("cannot open output file: " + path);
    out << payload;
}

json parse_json(const std::string& bytes, const std::string& path) {
    try {
        return json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw groupfb::ValidationError("malformed JSON in " + path + ": " + e.what());
    }
}

struct Config {
    std::string spec_path;
    std::string filters_path;
    std::string out_path;
    std::string format = "json";
    std::string mode = "average";
    double tol_pr = groupfb::kPrTolerance;
    double tol_frame = groupfb::kFrameTolerance;
    std::uint64_t seed = 7;
    std::size_t trials = 100;
    std::int64_t q = 16;
    std::size_t channels = 2;
};

json envelope(const Config& cfg, const std::string& command,
              const std::vector<std::pair<std::string, std::string>>& inputs) {
    json j;
    j["tool"] = json{{"name", groupfb::kToolName}, {"version", groupfb::kToolVersion}};
    j["command"] = command;
    json in = json::object();
    for (const auto& [name, bytes] : inputs) {
        in[name] = json{{"fnv1a64", groupfb::fnv1a_hex(bytes)}};
    }
    j["inputs"] = std::move(in);
    j["tolerances"] = json{{"pr", cfg.tol_pr}, {"frame", cfg.tol_frame}};
    return j;
}

int run_group_validate(const Config& cfg) {
    const std::string bytes = read_file(cfg.spec_path);
    const groupfb::GroupPtr group = groupfb::group_from_json(parse_json(bytes, cfg.spec_path));
    json report = envelope(cfg, "group validate", {{"spec", bytes}});
    report["valid"] = true;
    report["orders"] = json{{"N", group->n_group().order()},
                            {"H", group->h_group().order()},
                            {"G", group->order()}};
    write_output(cfg.out_path, groupfb::write_json(report));
    return 0;
}

int run_fb_analyze(const Config& cfg) {
    const std::string spec_bytes = read_file(cfg.spec_path);
    const std::string filter_bytes = read_file(cfg.filters_path);
    const groupfb::GroupPtr group =
        groupfb::group_from_json(parse_json(spec_bytes, cfg.spec_path));
    const json fj = parse_json(filter_bytes, cfg.filters_path);
    groupfb::expect_keys(fj, {"filters"}, "filter file");
    if (!fj.contains("filters"))
        throw groupfb::ValidationError("filter file needs a \"filters\" array");
    const auto generators = groupfb::bank_from_json(fj.at("filters"), group, "filters");

    if (cfg.format == "csv") {
        write_output(cfg.out_path,
                     groupfb::polyphase_field_to_csv(groupfb::translate_frame_field(generators)));
        return 0;
    }
    json report = envelope(cfg, "fb analyze",
                           {{"spec", spec_bytes}, {"filters", filter_bytes}});
    report["frame_report"] =
        groupfb::frame_report_to_json(groupfb::frame_bounds(generators, cfg.tol_frame));
    write_output(cfg.out_path, groupfb::write_json(report));
    return 0;
}

int run_fb_verify_pr(const Config& cfg) {
    const std::string spec_bytes = read_file(cfg.spec_path);
    const std::string filter_bytes = read_file(cfg.filters_path);
    const groupfb::GroupPtr group =
        groupfb::group_from_json(parse_json(spec_bytes, cfg.spec_path));
    const json fj = parse_json(filter_bytes, cfg.filters_path);
    groupfb::expect_keys(fj, {"analysis", "synthesis"}, "filter file");
    if (!fj.contains("analysis") || !fj.contains("synthesis"))
        throw groupfb::ValidationError(
            "verify-pr needs \"analysis\" and \"synthesis\" filter arrays");
    const auto analysis = groupfb::bank_from_json(fj.at("analysis"), group, "analysis");
    const auto synthesis = groupfb::bank_from_json(fj.at("synthesis"), group, "synthesis");

    const groupfb::PrReport verdict =
        groupfb::verify_perfect_reconstruction(analysis, synthesis, cfg.tol_pr);
    json report = envelope(cfg, "fb verify-pr",
                           {{"spec", spec_bytes}, {"filters", filter_bytes}});
    report["verdict"] = groupfb::pr_report_to_json(verdict);
    write_output(cfg.out_path, groupfb::write_json(report));
    return verdict.perfect ? 0 : 3;
}

int run_fb_design_dual(const Config& cfg) {
    const std::string spec_bytes = read_file(cfg.spec_path);
    const std::string filter_bytes = read_file(cfg.filters_path);
    const groupfb::GroupPtr group =
        groupfb::group_from_json(parse_json(spec_bytes, cfg.spec_path));
    const json fj = parse_json(filter_bytes, cfg.filters_path);
    groupfb::expect_keys(fj, {"filters"}, "filter file");
    if (!fj.contains("filters"))
        throw groupfb::ValidationError("filter file needs a \"filters\" array");
    const auto analysis = groupfb::bank_from_json(fj.at("filters"), group, "filters");

    const auto field = groupfb::analysis_field(analysis);
    const auto dual = groupfb::design_dual(analysis, cfg.tol_frame);
    json report = envelope(cfg, "fb design-dual",
                           {{"spec", spec_bytes}, {"filters", filter_bytes}});
    report["bounds"] = groupfb::spectral_bounds_to_json(groupfb::spectral_bounds(field));
    report["synthesis"] = groupfb::bank_to_json(dual);
    write_output(cfg.out_path, groupfb::write_json(report));
    return 0;
}

int run_sample_build(const Config& cfg) {
    const std::string bytes = read_file(cfg.spec_path);
    const groupfb::ProblemBundle bundle = groupfb::sampling_problem_from_json(
        parse_json(bytes, cfg.spec_path), cfg.seed, cfg.tol_frame);
    const groupfb::ReconstructionKit kit =
        groupfb::build_reconstruction(bundle.problem, nullptr, cfg.tol_frame);

    json report = envelope(cfg, "sample build", {{"spec", bytes}});
    report["seed"] = cfg.seed;
    json kj;
    kj["synthesis_filters"] = groupfb::bank_to_json(kit.synthesis);
    json vectors = json::array();
    for (const auto& c : kit.vectors) vectors.push_back(groupfb::cvector_to_json(c));
    kj["reconstruction_vectors"] = std::move(vectors);
    kj["analysis_bounds"] = groupfb::spectral_bounds_to_json(kit.analysis_bounds);
    kj["subspace_frame"] = groupfb::riesz_bounds_to_json(kit.subspace_frame);
    report["kit"] = std::move(kj);
    write_output(cfg.out_path, groupfb::write_json(report));
    return 0;
}

json model_summary(const groupfb::CrystalModel& model, const Config& cfg, std::size_t channels) {
    json j;
    j["d"] = model.spec.dimension;
    j["q"] = model.spec.grid_side;
    j["moduli"] = model.group->n_group().moduli();
    j["L"] = model.group->h_group().order();
    j["K"] = channels;
    j["mode"] = cfg.mode;
    return j;
}

int emit_demo(const Config& cfg, const std::string& command, const groupfb::CrystalModel& model,
              const groupfb::DemoReport& demo,
              const std::vector<std::pair<std::string, std::string>>& inputs) {
    if (cfg.format == "csv") {
        write_output(cfg.out_path, groupfb::trial_errors_to_csv(demo.per_trial_errors));
        return 0;
    }
    json report = envelope(cfg, command, inputs);
    report["seed"] = cfg.seed;
    report["trials"] = cfg.trials;
    report["model"] = model_summary(model, cfg, demo.channels);
    report["demo"] = groupfb::demo_report_to_json(demo);
    write_output(cfg.out_path, groupfb::write_json(report));
    return 0;
}

int run_demo_crystal(const Config& cfg) {
    const std::string bytes = read_file(cfg.spec_path);
    const json cj = parse_json(bytes, cfg.spec_path);
    const groupfb::CrystalSpec spec = groupfb::crystal_spec_from_json(cj);
    const groupfb::CrystalModel model = groupfb::build_crystal_group(spec);

    groupfb::CVector generator;
    if (cj.contains("generator") && cj.at("generator").is_array()) {
        generator = groupfb::cvector_from_json(cj.at("generator"), "generator");
    } else {
        generator = groupfb::default_generator(model, cfg.seed);
    }

    const std::size_t L = model.group->h_group().order();
    groupfb::DemoReport demo;
    if (cfg.mode == "average") {
        std::vector<groupfb::CVector> probes;
        if (cj.contains("probes")) {
            for (const auto& p : cj.at("probes"))
                probes.push_back(groupfb::cvector_from_json(p, "probe"));
        } else {
            for (std::size_t k = 0; k < L; ++k)
                probes.push_back(groupfb::smooth_random_field(model, cfg.seed + 1 + k));
        }
        demo = groupfb::demo_average(model, generator, probes, cfg.trials, cfg.seed,
                                     cfg.tol_frame);
    } else if (cfg.mode == "pointwise") {
        std::vector<std::size_t> points;
        if (cj.contains("points")) {
            for (const auto& p : cj.at("points")) {
                if (p.is_array()) {
                    std::vector<std::int64_t> coords;
                    for (const auto& c : p) coords.push_back(c.get<std::int64_t>());
                    points.push_back(model.grid_index(coords));
                } else {
                    points.push_back(p.get<std::size_t>());
                }
            }
        } else {
            for (std::size_t k = 0; k < L; ++k) points.push_back(k);
        }
        demo = groupfb::demo_pointwise(model, generator, points, cfg.trials, cfg.seed,
                                       cfg.tol_frame);
    } else {
        throw groupfb::ValidationError("mode must be \"average\" or \"pointwise\"");
    }
    return emit_demo(cfg, "sample demo-crystal", model, demo, {{"spec", bytes}});
}

int run_demo_dihedral(const Config& cfg) {
    const groupfb::CrystalModel model =
        groupfb::build_crystal_group(groupfb::dihedral_spec(cfg.q));
    const groupfb::CVector generator = groupfb::default_generator(model, cfg.seed);

    groupfb::DemoReport demo;
    if (cfg.mode == "average") {
        std::vector<groupfb::CVector> probes;
        for (std::size_t k = 0; k < cfg.channels; ++k)
            probes.push_back(groupfb::smooth_random_field(model, cfg.seed + 1 + k));
        demo = groupfb::demo_average(model, generator, probes, cfg.trials, cfg.seed,
                                     cfg.tol_frame);
    } else if (cfg.mode == "pointwise") {
        std::vector<std::size_t> points;
        for (std::size_t k = 0; k < cfg.channels; ++k) points.push_back(k);
        demo = groupfb::demo_pointwise(model, generator, points, cfg.trials, cfg.seed,
                                       cfg.tol_frame);
    } else {
        throw groupfb::ValidationError("mode must be \"average\" or \"pointwise\"");
    }

    // No file inputs; digest the run parameters instead.
    const std::string params = "q=" + std::to_string(cfg.q) +
                               ";K=" + std::to_string(cfg.channels) + ";mode=" + cfg.mode +
                               ";trials=" + std::to_string(cfg.trials) +
                               ";seed=" + std::to_string(cfg.seed);
    return emit_demo(cfg, "sample demo-dihedral", model, demo, {{"parameters", params}});
}

} // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"Filter banks, frame analysis and generalized sampling on semidirect "
                 "product groups"};
    app.require_subcommand(1);

    auto add_common = [&cfg](CLI::App* cmd, bool with_seed) {
        cmd->add_option("--out", cfg.out_path, "output path (stdout when omitted)");
        cmd->add_option("--format", cfg.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--tol-pr", cfg.tol_pr, "perfect-reconstruction tolerance");
        cmd->add_option("--tol-frame", cfg.tol_frame, "relative frame-bound tolerance");
        if (with_seed) cmd->add_option("--seed", cfg.seed, "random seed");
    };

    int (*action)(const Config&) = nullptr;

    CLI::App* group = app.add_subcommand("group", "group spec operations");
    group->require_subcommand(1);
    CLI::App* validate = group->add_subcommand("validate", "validate a group spec");
    validate->add_option("--spec", cfg.spec_path, "group spec JSON")->required();
    add_common(validate, false);
    validate->callback([&] { action = run_group_validate; });

    CLI::App* fb = app.add_subcommand("fb", "filter bank operations");
    fb->require_subcommand(1);

    CLI::App* analyze = fb->add_subcommand("analyze", "frame bounds of a translate system");
    analyze->add_option("--spec", cfg.spec_path, "group spec JSON")->required();
    analyze->add_option("--filters", cfg.filters_path, "generator filters JSON")->required();
    add_common(analyze, false);
    analyze->callback([&] { action = run_fb_analyze; });

    CLI::App* verify = fb->add_subcommand("verify-pr", "check perfect reconstruction");
    verify->add_option("--spec", cfg.spec_path, "group spec JSON")->required();
    verify->add_option("--filters", cfg.filters_path,
                       "JSON with \"analysis\" and \"synthesis\" banks")
        ->required();
    add_common(verify, false);
    verify->callback([&] { action = run_fb_verify_pr; });

    CLI::App* design = fb->add_subcommand("design-dual", "pseudo-inverse dual design");
    design->add_option("--spec", cfg.spec_path, "group spec JSON")->required();
    design->add_option("--filters", cfg.filters_path, "analysis filters JSON")->required();
    add_common(design, false);
    design->callback([&] { action = run_fb_design_dual; });

    CLI::App* sample = app.add_subcommand("sample", "generalized sampling operations");
    sample->require_subcommand(1);

    CLI::App* build = sample->add_subcommand("build", "build a reconstruction kit");
    build->add_option("--spec", cfg.spec_path, "sampling problem JSON")->required();
    add_common(build, true);
    build->callback([&] { action = run_sample_build; });

    CLI::App* crystal = sample->add_subcommand("demo-crystal", "crystallographic sampling demo");
    crystal->add_option("--spec", cfg.spec_path, "crystal spec JSON")->required();
    crystal->add_option("--mode", cfg.mode, "average or pointwise")
        ->check(CLI::IsMember({"average", "pointwise"}));
    crystal->add_option("--trials", cfg.trials, "number of reconstruction trials");
    add_common(crystal, true);
    crystal->callback([&] { action = run_demo_crystal; });

    CLI::App* dihedral = sample->add_subcommand("demo-dihedral", "dihedral model demo");
    dihedral->add_option("--q", cfg.q, "grid side");
    dihedral->add_option("--K", cfg.channels, "number of channels");
    dihedral->add_option("--mode", cfg.mode, "average or pointwise")
        ->check(CLI::IsMember({"average", "pointwise"}));
    dihedral->add_option("--trials", cfg.trials, "number of reconstruction trials");
    add_common(dihedral, true);
    dihedral->callback([&] { action = run_demo_dihedral; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action(cfg);
    } catch (const groupfb::RejectionError& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 3;
    } catch (const groupfb::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
