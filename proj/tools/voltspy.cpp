#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "voltspy/attacks.hpp"
#include "voltspy/csvio.hpp"
#include "voltspy/shield.hpp"
#include "voltspy/synthgen.hpp"
#include "voltspy/telemetry.hpp"

namespace fs = std::filesystem;
using namespace voltspy;

namespace {

Dataset load_dataset(const std::string& data_dir) {
    const fs::path samples = fs::path(data_dir) / "samples.csv";
    const fs::path labels = fs::path(data_dir) / "labels.csv";
    std::ifstream sf(samples), lf(labels);
    if (!sf) throw DataError("cannot open " + samples.string());
    if (!lf) throw DataError("cannot open " + labels.string());
    return parse_trip_csv(sf, lf);
}

std::vector<ModelKind> parse_models(const std::string& list) {
    std::vector<ModelKind> kinds;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        kinds.push_back(model_kind_from_name(item));
    }
    if (kinds.empty()) throw UsageError("no model kinds given");
    return kinds;
}

std::vector<Objective> parse_objectives(const std::string& list) {
    if (list == "all") return all_objectives();
    std::vector<Objective> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(objective_from_name(item));
    }
    if (out.empty()) throw UsageError("no objectives given");
    return out;
}

std::vector<size_t> parse_sizes(const std::string& list) {
    std::vector<size_t> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto v = parse_long(item);
        if (!v || *v < 1) throw UsageError("bad window size '" + item + "'");
        out.push_back(static_cast<size_t>(*v));
    }
    if (out.empty()) throw UsageError("no window sizes given");
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
}

int cmd_synth(const std::string& out_dir, const std::string& scale, uint64_t seed) {
    if (scale != "desk" && scale != "full")
        throw UsageError("scale must be 'desk' or 'full', got '" + scale + "'");
    fs::create_directories(out_dir);

    const auto grid = scale == "desk" ? desk_grid() : full_grid();
    const Dataset ds = generate_dataset(grid, seed);

    {
        std::ofstream f(fs::path(out_dir) / "samples.csv", std::ios::binary);
        if (!f) throw DataError("cannot write samples.csv under " + out_dir);
        write_samples_csv(ds, f);
    }
    {
        std::ofstream f(fs::path(out_dir) / "labels.csv", std::ios::binary);
        if (!f) throw DataError("cannot write labels.csv under " + out_dir);
        write_labels_csv(ds, f);
    }
    write_file(fs::path(out_dir) / "presets.json", presets_json());

    std::cout << ds.trips.size() << " trips written to " << out_dir << "\n";
    return 0;
}

int cmd_attack(const std::string& data_dir, const std::string& objectives,
               const std::string& models, uint64_t seed, bool balance, double fraction,
               const std::string& out_dir, size_t row_cap) {
    const auto objs = parse_objectives(objectives);
    const auto kinds = parse_models(models);
    const Dataset ds = load_dataset(data_dir);

    fs::create_directories(out_dir);
    std::string summary = "objective,kind,accuracy,macro_f1\n";

    for (Objective obj : objs) {
        AttackOptions opt;
        opt.seed = seed;
        opt.balance = balance;
        opt.row_cap = row_cap;
        const auto spec = canonical_spec(obj, fraction);
        const auto results = run_attack(ds, spec, kinds, opt);
        for (const auto& r : results) {
            const std::string name =
                std::string(objective_name(obj)) + "_" + model_kind_name(r.kind);
            write_file(fs::path(out_dir) / (name + ".json"), r.to_json());
            summary += std::string(objective_name(obj)) + "," + model_kind_name(r.kind) + "," +
                       format_double(r.report.accuracy) + "," + format_double(r.report.macro_f1) +
                       "\n";
            std::cout << name << ": accuracy=" << format_double(r.report.accuracy)
                      << " macro_f1=" << format_double(r.report.macro_f1) << "\n";
            if (balance) {
                std::cout << "  balanced train histogram:";
                for (const auto& [cls, count] : r.train_histogram)
                    std::cout << " " << cls << "=" << count;
                std::cout << "\n";
            }
        }
    }
    write_file(fs::path(out_dir) / "summary.csv", summary);
    return 0;
}

int cmd_defend(const std::string& data_dir, const std::string& objective,
               const std::string& sizes_list, const std::string& models, uint64_t seed,
               const std::string& out_path, size_t row_cap) {
    const Objective obj = objective_from_name(objective);
    if (obj != Objective::style && obj != Objective::vehicle)
        throw UsageError("defend: objective must be style or vehicle (per-sample flow)");
    const auto kinds = parse_models(models);
    const auto sizes = parse_sizes(sizes_list);
    const Dataset ds = load_dataset(data_dir);

    const SweepResult res = sweep(ds, obj, sizes, kinds, seed, row_cap);
    if (!out_path.empty()) {
        if (fs::path(out_path).has_parent_path())
            fs::create_directories(fs::path(out_path).parent_path());
        write_file(out_path, res.to_csv());
    }
    std::cout << res.to_csv();

    const bool has10 = std::count(res.sizes.begin(), res.sizes.end(), 10) > 0;
    const bool has100 = std::count(res.sizes.begin(), res.sizes.end(), 100) > 0;
    const bool has_rf =
        std::find(kinds.begin(), kinds.end(), ModelKind::RF) != kinds.end();
    if (has10 && has100 && has_rf) {
        const double a10 = res.accuracy_at(10, ModelKind::RF);
        const double a100 = res.accuracy_at(100, ModelKind::RF);
        std::cout << "rf accuracy size10=" << format_double(a10)
                  << " size100=" << format_double(a100)
                  << " ratio=" << format_double(a10 > 0.0 ? a100 / a10 : 0.0) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voltspy: battery-trace inference attacks, countermeasure sweeps and a "
                 "synthetic trace generator"};
    app.require_subcommand(1);

    uint64_t seed = 42;

    auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    synth->add_option("--seed", seed, "master seed")->capture_default_str();
    std::string synth_out = "data";
    std::string scale = "desk";
    synth->add_option("--out", synth_out, "output directory")->capture_default_str();
    synth->add_option("--scale", scale, "desk (6300 trips) or full (42525 trips)")
        ->capture_default_str();

    auto* attack = app.add_subcommand("attack", "run inference attacks on a dataset");
    attack->add_option("--seed", seed, "master seed")->capture_default_str();
    std::string data_dir;
    std::string objectives = "all";
    std::string models = "dt,knn,mlp,rf";
    std::string attack_out = "results";
    bool balance = false;
    double fraction = 0.2;
    size_t row_cap = 25000;
    attack->add_option("--data", data_dir, "dataset directory (samples.csv, labels.csv)")
        ->required();
    attack->add_option("--objective", objectives, "comma list or 'all'")->capture_default_str();
    attack->add_option("--models", models, "comma list of dt,knn,mlp,rf")->capture_default_str();
    attack->add_option("--out", attack_out, "results directory")->capture_default_str();
    attack->add_flag("--balance", balance, "undersample training rows to class balance");
    attack->add_option("--fraction", fraction, "head/tail region fraction")
        ->capture_default_str();
    attack->add_option("--row-cap", row_cap, "stratified cap on feature rows before splitting")
        ->capture_default_str();

    auto* defend = app.add_subcommand("defend", "countermeasure sweep over aggregation windows");
    defend->add_option("--seed", seed, "master seed")->capture_default_str();
    std::string defend_objective = "style";
    std::string sizes = "10,20,30,40,50,60,70,80,90,100";
    std::string defend_models = "rf";
    std::string defend_out = "sweep.csv";
    defend->add_option("--data", data_dir, "dataset directory")->required();
    defend->add_option("--objective", defend_objective, "style or vehicle")
        ->capture_default_str();
    defend->add_option("--sizes", sizes, "comma list of window sizes")->capture_default_str();
    defend->add_option("--models", defend_models, "comma list of dt,knn,mlp,rf")
        ->capture_default_str();
    defend->add_option("--out", defend_out, "sweep csv path")->capture_default_str();
    defend->add_option("--row-cap", row_cap, "row budget per sweep point")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_out, scale, seed);
        if (attack->parsed())
            return cmd_attack(data_dir, objectives, models, seed, balance, fraction, attack_out,
                              row_cap);
        if (defend->parsed())
            return cmd_defend(data_dir, defend_objective, sizes, defend_models, seed, defend_out,
                              row_cap);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
