#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/testutil.hpp"
#include "voltspy/synthgen.hpp"
#include "voltspy/telemetry.hpp"

namespace fs = std::filesystem;
using namespace voltspy;

namespace {

const char* voltspy_bin() { return std::getenv("VOLTSPY_BIN"); }

int run_cmd(const std::string& args) {
    const std::string cmd = std::string(voltspy_bin()) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Small dataset on disk for CLI runs.
fs::path write_mini_dataset() {
    const fs::path dir = fs::temp_directory_path() / "voltspy_cli_test";
    fs::create_directories(dir);
    std::vector<ScenarioConfig> grid;
    uint64_t seq = 0;
    for (size_t vi : {0, 4})
        for (size_t si = 0; si < 3; ++si)
            for (size_t ri = 0; ri < 2; ++ri)
                for (size_t rep = 0; rep < 3; ++rep) {
                    ScenarioConfig cfg;
                    cfg.vehicle = vehicle_presets()[vi];
                    cfg.driver = style_profiles()[si];
                    cfg.driver_id = "d" + std::to_string(si);
                    cfg.route = route_presets()[ri];
                    cfg.occupancy = 1 + static_cast<int>(rep);
                    cfg.aux_w = 500.0 * static_cast<double>(rep);
                    cfg.noise_seed = seq++;
                    cfg.trip_id = "t" + std::to_string(seq);
                    grid.push_back(std::move(cfg));
                }
    const Dataset ds = generate_dataset(grid, 21);
    std::ofstream s(dir / "samples.csv"), l(dir / "labels.csv");
    write_samples_csv(ds, s);
    write_labels_csv(ds, l);
    return dir;
}

}  // namespace

TEST_CASE("cli: help and usage errors") {
    REQUIRE(voltspy_bin() != nullptr);
    CHECK(run_cmd("--help") == 0);
    CHECK(run_cmd("synth --help") == 0);
    CHECK(run_cmd("") == 2);  // missing subcommand

    const fs::path dir = write_mini_dataset();
    CHECK(run_cmd("attack --data " + dir.string() + " --objective bogus") == 2);
    CHECK(run_cmd("synth --out /tmp/voltspy_scale --scale huge") == 2);
    CHECK(run_cmd("defend --data " + dir.string() + " --objective occupancy") == 2);
}

TEST_CASE("cli: missing data is a data error (exit 1)") {
    REQUIRE(voltspy_bin() != nullptr);
    CHECK(run_cmd("attack --data /nonexistent_dir_xyz --objective style") == 1);
}

TEST_CASE("cli: attack writes result json and summary csv") {
    REQUIRE(voltspy_bin() != nullptr);
    const fs::path dir = write_mini_dataset();
    const fs::path out = dir / "results";
    fs::remove_all(out);
    const int rc = run_cmd("attack --data " + dir.string() +
                           " --objective vehicle --models dt --seed 7 --row-cap 1500 --out " +
                           out.string());
    CHECK(rc == 0);
    CHECK(fs::exists(out / "vehicle_dt.json"));
    CHECK(fs::exists(out / "summary.csv"));

    std::ifstream f(out / "summary.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "objective,kind,accuracy,macro_f1");
    std::string row;
    std::getline(f, row);
    CHECK(row.find("vehicle,dt,") == 0);
}

TEST_CASE("cli: attack rerun with the same seed is byte-identical") {
    REQUIRE(voltspy_bin() != nullptr);
    const fs::path dir = write_mini_dataset();
    const fs::path out1 = dir / "r1";
    const fs::path out2 = dir / "r2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    const std::string base = "attack --data " + dir.string() +
                             " --objective style --models dt --seed 11 --row-cap 1500 --out ";
    REQUIRE(run_cmd(base + out1.string()) == 0);
    REQUIRE(run_cmd(base + out2.string()) == 0);

    for (const char* name : {"summary.csv", "style_dt.json"}) {
        std::ifstream a(out1 / name), b(out2 / name);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
        CHECK(!sa.str().empty());
    }
}

TEST_CASE("cli: defend writes the sweep csv") {
    REQUIRE(voltspy_bin() != nullptr);
    const fs::path dir = write_mini_dataset();
    const fs::path out = dir / "sweep.csv";
    fs::remove(out);
    const int rc = run_cmd("defend --data " + dir.string() +
                           " --objective style --sizes 5,20 --models dt --seed 3 --row-cap 1200 "
                           "--out " +
                           out.string());
    CHECK(rc == 0);
    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    CHECK(header == "window_size,model_kind,accuracy,macro_f1");
    size_t rows = 0;
    std::string row;
    while (std::getline(f, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 2);
}
