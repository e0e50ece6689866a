#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "rlncoff/config.hpp"
#include "test_util.hpp"

namespace config = rlncoff::config;
namespace sim = rlncoff::sim;
using testutil::TempDir;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* kFullScenario =
    "# corridor setup\n"
    "[scenario]\n"
    "rsu_count = 6\n"
    "isd_m = 1000\n"
    "width_m = 8\n"
    "K = 12\n"
    "N = 18\n"
    "d = 3\n"
    "C = 3\n"
    "q = 2\n"
    "eaves_pos_m = 1500\n"
    "eaves_range_m = 450  # same footprint\n"
    "packet_len = 32\n"
    "trials = 2500\n"
    "seed = 99\n"
    "\n"
    "[channel]\n"
    "kind = disk\n"
    "eps = 0.05\n"
    "radius_m = 500\n";

}  // namespace

TEST_CASE("a full scenario file round-trips into the config struct") {
    TempDir dir;
    const auto file = dir.write("full.cfg", kFullScenario);
    const config::ParsedConfig parsed = config::read_config(file);
    const sim::ScenarioConfig cfg = config::load_scenario(parsed);
    CHECK(cfg.rsu_count == 6);
    CHECK(cfg.isd_m == 1000.0);
    CHECK(cfg.road_width_m == 8.0);
    CHECK(cfg.generation_size == 12);
    CHECK(cfg.transmissions_per_message == 18);
    CHECK(cfg.interleaved_messages == 3);
    CHECK(cfg.reset_area_span == 3);
    CHECK(cfg.field_order == 2);
    CHECK(cfg.eaves_pos_m == 1500.0);
    CHECK(cfg.eaves_range_m == 450.0);
    CHECK(cfg.packet_len == 32);
    CHECK(cfg.trials == 2500);
    CHECK(cfg.seed == 99);
    CHECK(cfg.channel.kind == sim::ChannelModel::Kind::Disk);
    CHECK(cfg.channel.eps == 0.05);
    CHECK(cfg.channel.radius_m == 500.0);
}

TEST_CASE("absent keys fall back to library defaults") {
    TempDir dir;
    const auto file = dir.write("partial.cfg", "[scenario]\nK = 8\nN = 12\n");
    const sim::ScenarioConfig cfg = config::load_scenario(config::read_config(file));
    CHECK(cfg.generation_size == 8);
    CHECK(cfg.transmissions_per_message == 12);
    const sim::ScenarioConfig defaults;
    CHECK(cfg.rsu_count == defaults.rsu_count);
    CHECK(cfg.isd_m == defaults.isd_m);
    CHECK(cfg.channel.eps == defaults.channel.eps);
}

TEST_CASE("missing file and malformed lines are diagnosed with locations") {
    TempDir dir;
    CHECK_THROWS_MATCHES(config::read_config(dir.path / "nope.cfg"), config::ConfigError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("nope.cfg")));

    const auto no_eq = dir.write("a.cfg", "[scenario]\nrsu_count 4\n");
    CHECK_THROWS_MATCHES(config::read_config(no_eq), config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("a.cfg:2") &&
                             ContainsSubstring("expected 'key = value'")));

    const auto orphan = dir.write("b.cfg", "rsu_count = 4\n");
    CHECK_THROWS_MATCHES(
        config::read_config(orphan), config::ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("before any section")));

    const auto bad_section = dir.write("c.cfg", "[general]\nx = 1\n");
    CHECK_THROWS_MATCHES(config::read_config(bad_section), config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("c.cfg:1") &&
                             ContainsSubstring("unknown section")));

    const auto unterminated = dir.write("d.cfg", "[scenario\n");
    CHECK_THROWS_MATCHES(
        config::read_config(unterminated), config::ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("unterminated section")));

    const auto duplicate = dir.write("e.cfg", "[scenario]\nK = 4\nK = 5\n");
    CHECK_THROWS_MATCHES(config::read_config(duplicate), config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("e.cfg:3") &&
                             ContainsSubstring("duplicate key 'K'")));
}

TEST_CASE("unknown and malformed keys are named") {
    TempDir dir;
    const auto unknown = dir.write("u.cfg", "[scenario]\ntrails = 10\n");
    CHECK_THROWS_MATCHES(config::load_scenario(config::read_config(unknown)),
                         config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("u.cfg:2") &&
                             ContainsSubstring("unknown key 'trails'")));

    const auto bad_int = dir.write("i.cfg", "[scenario]\ntrials = many\n");
    CHECK_THROWS_MATCHES(config::load_scenario(config::read_config(bad_int)),
                         config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("trials") &&
                             ContainsSubstring("not a valid non-negative integer")));

    const auto bad_num = dir.write("n.cfg", "[scenario]\nisd_m = 12e\n");
    CHECK_THROWS_AS(config::load_scenario(config::read_config(bad_num)),
                    config::ConfigError);
}

TEST_CASE("semantic errors surface as config errors") {
    TempDir dir;
    const auto zero_trials = dir.write("t.cfg", "[scenario]\ntrials = 0\n");
    CHECK_THROWS_MATCHES(
        config::load_scenario(config::read_config(zero_trials)), config::ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("trials")));

    const auto span = dir.write("s.cfg", "[scenario]\nrsu_count = 2\nC = 3\n");
    CHECK_THROWS_AS(config::load_scenario(config::read_config(span)),
                    config::ConfigError);
}

TEST_CASE("comments, blank lines and CRLF endings are tolerated") {
    TempDir dir;
    const auto file = dir.write("crlf.cfg",
                                "# header comment\r\n"
                                "\r\n"
                                "[scenario]\r\n"
                                "K = 7   # inline comment\r\n"
                                "N = 9\r\n");
    const sim::ScenarioConfig cfg = config::load_scenario(config::read_config(file));
    CHECK(cfg.generation_size == 7);
    CHECK(cfg.transmissions_per_message == 9);
}

TEST_CASE("table channels load their CSV relative to the config") {
    TempDir dir;
    dir.write("urban.csv",
              "distance_m,pep\n"
              "0,0.02\n"
              "300,0.10\n"
              "900,0.80\n");
    const auto file = dir.write("table.cfg",
                                "[scenario]\nK = 4\nN = 8\n"
                                "[channel]\nkind = table\nfile = urban.csv\n");
    const sim::ScenarioConfig cfg = config::load_scenario(config::read_config(file));
    REQUIRE(cfg.channel.kind == sim::ChannelModel::Kind::Table);
    REQUIRE(cfg.channel.table.size() == 3);
    CHECK(cfg.channel.pep_at(0.0) == 0.02);
    CHECK(cfg.channel.pep_at(1000.0) == 1.0);
}

TEST_CASE("channel table validation names the offending line") {
    TempDir dir;
    const auto bad_header = dir.write("h.csv", "distance,pep\n0,0.1\n");
    CHECK_THROWS_MATCHES(
        config::load_pep_table(bad_header), config::ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("header")));

    const auto bad_order = dir.write("o.csv", "distance_m,pep\n100,0.1\n50,0.2\n");
    CHECK_THROWS_MATCHES(config::load_pep_table(bad_order), config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("o.csv:3") &&
                             ContainsSubstring("strictly increasing")));

    const auto bad_pep = dir.write("p.csv", "distance_m,pep\n100,1.5\n");
    CHECK_THROWS_AS(config::load_pep_table(bad_pep), config::ConfigError);

    const auto bad_value = dir.write("v.csv", "distance_m,pep\n100,x\n");
    CHECK_THROWS_MATCHES(
        config::load_pep_table(bad_value), config::ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("malformed number")));

    const auto empty = dir.write("e.csv", "distance_m,pep\n");
    CHECK_THROWS_AS(config::load_pep_table(empty), config::ConfigError);
}

TEST_CASE("channel kind and key combinations are checked") {
    TempDir dir;
    const auto disk_file = dir.write(
        "df.cfg", "[channel]\nkind = disk\nfile = x.csv\n");
    CHECK_THROWS_MATCHES(config::load_scenario(config::read_config(disk_file)),
                         config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("'file' only applies")));

    const auto table_eps = dir.write(
        "te.cfg", "[channel]\nkind = table\nfile = x.csv\neps = 0.1\n");
    CHECK_THROWS_MATCHES(config::load_scenario(config::read_config(table_eps)),
                         config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("'eps' only applies")));

    const auto no_file = dir.write("nf.cfg", "[channel]\nkind = table\n");
    CHECK_THROWS_MATCHES(
        config::load_scenario(config::read_config(no_file)), config::ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("needs a 'file' key")));

    const auto bad_kind = dir.write("bk.cfg", "[channel]\nkind = fancy\n");
    CHECK_THROWS_MATCHES(config::load_scenario(config::read_config(bad_kind)),
                         config::ConfigError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("expected 'disk' or 'table'")));
}

TEST_CASE("sweep grids parse their axes and default to the scenario point") {
    TempDir dir;
    const auto swept = dir.write("sweep.cfg",
                                 std::string(kFullScenario) +
                                     "\n[sweep]\n"
                                     "q = 2, 256\n"
                                     "K = 10, 15, 20\n"
                                     "d = 1\n"
                                     "C = 2\n"
                                     "overhead = 0, 1, 2\n");
    const config::ParsedConfig parsed = config::read_config(swept);
    const sim::ScenarioConfig cfg = config::load_scenario(parsed);
    const rlncoff::sweep::Grid grid = config::load_grid(parsed, cfg);
    CHECK(grid.field_orders == std::vector<unsigned>{2, 256});
    CHECK(grid.generation_sizes == std::vector<std::size_t>{10, 15, 20});
    CHECK(grid.interleavings == std::vector<std::size_t>{1});
    CHECK(grid.reset_spans == std::vector<std::size_t>{2});
    CHECK(grid.overheads == std::vector<std::size_t>{0, 1, 2});
    CHECK(grid.point_count() == 18);

    SECTION("absent sweep section collapses to the scenario's own point") {
        const auto plain = dir.write("plain.cfg", kFullScenario);
        const config::ParsedConfig p2 = config::read_config(plain);
        const sim::ScenarioConfig c2 = config::load_scenario(p2);
        const rlncoff::sweep::Grid g2 = config::load_grid(p2, c2);
        CHECK(g2.point_count() == 1);
        CHECK(g2.field_orders == std::vector<unsigned>{2});
        CHECK(g2.overheads == std::vector<std::size_t>{6});  // N - K
    }
    SECTION("an explicitly empty axis empties the grid") {
        const auto empty = dir.write(
            "empty.cfg", std::string(kFullScenario) + "\n[sweep]\noverhead =\n");
        const config::ParsedConfig p3 = config::read_config(empty);
        const rlncoff::sweep::Grid g3 = config::load_grid(p3, config::load_scenario(p3));
        CHECK(g3.overheads.empty());
        CHECK(g3.point_count() == 0);
    }
    SECTION("list syntax errors are rejected") {
        const auto ragged = dir.write(
            "ragged.cfg", std::string(kFullScenario) + "\n[sweep]\nK = 10,,20\n");
        const config::ParsedConfig p4 = config::read_config(ragged);
        CHECK_THROWS_MATCHES(
            config::load_grid(p4, config::load_scenario(p4)), config::ConfigError,
            Catch::Matchers::MessageMatches(ContainsSubstring("empty list item")));
    }
}
