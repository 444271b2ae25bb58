#include <bcp/config.hpp>
#include <bcp/io.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace bcp;

TEST(Config, JsonRoundTrip)
{
    RunConfig c;
    c.cocycle.kind = CocycleKind::mollified_cup;
    c.cocycle.width = 0.1;
    c.kernel_nodes = 48;
    c.seed = 7;
    c.tolerance_overrides["r_bound"] = 1e-3;
    c.init_values = {0.5, -0.5};
    c.output_dir = "somewhere";
    c.threads = 3;
    RunConfig d;
    apply_config_json(d, config_to_json(c));
    EXPECT_EQ(config_to_json(d), config_to_json(c));
    EXPECT_EQ(config_hash(d), config_hash(c));
}

TEST(Config, HashIgnoresOutputAndThreads)
{
    RunConfig a, b;
    b.output_dir = "elsewhere";
    b.threads = 8;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    b.seed = 43;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, RejectsUnknownKeysAndBadValues)
{
    RunConfig c;
    EXPECT_THROW(apply_config_json(c, json{{"kernel_node", 3}}), invalid_argument);
    EXPECT_THROW(apply_config_json(c, json{{"cocycle", {{"kind", "cup_orientation"}, {"wdth", 1}}}}), invalid_argument);
    EXPECT_THROW(apply_config_json(c, json{{"seed", "abc"}}), invalid_argument);
    RunConfig bad;
    bad.kernel_nodes = 2;
    EXPECT_THROW(validate_config(bad), invalid_argument);
    bad = RunConfig{};
    bad.tolerance_overrides["not_a_check"] = 1;
    EXPECT_THROW(validate_config(bad), invalid_argument);
    EXPECT_NO_THROW(validate_config(RunConfig{}));
}

TEST(Config, LoadFromFile)
{
    auto path = std::filesystem::temp_directory_path() / "bcp_test_config.json";
    std::ofstream(path) << R"({"cocycle": {"kind": "zero"}, "check_grid": 128, "init_values": [1, 0]})";
    RunConfig c = load_config(path.string());
    EXPECT_EQ(c.cocycle.kind, CocycleKind::zero);
    EXPECT_EQ(c.check_grid, 128);
    EXPECT_EQ(effective_init(c), std::make_pair(0.5, -0.5));
    c.general_init = true;
    EXPECT_EQ(effective_init(c), std::make_pair(1.0, 0.0));
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path.string()), invalid_argument);
}

TEST(Config, OutputDirFromEnvironment)
{
    ::setenv(output_dir_env, "from_env", 1);
    EXPECT_EQ(default_output_dir(), "from_env");
    ::unsetenv(output_dir_env);
    EXPECT_EQ(default_output_dir(), "bcp_out");
}

TEST(Io, ReportSchema)
{
    CheckReport r;
    r.check_id = "x";
    r.max_residual = NAN;
    r.tolerance = 1e-3;
    r.add("k", 0.5);
    json j = report_to_json(r, "0123456789abcdef");
    for (const char* key : {"check_id", "passed", "max_residual", "tolerance", "sample_count", "seed", "config_hash",
                            "runtime_ms", "metadata"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["max_residual"].is_null());
    EXPECT_EQ(j["metadata"]["k"], "0.5");
}
