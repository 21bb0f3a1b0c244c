#include "dopkit/config.hpp"

#include "dopkit/errors.hpp"
#include "dopkit/real.hpp"

#include "doctest.h"

#include <cstdlib>
#include <string>

using namespace dopkit;

TEST_CASE("rationals parse exactly and reduce") {
    Rational r = parse_rational("1/2");
    CHECK(r.num == 1);
    CHECK(r.den == 2);
    CHECK(r.value() == 0.5);
    CHECK(r.str() == "1/2");

    r = parse_rational("3/6");
    CHECK(r.num == 1);
    CHECK(r.den == 2);

    r = parse_rational("2");
    CHECK(r.num == 2);
    CHECK(r.den == 1);

    r = parse_rational("-2/-4");
    CHECK(r.num == 1);
    CHECK(r.den == 2);

    CHECK_THROWS_AS(parse_rational("0.5"), config_error);
    CHECK_THROWS_AS(parse_rational("1e-1"), config_error);
    CHECK_THROWS_AS(parse_rational("1/0"), config_error);
    CHECK_THROWS_AS(parse_rational("a/b"), config_error);
    CHECK_THROWS_AS(parse_rational("1/2/3"), config_error);
    CHECK_THROWS_AS(parse_rational(""), config_error);
}

TEST_CASE("k is the exact rational multiple of N") {
    RunConfig cfg;
    cfg.c = parse_rational("1/2");
    CHECK(cfg.k_of(10) == 5);
    CHECK_THROWS_AS(cfg.k_of(7), config_error);
    cfg.c = parse_rational("2/5");
    CHECK(cfg.k_of(25) == 10);
    CHECK_THROWS_AS(cfg.k_of(24), config_error);
}

TEST_CASE("config documents parse with precise diagnostics") {
    RunConfig cfg = parse_config(R"({
        "weight": {"kind": "krawtchouk", "p": 0.7},
        "N": [10, 20],
        "c": "1/2",
        "grid_size": 50,
        "seed": 42,
        "format": "json"
    })");
    CHECK(cfg.weight.kind == WeightSpec::Kind::Krawtchouk);
    CHECK(cfg.weight.p == 0.7);
    REQUIRE(cfg.N_values.size() == 2);
    CHECK(cfg.N_values[1] == 20);
    CHECK(cfg.c.num == 1);
    CHECK(cfg.seed == 42);

    // malformed JSON names the position
    try {
        parse_config("{\n  \"N\": 10,\n  oops\n}");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config(R"({"mystery": 1})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"c": 0.5})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"c": "2/2"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"N": 10, "c": "1/3"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"format": "xml"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"weight": {"kind": "laguerre"}})"), config_error);
    CHECK_THROWS_AS(parse_config(R"([1, 2])"), config_error);
}

TEST_CASE("the summary embeds every resolved field") {
    RunConfig cfg = parse_config(R"({"weight": {"kind": "hahn", "alpha": 2, "beta": 3},
                                     "N": 12, "c": "1/3", "seed": 9})");
    std::string s = config_summary(cfg);
    CHECK(s.find("\"seed\":9") != std::string::npos);
    CHECK(s.find("\"c\":\"1/3\"") != std::string::npos);
    CHECK(s.find("hahn") != std::string::npos);
    CHECK(s.find("\"alpha\":2") != std::string::npos);
    CHECK(config_summary(cfg) == s);   // stable serialization
}

TEST_CASE("precision override comes from the environment") {
    unsetenv("DOPKIT_PRECISION_BITS");
    CHECK(env_precision_bits() == 0);
    setenv("DOPKIT_PRECISION_BITS", "256", 1);
    CHECK(env_precision_bits() == 256);
    setenv("DOPKIT_PRECISION_BITS", "300", 1);
    CHECK(env_precision_bits() == 300);   // normalized later by the ladder
    setenv("DOPKIT_PRECISION_BITS", "busted", 1);
    CHECK_THROWS_AS(env_precision_bits(), config_error);
    setenv("DOPKIT_PRECISION_BITS", "4096", 1);
    CHECK_THROWS_AS(env_precision_bits(), config_error);
    unsetenv("DOPKIT_PRECISION_BITS");
}

TEST_CASE("precision rungs are canonical") {
    CHECK(normalize_precision_bits(100) == 128);
    CHECK(normalize_precision_bits(256) == 256);
    CHECK(normalize_precision_bits(300) == 512);
    CHECK(normalize_precision_bits(1024) == 1024);
    CHECK_THROWS_AS(normalize_precision_bits(2048), std::invalid_argument);
}
