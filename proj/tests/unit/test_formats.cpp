#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "ddtea/csv.hpp"
#include "ddtea/run_config.hpp"
#include "ddtea/svg.hpp"

using namespace ddtea;

TEST_SUITE("formats") {

TEST_CASE("fmt_g17 round-trips doubles bit exactly") {
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-308, 1.7976931348623157e308, 0.0,
                           123456789.12345679, 5e7}) {
        double back = 0.0;
        REQUIRE(parse_double(fmt_g17(v), back));
        CHECK(back == v);
    }
}

TEST_CASE("parse_double rejects trailing garbage") {
    double v = 0.0;
    CHECK_FALSE(parse_double("1.5x", v));
    CHECK_FALSE(parse_double("", v));
    CHECK(parse_double("-1e8", v));
    CHECK(v == -1e8);
}

TEST_CASE("config parse, typed getters, serialize round trip") {
    const std::string text =
        "ddtea-config v1\n"
        "# a comment\n"
        "seed 42\n"
        "zeta_bias 1.5\n"
        "snr_db clean\n";
    const KeyValueConfig cfg = KeyValueConfig::parse(text);
    CHECK(cfg.get_u64("seed", 0) == 42);
    CHECK(cfg.get_double("zeta_bias", 0.0) == 1.5);
    CHECK(cfg.get_string("snr_db", "x") == "clean");
    CHECK(cfg.get_double("absent", 7.25) == 7.25);
    CHECK_FALSE(cfg.contains("absent"));

    const KeyValueConfig again = KeyValueConfig::parse(cfg.serialize());
    CHECK(again.entries() == cfg.entries());
}

TEST_CASE("config parse errors") {
    CHECK_THROWS_AS((void)KeyValueConfig::parse(""), parse_error);
    CHECK_THROWS_AS((void)KeyValueConfig::parse("not-a-header\nseed 1\n"), parse_error);
    CHECK_THROWS_AS((void)KeyValueConfig::parse("ddtea-config v1\nlonelykey\n"), parse_error);
    const KeyValueConfig cfg = KeyValueConfig::parse("ddtea-config v1\nseed abc\n");
    CHECK_THROWS_AS((void)cfg.get_u64("seed", 0), parse_error);
}

TEST_CASE("config set overwrites in place") {
    KeyValueConfig cfg = KeyValueConfig::parse("ddtea-config v1\na 1\nb 2\n");
    cfg.set("a", "9");
    CHECK(cfg.get_u64("a", 0) == 9);
    CHECK(cfg.entries().size() == 2);
    CHECK(cfg.entries()[0].first == "a");
}

TEST_CASE("SVG output is self-contained and one polyline per series") {
    SvgSeries a{.name = "mean", .x = {0, 1, 2}, .y = {0.5, 0.7, 0.9}};
    SvgSeries b{.name = "fit", .x = {0, 1, 2}, .y = {0.45, 0.72, 0.88}, .dashed = true};
    const std::vector<SvgSeries> series{a, b};
    std::ostringstream os;
    write_svg_chart(os, {.title = "t < 1 & done", .x_label = "x", .y_label = "y"}, series);
    const std::string svg = os.str();

    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("http://") == svg.find("http://www.w3.org/2000/svg"));  // only the namespace

    std::size_t polylines = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1)) {
        ++polylines;
    }
    CHECK(polylines == 2);

    // Text content must be escaped.
    CHECK(svg.find("t &lt; 1 &amp; done") != std::string::npos);
    CHECK(svg.find("t < 1 &") == std::string::npos);
}

}  // TEST_SUITE
