#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "sbnoise/io.hpp"

using namespace sbnoise;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
    for (double x : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 6.49e-26, 4.0585305154233986e13, -2.5e-308, 1.7976931348623157e308})
        CHECK(io::parse_double(io::format_double(x)) == x);
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK_THROWS_AS((void)io::parse_double(""), ConfigError);
    CHECK_THROWS_AS((void)io::parse_double("1.5x"), ConfigError);
    CHECK_THROWS_AS((void)io::parse_double("abc"), ConfigError);
}

TEST_CASE("CSV text re-emits byte for byte") {
    io::CsvTable t;
    t.header = {"a", "b"};
    t.rows = {{1.0 / 3.0, -2e-17}, {5.0, 6.02214076e23}};
    t.comments = {"integration aborted: test"};
    const std::string text = io::to_string(t);
    CHECK(text == "a,b\n0.33333333333333331,-2.0000000000000001e-17\n5,6.0221407599999999e+23\n# integration aborted: test\n");
    std::istringstream in(text);
    const io::CsvTable back = io::read_csv(in);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.comments == t.comments);
    CHECK(io::to_string(back) == text);
}

TEST_CASE("trajectory table layout") {
    Trajectory traj;
    traj.push_back(0.0, initial_superposition());
    traj.push_back(1e-9, DensityMatrix2::diagonal(0.25, 0.75));
    const io::CsvTable t = io::trajectory_table(traj);
    CHECK(io::to_string(io::CsvTable{t.header, {}, {}}) ==
          "t,re_rho00,im_rho00,re_rho01,im_rho01,re_rho10,im_rho10,re_rho11,im_rho11,trace_defect,herm_defect,purity\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<double>{0.0, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0});
    CHECK(t.rows[1][11] == 0.625);
}

TEST_CASE("file helpers report i/o failures") {
    const auto dir = std::filesystem::temp_directory_path() / "sbnoise_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "x.txt").string();
    io::write_file(path, "hello\n");
    CHECK(io::read_file(path) == "hello\n");
    CHECK_THROWS_AS((void)io::read_file((dir / "missing.txt").string()), IoError);
    CHECK_THROWS_AS(io::write_file((dir / "no" / "such" / "dir.txt").string(), "x"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("line chart markup") {
    const std::vector<io::Series> series{{"a <1>", {0.0, 1.0, 2.0}, {0.0, -1.0, 1.0}},
                                         {"b & c", {0.0, 2.0}, {0.5, NAN}}};
    const std::string svg = io::render_line_chart({"Title", "t (s)", "Re rho01"}, series);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(svg.find("a &lt;1&gt;") != std::string::npos);
    CHECK(svg.find("b &amp; c") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);  // zero line inside the y range
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
    // degenerate inputs still give a valid document
    const std::string empty = io::render_line_chart({"", "", ""}, {});
    CHECK(empty.find("</svg>") != std::string::npos);
    const std::string flat = io::render_line_chart({"", "", ""}, {{"x", {1.0}, {2.0}}});
    CHECK(flat.find("inf") == std::string::npos);
}
