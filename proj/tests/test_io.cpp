#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "contig.hpp"
#include "contig/io.hpp"

using namespace contig;
using contig::io::json;

TEST_CASE("complex documents round-trip")
{
    for (const auto& c : {torus_complex(), pinched_complex(), boundary_complex(2), point_complex(),
                          make_complex(5, {{0, 1}, {2, 3, 4}})}) {
        const auto j = io::complex_to_json(c);
        CHECK(io::complex_from_json(j) == c);
        CHECK(io::complex_from_json(json::parse(j.dump())) == c);
        CHECK(j.at("facets").size() == c.maximal_simplices().size());
    }
    const auto j = io::complex_to_json(boundary_complex(2));
    CHECK(j.dump() == R"({"facets":[[0,1],[0,2],[1,2]],"vertex_count":3})");
}

TEST_CASE("malformed complex documents")
{
    CHECK_THROWS_AS(io::complex_from_json(json::parse(R"({"facets":[[0,1]]})")), ParseError);
    CHECK_THROWS_AS(io::complex_from_json(json::parse(R"({"vertex_count":2,"facets":[["a"]]})")), ParseError);
    CHECK_THROWS_AS(io::complex_from_json(json::parse(R"({"vertex_count":2,"facets":[[0,5]]})")), InvalidArgument);
    CHECK_THROWS_AS(io::complex_from_file("/nonexistent/complex.json"), ParseError);

    const auto path = std::filesystem::temp_directory_path() / "contig_bad_complex.json";
    std::ofstream(path) << "{not json";
    CHECK_THROWS_AS(io::complex_from_file(path.string()), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("decimal text round-trips")
{
    for (double x : {0.0, 1.0, 0.1, 1.0 / 3.0, std::sqrt(2.0), 1e-300, 123456789.125})
        CHECK(io::parse_decimal(io::decimal(x)) == x);
    CHECK(io::decimal(0.5) == "0.5");
    CHECK(io::decimal(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::parse_decimal(" +2.5 ") == 2.5);
    CHECK_THROWS_AS(io::parse_decimal("2.5x"), ParseError);
    CHECK_THROWS_AS(io::parse_decimal(""), ParseError);
}

TEST_CASE("numeric csv")
{
    const auto rows = io::parse_numeric_csv("# header\n0,1\n\n 1.5 , 2\r\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == std::vector<double>{1.5, 2});
    CHECK_THROWS_AS(io::parse_numeric_csv("1,2\n3,,4\n"), ParseError);
    CHECK_THROWS_AS(io::parse_numeric_csv("1,abc\n"), ParseError);

    const auto dir = std::filesystem::temp_directory_path();
    const auto ragged = dir / "contig_ragged.csv";
    std::ofstream(ragged) << "0,0\n1\n";
    CHECK_THROWS_AS(io::points_from_csv(ragged.string()), ParseError);
    const auto nonsquare = dir / "contig_nonsquare.csv";
    std::ofstream(nonsquare) << "0,1\n1,0\n2,2\n";
    CHECK_THROWS_AS(io::distance_matrix_from_csv(nonsquare.string()), ParseError);
    const auto good = dir / "contig_square.csv";
    std::ofstream(good) << "0,1,2\n1,0,1\n2,1,0\n";
    const auto m = io::distance_matrix_from_csv(good.string());
    CHECK(m.size() == 3);
    CHECK(m(0, 2) == 2);
    for (const auto& p : {ragged, nonsquare, good})
        std::filesystem::remove(p);
}

TEST_CASE("barcode documents")
{
    Barcode b;
    b.degree = 0;
    b.bars = {{0, 1.5}, {0, kInfinity}};
    b.grades = {0, 1.5};
    const auto j = io::barcode_to_json(b);
    CHECK(j["bars"][0][1] == "1.5");
    CHECK(j["bars"][1][1].is_null());
    CHECK(j["grades"][1] == "1.5");
    CHECK(io::barcode_text(b) == "H0\n  [0, 1.5)\n  [0, inf)\n");
}

TEST_CASE("estimator reports are reproducible")
{
    EstimatorConfig cfg;
    cfg.schedule = {100, 400};
    cfg.walk.seed = 4;
    const io::EstimatorReportInfo info{"torus_T", 8, true};
    const auto a = io::estimator_to_json(estimate_class_count(torus_complex(), 8, cfg), cfg, info).dump();
    cfg.workers = 3;
    const auto b = io::estimator_to_json(estimate_class_count(torus_complex(), 8, cfg), cfg, info).dump();
    CHECK(a == b);
    const auto j = json::parse(a);
    CHECK(!j.contains("wall_time"));
    CHECK(j["class_representatives"].size() == j["class_count"].get<std::size_t>());
    CHECK(j["step_soundness"] == "contiguous-steps");
}
