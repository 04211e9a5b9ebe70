#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "wslab/decorations.hpp"
#include "wslab/grid.hpp"
#include "wslab/io.hpp"
#include "wslab/metrics.hpp"

using namespace wslab;

TEST_SUITE("io") {

TEST_CASE("g17 is the shortest exact decimal") {
    for (double v : {0.1, 1.0 / 3.0, 3.141592653589793, 1e-300, -2.5e17,
                     0.00069053396600248786}) {
        CHECK(std::strtod(g17(v).c_str(), nullptr) == v);
    }
    CHECK(g17(0.5) == "0.5");
    CHECK(g17(-1.0) == "-1");
    CHECK(g17(1e100) == "1e+100");
    CHECK(std::isnan(std::strtod(g17(std::nan("")).c_str(), nullptr)));
}

TEST_CASE("name hashing is stable") {
    // standard 64-bit FNV-1a vectors
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex8(0xdeadbeefcafebabeull) == "cafebabe");
    CHECK(hex8(0x1ull) == "00000001");
    CHECK(output_basename("ex32", "a") == "ex32_" + hex8(fnv1a64("a")));
    // distinct parameter echoes land in distinct files
    CHECK(output_basename("s", "p=1") != output_basename("s", "p=2"));
}

TEST_CASE("domain json: serialize, parse, serialize is a fixed point") {
    DecoratedSquareSpec spec = single_spec(Family::Ex32, 0.5, 2, 2);
    PlanarDomain dom = build_domain(spec);
    std::string j1 = domain_to_json(dom);
    PlanarDomain back = domain_from_json(j1);
    std::string j2 = domain_to_json(back);
    CHECK(j1 == j2);
    CHECK(back.landmarks.spec_echo == spec_canonical_echo(spec));
    // geometry survives; landmark structures are intentionally not carried
    CHECK(back.outer.size() == dom.outer.size());
    CHECK(back.holes.size() == dom.holes.size());
    CHECK(back.slits.size() == dom.slits.size());
    CHECK(back.landmarks.decorations.empty());
    CHECK(contains(back, {0.5, 0.5}));
}

TEST_CASE("domain json rejects malformed input") {
    CHECK_THROWS_AS((void)domain_from_json("not json at all"), BadFile);
    CHECK_THROWS_AS((void)domain_from_json("{\"kind\":\"other\"}"), BadFile);
    CHECK_THROWS_AS(
        (void)domain_from_json(
            "{\"kind\":\"planar-domain\",\"outer\":[[[0,0],[1]]]}"),
        BadFile);
    // well-formed file carrying impossible geometry: the geometric error
    // comes through untranslated
    CHECK_THROWS_AS((void)domain_from_json(
                        "{\"kind\":\"planar-domain\",\"outer\":[[[0,0],[1,1],"
                        "[1,0],[0,1]]]}"),
                    SpecInvalid);
}

TEST_CASE("dataset json round trip with defaults") {
    WsliceDataset ds;
    ds.x = {0.25, 0.5};
    ds.y = {0.75, 0.5};
    ds.C = 5.0;
    ds.alpha = 0.25;
    SliceRegion s;
    s.shape = {{0.4, 0.0}, {0.6, 0.0}, {0.6, 1.0}, {0.4, 1.0}};
    s.d_S = 0.2;
    s.label = "mid_0";
    ds.slices.push_back(s);
    std::string j1 = dataset_to_json(ds);
    WsliceDataset back = dataset_from_json(j1);
    CHECK(dataset_to_json(back) == j1);
    CHECK(back.C == 5.0);
    CHECK(back.alpha == 0.25);
    REQUIRE(back.slices.size() == 1);
    CHECK(back.slices[0].label == "mid_0");
    CHECK(back.slices[0].d_S == 0.2);
    REQUIRE(back.slices[0].shape.size() == 4);
    CHECK(back.slices[0].shape[2].x == 0.6);
    // C and alpha default when not spelled out
    WsliceDataset bare = dataset_from_json(
        "{\"kind\":\"wslice-dataset\",\"x\":[0,0],\"y\":[1,1],\"slices\":[]}");
    CHECK(bare.C == 10.0);
    CHECK(bare.alpha == 0.0);
    CHECK_THROWS_AS((void)dataset_from_json("{\"kind\":\"wslice-dataset\"}"),
                    BadFile);
    CHECK_THROWS_AS((void)dataset_from_json("[1,2,3]"), BadFile);
}

TEST_CASE("path json round trip") {
    PlanarDomain dom = make_domain({Polygon{{0, 0}, {2, 0}, {2, 1}, {0, 1}}});
    GridGraph g = build_grid(dom, {0, 0, 2, 1}, 0.1);
    PathEstimate pe = d_alpha_grid(g, {0.3, 0.5}, {1.7, 0.5}, 0.5);
    std::string j1 = path_to_json(pe);
    PathEstimate back = path_from_json(j1);
    CHECK(path_to_json(back) == j1);
    CHECK(back.alpha == pe.alpha);
    CHECK(back.value == pe.value);
    CHECK(back.kind == pe.kind);
    CHECK(back.vertices.size() == pe.vertices.size());
    CHECK_THROWS_AS((void)path_from_json("{\"kind\":\"planar-domain\"}"),
                    BadFile);
}

TEST_CASE("check report json carries verdicts, measurements and notes") {
    CheckReport rep;
    rep.scenario = "demo";
    auto& e = rep.add("first condition", Verdict::Fail);
    e.measured = {{"value", 1.5}, {"absent", std::nan("")}};
    e.note = "with a \"quoted\" note";
    rep.add("second condition", Verdict::Approx);
    std::string txt = check_report_to_json(rep);
    nlohmann::json j = nlohmann::json::parse(txt);
    CHECK(j["scenario"] == "demo");
    CHECK(j["overall"] == "fail");
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0]["verdict"] == "fail");
    CHECK(j["entries"][0]["measured"][0][1] == 1.5);
    CHECK(j["entries"][0]["measured"][1][1].is_null()); // NaN spells null
    CHECK(j["entries"][0]["note"] == "with a \"quoted\" note");
    CHECK(j["entries"][1]["verdict"] == "approx");
    CHECK(!j["entries"][1].contains("note"));
}

TEST_CASE("experiment json and csv") {
    ExperimentReport rep;
    rep.scenario = "demo";
    rep.params_echo = "p=1;q=2";
    rep.seed = 18446744073709551615ull; // max uint64 survives
    rep.columns = {"j", "value"};
    rep.rows = {{2.0, 0.5}, {3.0, std::nan("")}};
    rep.notes = "demo note";
    CheckReport cr;
    cr.scenario = "demo-check";
    cr.add("anything", Verdict::Pass);
    rep.checks.push_back(cr);
    rep.overall = Verdict::Pass;

    nlohmann::json j = nlohmann::json::parse(experiment_to_json(rep));
    CHECK(j["kind"] == "experiment");
    CHECK(j["scenario"] == "demo");
    CHECK(j["params"] == "p=1;q=2");
    CHECK(j["seed"] == 18446744073709551615ull);
    CHECK(j["overall"] == "pass");
    CHECK(j["columns"][1] == "value");
    CHECK(j["rows"][0][1] == 0.5);
    CHECK(j["rows"][1][1].is_null());
    CHECK(j["checks"][0]["scenario"] == "demo-check");

    std::string csv = experiment_to_csv(rep);
    CHECK(csv == "j,value\n2,0.5\n3,\n");
}

TEST_CASE("atomic writes and reads") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "wslab_io_test";
    fs::create_directories(dir);
    fs::path p = dir / "out.json";
    write_text_atomic(p.string(), "hello\n");
    CHECK(read_text(p.string()) == "hello\n");
    write_text_atomic(p.string(), "replaced\n"); // overwrite is atomic too
    CHECK(read_text(p.string()) == "replaced\n");
    CHECK(!fs::exists(p.string() + ".tmp"));
    CHECK_THROWS_AS((void)read_text((dir / "missing.json").string()), BadFile);
    CHECK_THROWS_AS(
        (void)write_text_atomic((dir / "no/such/dir/x").string(), "y"), BadFile);
    fs::remove_all(dir);
}

TEST_CASE("svg rendering stays well formed with overlays") {
    PlanarDomain dom = build_domain(single_spec(Family::Ex32, 0.5, 2, 2));
    SvgOptions opt;
    opt.draw_midlines = true;
    opt.overlay_regions = {Polygon{{1.0, 0.24}, {1.06, 0.24}, {1.06, 0.26},
                                   {1.0, 0.26}}};
    opt.overlay_points = {{1.01, 0.25}};
    std::string svg = domain_to_svg(dom, opt);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.rfind("</svg>") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    CHECK(svg.find("circle") != std::string::npos); // the overlay point
}

} // TEST_SUITE
