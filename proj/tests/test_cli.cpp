#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "measinv/cli.hpp"
#include "measinv/io.hpp"
#include "oracle.hpp"

using namespace measinv;
using cplx = std::complex<double>;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("measinv_test_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  fs::path write(const std::string& file, const std::string& content) const {
    write_text_file(dir / file, content);
    return dir / file;
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kComplexHalves = R"({"group": "Z2", "atoms": [
  {"coords": [0], "re": 0.5, "im": 0},
  {"coords": [1], "re": 0, "im": 0.5}]})";

const char* kDominant = R"({"group": "Z2", "atoms": [
  {"coords": [0], "re": 0.8, "im": 0}, {"coords": [1], "re": 0.2, "im": 0}]})";

const char* kHalf = R"({"group": "Z2", "atoms": [
  {"coords": [0], "re": 0.5, "im": 0}, {"coords": [1], "re": 0.5, "im": 0}]})";

const char* kLattice = R"({"group": "Z^2", "atoms": [
  {"coords": [0, 0], "re": 0.8}, {"coords": [1, 0], "re": 0.1}, {"coords": [0, 1], "re": 0.1}]})";

const char* kDirac = R"({"group": "Z2^3", "atoms": [{"coords": [0, 0, 0], "re": 1, "im": 0}]})";

json read_json(const fs::path& p) { return json::parse(read_text_file(p)); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("group grammar") {
    CHECK(parse_group("Z2^4") == GroupSpec::finite_product({2, 2, 2, 2}));
    CHECK(parse_group("Z6xZ4") == GroupSpec::finite_product({6, 4}));
    CHECK(parse_group("Z^2") == GroupSpec::lattice(2));
    CHECK(parse_group("Z") == GroupSpec::lattice(1));
    CHECK(parse_group("Z2^2xZ3") == GroupSpec::finite_product({2, 2, 3}));
    for (const char* s : {"Z2^4", "Z6xZ4", "Z^2", "Z2^2xZ3", "Z32"}) CHECK(parse_group(s).to_string() == s);
  }

  TEST_CASE("group grammar errors carry a column") {
    for (const char* s : {"", "Q2", "Z2x", "Z2^", "Zx2", "Z^0", "Z2 ", "Z2^4y"}) {
      try {
        parse_group(s);
        FAIL("expected a parse error for ", s);
      } catch (const ParseError& e) {
        CHECK(e.kind() == ErrorKind::Parse);
      }
    }
    try {
      parse_group("Z6xQ4");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 4);
    }
  }

  TEST_CASE("measure round trip is bit exact") {
    oracle::Rng rng(71);
    for (const auto& g : {GroupSpec::finite_product({6, 4}), GroupSpec::lattice(3), GroupSpec::finite_product({2, 2, 2, 2})}) {
      for (int t = 0; t < 50; ++t) {
        const auto mu = oracle::random_measure(rng, g, 6, rng.uniform(0.001, 3.0));
        const auto back = parse_measure(serialize_measure(mu));
        REQUIRE(back.support_size() == mu.support_size());
        for (std::size_t i = 0; i < mu.support_size(); ++i) {
          CHECK(back.atoms()[i].element == mu.atoms()[i].element);
          CHECK(std::bit_cast<std::uint64_t>(back.atoms()[i].amplitude.real()) ==
                std::bit_cast<std::uint64_t>(mu.atoms()[i].amplitude.real()));
          CHECK(std::bit_cast<std::uint64_t>(back.atoms()[i].amplitude.imag()) ==
                std::bit_cast<std::uint64_t>(mu.atoms()[i].amplitude.imag()));
        }
        CHECK(serialize_measure(back) == serialize_measure(mu));
      }
    }
  }

  TEST_CASE("measure parse errors") {
    try {
      parse_measure("{\"group\": \"Z2\",\n \"atoms\": [ {\"coords\": [0], \"re\": 1,, } ]}");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() > 1);
    }
    try {
      parse_measure(R"({"group": "Z2", "atoms": [{"coords": [0], "re": 1}, {"coords": [1, 0], "re": 1}]})");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("atom 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_measure(R"({"atoms": []})"), ParseError);
    CHECK_THROWS_AS(parse_measure(R"({"group": "Z2", "atoms": [{"coords": [0.5], "re": 1}]})"), ParseError);
    CHECK_THROWS_AS(parse_measure(R"({"group": "Z2", "atoms": [{"coords": [0], "re": "x"}]})"), ParseError);
  }

  TEST_CASE("number formatting") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
  }

  TEST_CASE("spectrum csv layout") {
    const auto csv = spectrum_csv(transform(parse_measure(kDominant)));
    const std::string low = format_double(0.8 - 0.2);  // 0.6000000000000001
    CHECK(csv == "# exact=true certified_min=" + low + " certified_max_gap=0\ng0,re,im,modulus\n0,1,0,1\n1," + low +
                     ",0," + low + "\n");
  }
}

TEST_SUITE("cli") {
  TEST_CASE("transform") {
    Scratch s("transform");
    const auto halves = s.write("halves.json", kComplexHalves);
    const auto r = run({"transform", halves.string(), "--out", (s.dir / "out").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("delta_lower=0.7071067811865476") != std::string::npos);
    CHECK(fs::exists(s.dir / "out" / "spectrum.csv"));
    const auto m = read_json(s.dir / "out" / "manifest.json");
    CHECK(m["command"] == "transform");
    CHECK(m["inputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(m["status"] == "ok");

    const auto dirac = s.write("dirac.json", kDirac);
    const auto d = run({"transform", dirac.string(), "--out", (s.dir / "d").string()});
    CHECK(d.out.find("delta_lower=1 ") != std::string::npos);

    const auto bad = s.write("bad.json", R"({"group": "Z2", "atoms": [{"coords": [0, 1], "re": 1}]})");
    const auto b = run({"transform", bad.string(), "--out", (s.dir / "b").string()});
    CHECK(b.code == kExitParse);
    CHECK(b.err.find("atom 0") != std::string::npos);
  }

  TEST_CASE("transform on a lattice refines or uses the given mesh") {
    Scratch s("transform_lattice");
    const auto lat = s.write("lat.json", kLattice);
    const auto r = run({"transform", lat.string(), "--out", (s.dir / "a").string(), "--mesh", "64"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("exact=false points=4096") != std::string::npos);
    const auto budget = run({"transform", lat.string(), "--out", (s.dir / "b").string(), "--max-mesh", "8"});
    CHECK(budget.code == kExitFailure);
    CHECK(budget.err.find("BudgetExceeded") != std::string::npos);
  }

  TEST_CASE("invert") {
    Scratch s("invert");
    const auto dom = s.write("dom.json", kDominant);
    const auto r = run({"invert", dom.string(), "--method", "neumann", "--out", (s.dir / "n").string()});
    CHECK(r.code == kExitOk);
    const auto j = read_json(s.dir / "n" / "inversion.json");
    CHECK(j["method"] == "neumann");
    CHECK(std::abs(j["inverse_norm"].get<double>() - 5.0 / 3.0) <= 1e-8);
    CHECK(std::abs(j["guarantee"].get<double>() - 5.0 / 3.0) <= 1e-12);
    CHECK(j["truncated"] == true);
    const auto inverse = parse_measure(j["inverse"].dump());
    CHECK(inverse.support_size() == 2);

    const auto half = s.write("half.json", kHalf);
    const auto na = run({"invert", half.string(), "--method", "neumann", "--out", (s.dir / "h").string()});
    CHECK(na.code == kExitNotApplicable);
    CHECK(na.err.find("dominant-atom") != std::string::npos);
    const auto sing = run({"invert", half.string(), "--method", "dense", "--out", (s.dir / "s").string()});
    CHECK(sing.code == kExitInfeasible);

    const auto halves = s.write("halves.json", kComplexHalves);
    const auto d = run({"invert", halves.string(), "--method", "dense", "--out", (s.dir / "d").string()});
    CHECK(d.code == kExitOk);
    CHECK(std::abs(read_json(s.dir / "d" / "inversion.json")["inverse_norm"].get<double>() - 2.0) <= 1e-12);

    const auto a = run({"invert", halves.string(), "--out", (s.dir / "a").string()});
    CHECK(a.code == kExitOk);
    CHECK(read_json(s.dir / "a" / "inversion.json")["method"] == "dense");
    const auto lat = s.write("lat.json", kLattice);
    const auto l = run({"invert", lat.string(), "--out", (s.dir / "l").string()});
    CHECK(l.code == kExitOk);
    CHECK(read_json(s.dir / "l" / "inversion.json")["method"] == "neumann");
  }

  TEST_CASE("bounds") {
    Scratch s("bounds");
    const auto halves = s.write("halves.json", kComplexHalves);
    const auto r = run({"bounds", halves.string(), "--out", (s.dir / "h2").string()});
    CHECK(r.code == kExitOk);
    const auto j = read_json(s.dir / "h2" / "report.json");
    for (const auto& v : j["verdicts"]) {
      if (v["theorem"] == "qualitative") CHECK(v["applies"] == true);
      if (v["theorem"] == "self_convolution") {
        CHECK(v["applies"] == false);
        CHECK(v["predicted"].is_null());
      }
    }

    const auto dirac = s.write("dirac.json", kDirac);
    CHECK(run({"bounds", dirac.string(), "--out", (s.dir / "d").string()}).code == kExitOk);
    const auto dj = read_json(s.dir / "d" / "report.json");
    for (const auto& v : dj["verdicts"]) {
      if (v["applies"] == true && !v["predicted"].is_null()) CHECK(v["predicted"].get<double>() == 1.0);
    }

    const auto lat = s.write("lat.json", kLattice);
    CHECK(run({"bounds", lat.string(), "--delta-from", "grid", "--out", (s.dir / "l").string()}).code == kExitOk);
    bool seen = false;
    const auto lj = read_json(s.dir / "l" / "report.json");
    for (const auto& v : lj["verdicts"]) {
      if (v["theorem"] == "independent_support") {
        seen = true;
        CHECK(v["applies"] == true);
        // 1 / (2 delta - 1) at the certified delta, which is within 1e-3 of 0.6
        CHECK(std::abs(v["predicted"].get<double>() - 5.0) <= 0.1);
        CHECK(v["predicted"].get<double>() >= 5.0);
      }
    }
    CHECK(seen);
    CHECK(run({"bounds", lat.string(), "--delta-from", "exact", "--out", (s.dir / "x").string()}).code == kExitUsage);
  }

  TEST_CASE("sweep") {
    Scratch s("sweep");
    const auto r = run({"sweep", "--group", "Z2", "--deltas", "1", "--seed", "3", "--out", (s.dir / "a").string()});
    CHECK(r.code == kExitOk);
    const auto csv = read_text_file(s.dir / "a" / "sweep.csv");
    CHECK(csv.starts_with("delta,best_norm,latw_bound,nikolski_bound,seed,restarts\n"));
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::vector<double> cells;
    std::istringstream fields(row);
    for (std::string f; std::getline(fields, f, ',');) cells.push_back(std::stod(f));
    REQUIRE(cells.size() == 6);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(cells[static_cast<std::size_t>(i)] - 1.0) <= 1e-12);

    const auto two = run({"sweep", "--group", "Z2", "--deltas", "0.8", "--seed", "3", "--out", (s.dir / "b").string()});
    CHECK(two.code == kExitOk);
    const auto body = read_text_file(s.dir / "b" / "sweep.csv");
    CHECK(body.find("\n0.8,") != std::string::npos);
    CHECK(body.find(",1.6666666666666665,3.571428571428568,3,4\n") != std::string::npos);

    CHECK(run({"sweep", "--group", "Z2", "--deltas", "", "--seed", "3", "--out", (s.dir / "c").string()}).code ==
          kExitUsage);
    CHECK(run({"sweep", "--group", "Z2", "--seed", "3", "--out", (s.dir / "c").string()}).code == kExitUsage);
    CHECK(run({"sweep", "--group", "Z2", "--deltas", "0.8", "--out", (s.dir / "c").string()}).code == kExitUsage);
  }

  TEST_CASE("sweep output is reproducible") {
    Scratch s("sweep_repro");
    const std::vector<std::string> base{"sweep", "--group", "Z6", "--deltas", "0.6,0.7,0.9", "--seed", "11",
                                        "--restarts", "3", "--steps", "300"};
    auto first = base;
    first.insert(first.end(), {"--out", (s.dir / "a").string()});
    auto second = base;
    second.insert(second.end(), {"--out", (s.dir / "b").string(), "--workers", "2"});
    CHECK(run(first).code == kExitOk);
    CHECK(run(second).code == kExitOk);
    CHECK(read_text_file(s.dir / "a" / "sweep.csv") == read_text_file(s.dir / "b" / "sweep.csv"));
    std::size_t manifests = 0;
    for (const auto& e : fs::directory_iterator(s.dir / "a")) manifests += e.path().filename() == "manifest.json";
    CHECK(manifests == 1);
  }

  TEST_CASE("adversarial") {
    Scratch s("adversarial");
    const auto r = run({"adversarial", "--group", "Z2^2", "--claim", "dyadic", "--delta", "0.7", "--seed", "1",
                        "--real-only", "--out", s.dir.string()});
    CHECK(r.code == kExitOk);
    const auto j = read_json(s.dir / "adversarial.json");
    CHECK(j["violation_found"] == false);
    CHECK(j["witness"].is_null());
  }

  TEST_CASE("usage errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"invert", "/nonexistent/file.json", "--out", "/tmp/x"}).code == kExitUsage);
    Scratch s("usage");
    const auto dom = s.write("dom.json", kDominant);
    CHECK(run({"invert", dom.string(), "--method", "magic", "--out", s.dir.string()}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
  }
}
