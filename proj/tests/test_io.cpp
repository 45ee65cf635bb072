#include "polypin/errors.hpp"
#include "polypin/json_io.hpp"
#include "polypin/rational.hpp"
#include "polypin/report_io.hpp"
#include "polypin/run_config.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace polypin;

TEST_CASE("rational parsing and ordering") {
    CHECK(Rational::parse("0.35") == Rational::make(7, 20));
    CHECK(Rational::parse("1/3") == Rational::make(1, 3));
    CHECK(Rational::parse("2/6") == Rational::make(1, 3));
    CHECK(Rational::parse("-0.5") == Rational::make(-1, 2));
    CHECK(Rational::make(1, 3) < Rational::make(1, 2));
    CHECK(Rational::make(3, 1) * Rational::make(9, 20) - Rational::make(1, 1) == Rational::make(7, 20));
    CHECK(Rational::parse(Rational::make(7, 20).str()) == Rational::make(7, 20));
    CHECK_THROWS_AS(Rational::parse("abc"), ParameterError);
    CHECK_THROWS_AS(Rational::make(1, 0), ParameterError);
}

TEST_CASE("exponent parse and compare") {
    const auto e = Exponent::parse("0.45");
    CHECK(e.is_exact());
    CHECK(e.value() == 0.45);
    CHECK(Exponent::compare(e.affine(3, -1), Exponent::parse("0.35")) == 0);
    CHECK(Exponent::compare(Exponent::from_double(0.1), Exponent::from_double(0.1 + 1e-13)) == 0);
    CHECK(Exponent::compare(Exponent::from_double(0.1), Exponent::from_double(0.1 + 1e-11)) < 0);
    CHECK(Exponent::parse(e.str()).exact() == e.exact());
    const auto f = Exponent::parse("1e-1");
    CHECK(f.value() == doctest::Approx(0.1));
}

TEST_CASE("shortest round-trip double formatting") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
        const std::string s = fmt_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(fmt_double(0.1) == "0.1");
    CHECK(fmt_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(fmt_double(std::nan("")) == "nan");
    CHECK(num(std::nan("")).is_null());
}

TEST_CASE("atomic writes leave no partial file") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "polypin_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "out.txt").string();
    write_atomically(path, [](std::ostream& os) { os << "hello\n"; });
    {
        std::ifstream is(path);
        std::string s;
        std::getline(is, s);
        CHECK(s == "hello");
    }
    CHECK_THROWS(write_atomically(path, [](std::ostream& os) {
        os << "partial";
        throw std::runtime_error("boom");
    }));
    std::ifstream is(path);
    std::string s;
    std::getline(is, s);
    CHECK(s == "hello");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    fs::remove_all(dir);
}

TEST_CASE("run config round trip") {
    RunConfig c;
    c.command = "sample";
    c.a = "0.45";
    c.b = "7/20";
    c.beta = 0.1 + 0.2;
    c.N = 1000000;
    c.samples = 10000;
    c.seed = 18446744073709551615ULL;
    c.threads = 3;
    c.out = "x.csv";
    c.format = "csv";
    c.t_values = {8, 16, 32};
    c.criteria = {"bc3_window_stability"};
    const auto back = run_config_from_json(nlohmann::json::parse(to_json(c).dump()));
    CHECK(back == c);

    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "polypin_cfg.json").string();
    save_run_config(path, c);
    CHECK(load_run_config(path) == c);
    fs::remove(path);

    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"format":"xml"})")), ParameterError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"N":"many"})")), ParameterError);
}
