#include "bubbles/config.hpp"
#include "bubbles/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace bubbles;

namespace {

std::string config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config with defaults")
{
    RunConfig c = parse_config(R"({"cluster": {"a": 0.01}, "frequency": {"mode": "fixed", "omega": 2}})");
    CHECK(c.cluster.a == 0.01);
    CHECK(c.frequency.mode == FrequencySpec::Mode::fixed);
    CHECK(c.frequency.omega == 2.0);
    CHECK(c.coefficientVariant == CoefficientVariant::leading);
    CHECK(c.directionsN == 590);
    CHECK(c.contrast.beta == 2.0);
    CHECK(!c.forcedRegime);
}

TEST_CASE("full config")
{
    RunConfig c = parse_config(R"({
      "cluster": {"a": 0.02, "s": 1, "t": 0.4, "seed": 9, "jitter": 0.5,
                  "occupancy": {"rule": "bernoulli", "p": 0.7}, "shape": {"kind": "ellipsoid", "semiAxes": [1, 0.7, 0.5]}},
      "medium": {"rho0": 2, "k0": 3, "omegaMax": 100},
      "contrast": {"cRho": 0.5, "beta": 1.5, "speedRatio": 1.2},
      "frequency": {"mode": "relativeToResonance", "lM": -2, "h1": 0.3},
      "coefficientVariant": "dominating",
      "incidentDirection": [0, 3, 4],
      "invertibility": {"regime": "negativeCm", "constant": 0.5},
      "study": {"aValues": [0.02, 0.01, 0.005], "oracle": "bem", "bemOrder": 2},
      "outputs": {"dir": "out", "dumpMatrix": true}
    })");
    CHECK(c.cluster.occupancy.rule == Occupancy::Rule::bernoulli);
    CHECK(c.cluster.prototype.kind == ShapeKind::ellipsoid);
    CHECK(c.rho0 == 2);
    CHECK(c.frequency.h1 == 0.3);
    CHECK(c.coefficientVariant == CoefficientVariant::dominating);
    CHECK((c.incidentDirection - Vec3(0, 0.6, 0.8)).norm() < 1e-15);
    CHECK(*c.forcedRegime == Regime::negativeCm);
    CHECK(c.study.oracle == StudySpec::Oracle::bem);
    CHECK(c.study.aValues.size() == 3);
    CHECK(c.dumpMatrix);
}

TEST_CASE("errors name the offending key")
{
    CHECK(contains(config_error(R"({"cluster": {"a": 1.5}, "frequency": {"mode": "fixed", "omega": 2}})"), "key 'cluster.a'"));
    CHECK(contains(config_error(R"({"cluster": {"a": "x"}, "frequency": {"mode": "fixed", "omega": 2}})"), "key 'cluster.a'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}})"), "key 'frequency'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}, "frequency": {"mode": "fixed"}})"), "key 'frequency.omega'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}, "frequency": {"mode": "loud", "omega": 1}})"), "key 'frequency.mode'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1, "centres": []}, "frequency": {"mode": "fixed", "omega": 2}})"),
                   "key 'cluster.centres'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}, "frequency": {"mode": "fixed", "omega": 2}, "coefficientVariant": "dominating"})"),
                   "key 'coefficientVariant'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1, "occupancy": {"count": 5}}, "frequency": {"mode": "fixed", "omega": 2}})"),
                   "key 'cluster.occupancy.count'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}, "frequency": {"mode": "fixed", "omega": 2}, "study": {"aValues": [0.1, 0.1, 0.05]}})"),
                   "key 'study.aValues'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}, "frequency": {"mode": "fixed", "omega": 2}, "study": {"aValues": [0.1, 0.05]}})"),
                   "key 'study.aValues'"));
    CHECK(contains(config_error(R"({"cluster": {"a": 0.1}, "frequency": {"mode": "fixed", "omega": 2}, "materials": [{"rho": 1, "k": 1}]})"),
                   "key 'materials'"));
}

TEST_CASE("malformed JSON reports position and preceding key")
{
    std::string msg = config_error(R"({"cluster": {"a": 0.1,, "s": 0}, "frequency": {"mode": "fixed", "omega": 2}})");
    CHECK(contains(msg, "malformed JSON at byte"));
    CHECK(contains(msg, "after key 'a'"));
}

TEST_CASE("load_config reports missing files")
{
    try {
        load_config("/nonexistent/config.json");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        CHECK(contains(e.what(), "config file"));
    }
    RunConfig c = load_config(std::string(BUBBLES_TEST_DATA) + "/single_bubble.json");
    CHECK(c.centers.size() == 1);
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV writer follows RFC 4180")
{
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("x\ny") == "\"x\ny\"");
    std::string path = "config_test.csv";
    {
        CsvWriter w(path, {"a", "b"});
        w.row({"1", "two, three"});
        CHECK_THROWS_AS(w.row({"1"}), Error);
        w.close();
    }
    CHECK(slurp(path) == "a,b\r\n1,\"two, three\"\r\n");
    std::remove(path.c_str());
}

TEST_CASE("cluster JSON round-trip")
{
    Cluster c = make_cluster({BubbleShape::sphere(0.01, Vec3(0.1, 0.2, 0.3)), BubbleShape::ellipsoid(Vec3(0.02, 0.01, 0.01), Vec3(0.5, 0.5, 0.5))},
                             1.0, 0.4);
    Cluster back = cluster_from_json(cluster_to_json(c));
    REQUIRE(back.size() == 2);
    CHECK(back.bubbles[0].center == c.bubbles[0].center);
    CHECK(back.bubbles[1].kind == ShapeKind::ellipsoid);
    CHECK(back.bubbles[1].semiAxes == c.bubbles[1].semiAxes);
    CHECK(back.realizedStats.d == c.realizedStats.d);
    CHECK(back.s == 1.0);
}
