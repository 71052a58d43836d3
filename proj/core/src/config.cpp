#include "bubbles/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace bubbles {

namespace {

using json = nlohmann::json;

const char* kModule = "config";

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw Error(ErrorKind::config, kModule, "key '" + path + "': " + msg); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Walks one JSON object, remembering which keys were read so the rest can be rejected.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string path(const std::string& key) const { return join(path_, key); }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return j_.at(key);
    }

    Section object(const std::string& key)
    {
        if (!has(key)) fail(path(key), "required section is missing");
        return Section(raw(key), path(key));
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(path(key), "required number is missing");
        }
        const json& v = raw(key);
        if (!v.is_number()) fail(path(key), "expected a number");
        return v.get<double>();
    }

    long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt)
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(path(key), "required integer is missing");
        }
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(path(key), "expected an integer");
        return v.get<long long>();
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt)
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(path(key), "required string is missing");
        }
        const json& v = raw(key);
        if (!v.is_string()) fail(path(key), "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail(path(key), "expected true or false");
        return v.get<bool>();
    }

    Vec3 vec3(const std::string& key, std::optional<Vec3> fallback = std::nullopt)
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(path(key), "required [x, y, z] is missing");
        }
        return to_vec3(raw(key), path(key));
    }

    static Vec3 to_vec3(const json& v, const std::string& p)
    {
        if (!v.is_array() || v.size() != 3) fail(p, "expected [x, y, z]");
        Vec3 out;
        for (int k = 0; k < 3; ++k) {
            if (!v[k].is_number()) fail(p, "expected [x, y, z]");
            out[k] = v[k].get<double>();
        }
        return out;
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(path(it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& msg)
{
    if (!ok) fail(path, msg);
}

BubbleShape parse_shape(Section s, const std::string& baseDir)
{
    const std::string kind = s.string("kind", "sphere");
    BubbleShape shape;
    if (kind == "sphere") {
        shape = BubbleShape::sphere(1.0);
    } else if (kind == "ellipsoid") {
        Vec3 ax = s.vec3("semiAxes");
        require(ax.minCoeff() > 0, s.path("semiAxes"), "semi-axes must be positive");
        shape = BubbleShape::ellipsoid(ax);
    } else if (kind == "icosphere") {
        long long r = s.integer("refinement", 2);
        require(r >= 0 && r <= 6, s.path("refinement"), "refinement must lie in 0..6");
        shape = BubbleShape::from_mesh(icosphere(static_cast<int>(r)));
    } else if (kind == "mesh") {
        std::filesystem::path p = s.string("path");
        if (p.is_relative()) p = std::filesystem::path(baseDir) / p;
        try {
            shape = BubbleShape::from_mesh(read_mesh_file(p.string()));
        } catch (const Error& e) {
            fail(s.path("path"), e.what());
        }
    } else {
        fail(s.path("kind"), "expected sphere, ellipsoid, icosphere or mesh");
    }
    s.finish();
    return shape;
}

void parse_cluster(Section s, RunConfig& cfg, const std::string& baseDir)
{
    ClusterSpec& c = cfg.cluster;
    c.a = s.number("a");
    require(c.a > 0 && c.a < 1, s.path("a"), "a must lie in (0, 1)");
    c.s = s.number("s", 0.0);
    c.t = s.number("t", 0.0);
    c.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    c.dMinFactor = s.number("dMinFactor", c.dMinFactor);
    c.dMaxFactor = s.number("dMaxFactor", c.dMaxFactor);
    c.mMax = s.number("mMax", c.mMax);
    c.jitter = s.number("jitter", c.jitter);
    c.zetaMin = s.number("zetaMin", c.zetaMin);
    require(c.dMinFactor > 0, s.path("dMinFactor"), "must be positive");
    require(c.dMaxFactor >= c.dMinFactor, s.path("dMaxFactor"), "must be at least dMinFactor");
    require(c.mMax > 0, s.path("mMax"), "must be positive");
    require(c.jitter >= 0 && c.jitter <= 1, s.path("jitter"), "must lie in [0, 1]");
    require(c.zetaMin > 0 && c.zetaMin <= 1, s.path("zetaMin"), "must lie in (0, 1]");
    if (s.has("box")) {
        Section b = s.object("box");
        c.domainBox.lo = b.vec3("lo", Vec3::Zero());
        c.domainBox.hi = b.vec3("hi", Vec3::Ones());
        require((c.domainBox.hi - c.domainBox.lo).minCoeff() > 0, b.path("hi"), "box must have positive extent");
        b.finish();
    }
    if (s.has("occupancy")) {
        Section o = s.object("occupancy");
        const std::string rule = o.string("rule", "fixed");
        if (rule == "fixed") {
            c.occupancy.rule = Occupancy::Rule::fixed;
            long long n = o.integer("count", 1);
            require(n >= 1 && n <= 4, o.path("count"), "count must lie in 1..4 (a cluster needs at least one bubble)");
            c.occupancy.count = static_cast<int>(n);
        } else if (rule == "bernoulli") {
            c.occupancy.rule = Occupancy::Rule::bernoulli;
            c.occupancy.p = o.number("p", 0.5);
            require(c.occupancy.p > 0 && c.occupancy.p <= 1, o.path("p"), "p must lie in (0, 1]");
        } else {
            fail(o.path("rule"), "expected fixed or bernoulli");
        }
        o.finish();
    }
    if (s.has("shape")) c.prototype = parse_shape(s.object("shape"), baseDir);
    if (s.has("centers")) {
        const json& arr = s.raw("centers");
        const std::string p = s.path("centers");
        require(arr.is_array(), p, "expected a list of [x, y, z]");
        require(!arr.empty(), p, "cluster would be empty");
        for (std::size_t i = 0; i < arr.size(); ++i) cfg.centers.push_back(Section::to_vec3(arr[i], p + "[" + std::to_string(i) + "]"));
    }
    s.finish();
}

void parse_frequency(Section s, FrequencySpec& f)
{
    const std::string mode = s.string("mode");
    if (mode == "fixed") {
        f.mode = FrequencySpec::Mode::fixed;
        f.omega = s.number("omega");
        require(f.omega > 0, s.path("omega"), "must be positive");
    } else if (mode == "relativeToResonance") {
        f.mode = FrequencySpec::Mode::relativeToResonance;
        f.lM = s.number("lM");
        f.h1 = s.number("h1");
        require(f.lM != 0, s.path("lM"), "must be nonzero");
        require(f.h1 > 0 && f.h1 <= 1, s.path("h1"), "must lie in (0, 1]");
    } else if (mode == "sweep") {
        f.mode = FrequencySpec::Mode::sweep;
        f.omegaMin = s.number("omegaMin");
        f.omegaMax = s.number("omegaMax");
        long long n = s.integer("count");
        require(f.omegaMin > 0, s.path("omegaMin"), "must be positive");
        require(f.omegaMax > f.omegaMin, s.path("omegaMax"), "must exceed omegaMin");
        require(n >= 2 && n <= 1000000, s.path("count"), "must lie in 2..1000000");
        f.count = static_cast<int>(n);
    } else {
        fail(s.path("mode"), "expected fixed, relativeToResonance or sweep");
    }
    s.finish();
}

std::optional<Regime> parse_regime(const std::string& name, const std::string& path)
{
    if (name == "auto") return std::nullopt;
    if (name == "negativeCm") return Regime::negativeCm;
    if (name == "positiveCmTau") return Regime::positiveCmTau;
    if (name == "positiveCmSmall") return Regime::positiveCmSmall;
    fail(path, "expected auto, negativeCm, positiveCmTau or positiveCmSmall");
}

std::string last_key_before(const std::string& text, std::size_t byte)
{
    static const std::regex key(R"re("((?:[^"\\]|\\.)*)"\s*:)re");
    std::string head = text.substr(0, std::min(byte, text.size()));
    std::string last;
    for (auto it = std::sregex_iterator(head.begin(), head.end(), key); it != std::sregex_iterator(); ++it) last = (*it)[1];
    return last;
}

}  // namespace

const char* to_string(FrequencySpec::Mode m)
{
    switch (m) {
    case FrequencySpec::Mode::fixed: return "fixed";
    case FrequencySpec::Mode::relativeToResonance: return "relativeToResonance";
    case FrequencySpec::Mode::sweep: return "sweep";
    }
    return "unknown";
}

RunConfig parse_config(const std::string& text, const std::string& baseDir)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string key = last_key_before(text, e.byte);
        throw Error(ErrorKind::config, kModule,
                    "malformed JSON at byte " + std::to_string(e.byte) + (key.empty() ? std::string() : " after key '" + key + "'") + ": " + e.what());
    }

    RunConfig cfg;
    Section s(root, "");
    parse_cluster(s.object("cluster"), cfg, baseDir);

    if (s.has("medium")) {
        Section m = s.object("medium");
        cfg.rho0 = m.number("rho0", 1.0);
        cfg.k0 = m.number("k0", 1.0);
        cfg.omegaMax = m.number("omegaMax", std::numeric_limits<double>::infinity());
        require(cfg.rho0 > 0, m.path("rho0"), "must be positive");
        require(cfg.k0 > 0, m.path("k0"), "must be positive");
        require(cfg.omegaMax > 0, m.path("omegaMax"), "must be positive");
        m.finish();
    }
    if (s.has("contrast")) {
        Section c = s.object("contrast");
        cfg.contrast.cRho = c.number("cRho", 1.0);
        cfg.contrast.beta = c.number("beta", 2.0);
        cfg.contrast.speedRatio = c.number("speedRatio", 1.0);
        require(cfg.contrast.cRho > 0, c.path("cRho"), "must be positive");
        require(cfg.contrast.beta > 0, c.path("beta"), "must be positive");
        require(cfg.contrast.speedRatio > 0, c.path("speedRatio"), "must be positive");
        c.finish();
    }
    if (s.has("materials")) {
        const json& arr = s.raw("materials");
        require(arr.is_array() && !arr.empty(), s.path("materials"), "expected a non-empty list of {rho, k}");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section m(arr[i], "materials[" + std::to_string(i) + "]");
            Material mat{m.number("rho"), m.number("k")};
            require(mat.rho > 0 && mat.k > 0, m.path("rho"), "density and modulus must be positive");
            m.finish();
            cfg.materials.push_back(mat);
        }
    }
    parse_frequency(s.object("frequency"), cfg.frequency);

    const std::string variant = s.string("coefficientVariant", "leading");
    if (variant == "leading") cfg.coefficientVariant = CoefficientVariant::leading;
    else if (variant == "refined") cfg.coefficientVariant = CoefficientVariant::refined;
    else if (variant == "dominating") cfg.coefficientVariant = CoefficientVariant::dominating;
    else fail("coefficientVariant", "expected leading, refined or dominating");
    if (cfg.coefficientVariant == CoefficientVariant::dominating && cfg.frequency.mode != FrequencySpec::Mode::relativeToResonance)
        fail("coefficientVariant", "dominating needs frequency.mode = relativeToResonance");

    Vec3 theta = s.vec3("incidentDirection", Vec3::UnitZ());
    require(theta.norm() > 0, "incidentDirection", "must be nonzero");
    cfg.incidentDirection = theta.normalized();
    long long nDir = s.integer("directionsN", 590);
    require(nDir >= 1 && nDir <= 10000000, "directionsN", "must lie in 1..10^7");
    cfg.directionsN = static_cast<int>(nDir);
    long long order = s.integer("quadratureOrder", 3);
    require(order >= 1 && order <= 8, "quadratureOrder", "must lie in 1..8");
    cfg.quadratureOrder = static_cast<int>(order);

    if (s.has("invertibility")) {
        Section inv = s.object("invertibility");
        cfg.forcedRegime = parse_regime(inv.string("regime", "auto"), inv.path("regime"));
        cfg.invertibilityConstant = inv.number("constant", 1.0);
        require(cfg.invertibilityConstant > 0, inv.path("constant"), "must be positive");
        inv.finish();
    }
    if (s.has("study")) {
        Section st = s.object("study");
        const std::string p = st.path("aValues");
        const json& arr = st.raw("aValues");
        require(arr.is_array(), p, "expected a list of numbers");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            require(arr[i].is_number() && arr[i].get<double>() > 0, p + "[" + std::to_string(i) + "]", "expected a positive number");
            cfg.study.aValues.push_back(arr[i].get<double>());
        }
        require(cfg.study.aValues.size() >= 3, p, "need at least 3 values");
        for (std::size_t i = 1; i < cfg.study.aValues.size(); ++i)
            require(cfg.study.aValues[i] < cfg.study.aValues[i - 1], p, "aValues not strictly decreasing");
        const std::string oracle = st.string("oracle", "mie");
        if (oracle == "mie") cfg.study.oracle = StudySpec::Oracle::mie;
        else if (oracle == "bem") cfg.study.oracle = StudySpec::Oracle::bem;
        else fail(st.path("oracle"), "expected mie or bem");
        long long bo = st.integer("bemOrder", 3);
        require(bo >= 1 && bo <= 8, st.path("bemOrder"), "must lie in 1..8");
        cfg.study.bemOrder = static_cast<int>(bo);
        st.finish();
    }
    if (s.has("outputs")) {
        Section o = s.object("outputs");
        cfg.outDir = o.string("dir", ".");
        cfg.dumpMatrix = o.boolean("dumpMatrix", false);
        o.finish();
    }
    s.finish();

    if (!cfg.materials.empty() && !cfg.centers.empty() && cfg.materials.size() != cfg.centers.size())
        fail("materials", "needs one entry per explicit center");
    if (!cfg.materials.empty() && cfg.centers.empty()) fail("materials", "explicit materials need explicit cluster.centers");
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, kModule, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    return parse_config(ss.str(), base.empty() ? "." : base.string());
}

}  // namespace bubbles
