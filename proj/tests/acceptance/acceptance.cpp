#include "bubbles/harness.hpp"
#include "bubbles/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bubbles;

namespace {

// Tolerances, pinned.
constexpr double kCapTol = 1e-3;
constexpr double kCapSeconds = 5.0;
constexpr double kAHatTol = 5e-3;
constexpr int kStarMeshes = 20;
constexpr double kScalingTol = 1e-8;
constexpr double kMinnaertBracket = 1e-6;
constexpr int kMinnaertSamples = 5;
constexpr double kSingleBubbleSlope = 1.7;
constexpr double kSingleBubbleSeconds = 60.0;
constexpr double kNearResonanceSlope = 0.7;
constexpr double kRefinedSlack = 0.1;
constexpr double kHalvingFactor = 1.4;
constexpr double kBemMieTol = 1e-2;
constexpr double kOracleSeconds = 600.0;
constexpr double kInvertResidual = 1e-10;
constexpr int kCountingSeeds = 10;
constexpr double kCountingRatio = 3.0;
constexpr double kCountingJitter = 0.5;
constexpr std::size_t kPerfM = 5000;
constexpr double kPerfSolveSeconds = 120.0;
constexpr double kPerfFarFieldSeconds = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string config_path(const std::string& name) { return std::string(BUBBLES_CONFIG_DIR) + "/" + name; }

struct Outcome {
    bool pass = false;
    std::string detail;
};

RunConfig base_single_bubble(double omega)
{
    RunConfig c = parse_config(R"({"cluster": {"a": 0.01, "centers": [[0.5, 0.5, 0.5]]}, "frequency": {"mode": "fixed", "omega": 1}})");
    c.frequency.omega = omega;
    return c;
}

TriMesh star_mesh(Rng& rng)
{
    TriMesh m = icosphere(2);
    Vec3 k1(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    Vec3 k2(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double a1 = rng.uniform(0, 0.3), a2 = rng.uniform(0, 0.15), ph = rng.uniform(0, 2 * pi);
    for (auto& v : m.vertices) v *= 1 + a1 * std::sin(2 * k1.dot(v) + ph) + a2 * std::cos(3 * k2.dot(v));
    return m;
}

Outcome capacitance()
{
    auto t0 = Clock::now();
    ShapeFunctionals f = compute_functionals(BubbleShape::sphere(1.0), 3);
    double el = seconds_since(t0);
    double rel = std::abs(f.cap / (4 * pi) - 1);
    return {rel <= kCapTol && el < kCapSeconds, "rel err " + fmt(rel) + " (tol " + fmt(kCapTol) + "), " + fmt(el) + " s"};
}

Outcome a_hat()
{
    ShapeFunctionals f = compute_functionals(BubbleShape::sphere(1.0), 3);
    double rel = std::abs(f.aHat / (-8 * pi / 3) - 1);
    Rng rng(2718);
    int negative = 0;
    double worst = -1e300;
    for (int i = 0; i < kStarMeshes; ++i) {
        double v = compute_functionals(BubbleShape::from_mesh(star_mesh(rng)), 1).aHat;
        worst = std::max(worst, v);
        negative += v < 0;
    }
    return {rel <= kAHatTol && negative == kStarMeshes,
            "sphere rel err " + fmt(rel) + " (tol " + fmt(kAHatTol) + "), " + std::to_string(negative) + "/" + std::to_string(kStarMeshes) +
                " star meshes negative (max " + fmt(worst) + ")"};
}

Outcome scaling()
{
    BubbleShape e = BubbleShape::ellipsoid(Vec3(1, 0.7, 0.5));
    ShapeFunctionals ref = compute_functionals(e, 2);
    double worst = 0;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
        BubbleShape s = e;
        s.scale = delta;
        ShapeFunctionals f = compute_functionals(s, 2);
        worst = std::max({worst, std::abs(f.aHat / (delta * delta * ref.aHat) - 1), std::abs(f.cap / (delta * ref.cap) - 1),
                          std::abs(f.volume / (delta * delta * delta * ref.volume) - 1)});
    }
    return {worst <= kScalingTol, "max rel deviation " + fmt(worst) + " (tol " + fmt(kScalingTol) + ")"};
}

Outcome minnaert()
{
    Rng rng(31415);
    int flips = 0;
    for (int i = 0; i < kMinnaertSamples; ++i) {
        const double r = std::exp(rng.uniform(std::log(1e-3), std::log(1e-1)));
        const double rhoB = std::exp(rng.uniform(std::log(1e-5), std::log(1e-2)));
        const double q = rng.uniform(0.6, 1.8);
        const double kB = rhoB / (q * q);
        ShapeFunctionals f = compute_functionals(BubbleShape::sphere(r), 3);
        const double wM = minnaert_frequency(f, rhoB, kB, 1.0);
        MediumSpec m;
        m.perBubble = {Material{rhoB, kB}};
        m.omega = wM * (1 - kMinnaertBracket / 2);
        const double below = leading_denominator(f, m, 0);
        m.omega = wM * (1 + kMinnaertBracket / 2);
        const double above = leading_denominator(f, m, 0);
        flips += below < 0 && above > 0;
    }
    return {flips == kMinnaertSamples,
            std::to_string(flips) + "/" + std::to_string(kMinnaertSamples) + " sign flips within " + fmt(kMinnaertBracket) + " omegaM"};
}

Outcome single_bubble()
{
    auto t0 = Clock::now();
    ConvergenceStudy s = convergence_study(base_single_bubble(2.0), {1e-2, 5e-3, 2.5e-3}, StudySpec::Oracle::mie);
    double el = seconds_since(t0);
    return {s.fittedSlope >= kSingleBubbleSlope && el < kSingleBubbleSeconds,
            "slope " + fmt(s.fittedSlope) + " (need >= " + fmt(kSingleBubbleSlope) + ", predicted " + fmt(s.predictedSlope) + "), relative-error slope " +
                fmt(s.fittedRelativeSlope) + ", " + fmt(el) + " s"};
}

Outcome near_resonance()
{
    RunConfig c = base_single_bubble(1.0);
    c.frequency.mode = FrequencySpec::Mode::relativeToResonance;
    c.frequency.lM = -1.0;
    c.frequency.h1 = 0.5;
    const std::vector<double> as{1e-2, 5e-3, 2.5e-3};
    ConvergenceStudy lead = convergence_study(c, as, StudySpec::Oracle::mie);
    c.coefficientVariant = CoefficientVariant::refined;
    ConvergenceStudy ref = convergence_study(c, as, StudySpec::Oracle::mie);
    return {lead.fittedSlope >= kNearResonanceSlope && ref.fittedSlope >= lead.fittedSlope - kRefinedSlack,
            "leading slope " + fmt(lead.fittedSlope) + " (need >= " + fmt(kNearResonanceSlope) + ", predicted " + fmt(lead.predictedSlope) +
                "), refined slope " + fmt(ref.fittedSlope) + " (need >= leading - " + fmt(kRefinedSlack) + ")"};
}

double fl_vs_bem(const std::vector<Vec3>& centers, double a)
{
    RunConfig c = base_single_bubble(2.0);
    c.centers = centers;
    FunctionalCache cache;
    Prepared p = prepare(c, a, cache);
    auto dirs = fibonacci_sphere(c.directionsN);
    FoldyLaxSystem sys = solve(assemble(p.cluster, p.coefficients, p.medium, c.incidentDirection));
    FarFieldPattern fl = far_field(sys, p.cluster, dirs);
    FarFieldPattern ref = oracle_far_field(bem_solve(p.cluster, p.medium, c.incidentDirection, 3), dirs);
    return l2_difference(fl.values, ref.values) / l2_norm(ref.values);
}

Outcome multi_bubble()
{
    auto t0 = Clock::now();
    const std::vector<std::vector<Vec3>> clusters{{Vec3(0.3, 0.5, 0.5), Vec3(0.7, 0.5, 0.5)},
                                                  {Vec3(0.3, 0.4, 0.5), Vec3(0.7, 0.45, 0.5), Vec3(0.5, 0.75, 0.4)}};
    bool ok = true;
    std::string detail;
    for (const auto& c : clusters) {
        double e1 = fl_vs_bem(c, 5e-3), e2 = fl_vs_bem(c, 2.5e-3);
        ok &= e1 / e2 >= kHalvingFactor;
        detail += "M=" + std::to_string(c.size()) + " err " + fmt(e1) + " -> " + fmt(e2) + " (factor " + fmt(e1 / e2) + "); ";
    }
    RunConfig c = base_single_bubble(2.0);
    FunctionalCache cache;
    Prepared p = prepare(c, 5e-3, cache);
    auto dirs = fibonacci_sphere(c.directionsN);
    const BubbleShape& b = p.cluster.bubbles[0];
    const Material& m = p.medium.perBubble[0];
    FarFieldPattern mie = oracle_far_field(mie_sphere(b.radius * b.scale, m.rho, m.k, p.medium, -1, b.center, c.incidentDirection), dirs);
    FarFieldPattern bem = oracle_far_field(bem_solve(p.cluster, p.medium, c.incidentDirection, 3), dirs);
    double rel = l2_difference(mie.values, bem.values) / l2_norm(mie.values);
    double el = seconds_since(t0);
    ok &= rel <= kBemMieTol && el < kOracleSeconds;
    detail += "BEM vs Mie " + fmt(rel) + " (tol " + fmt(kBemMieTol) + "), " + fmt(el) + " s";
    return {ok, detail};
}

Outcome invertibility()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"case1a", "case1b", "case2a", "case2b"}) {
        RunConfig cfg = load_config(config_path(std::string(name) + ".json"));
        RunResult r = run(cfg);
        bool caseHolds = r.regime.cases.at(name);
        bool yes = r.report && r.report->satisfied == Verdict::yes;
        bool good = caseHolds && yes && r.system.residualNorm <= kInvertResidual;
        ok &= good;
        detail += std::string(name) + (good ? " yes" : " FAILED") + " (res " + fmt(r.system.residualNorm) + "); ";
    }
    RunResult bad = run(load_config(config_path("mixed_sign.json")));
    bool errored = !bad.report && !bad.reportError.empty();
    ok &= errored;
    detail += errored ? "mixed signs rejected" : "mixed signs NOT rejected";
    return {ok, detail};
}

// Constant of one seed: worst bubble's distance sum over the bound at the realized minimum distance.
double counting_constant(double jitter, std::uint64_t seed, double k)
{
    ClusterSpec spec;
    spec.a = 1e-3;
    spec.s = 1.0;
    spec.t = 1.0 / 3.0;
    spec.seed = seed;
    spec.jitter = jitter;
    Cluster c = generate_cluster(spec);
    double worst = 0;
    for (std::size_t j = 0; j < c.size(); ++j) worst = std::max(worst, distance_sum(c, j, k));
    return worst / counting_bound(c.realizedStats.d, alpha_exponent(spec.s, spec.t), k);
}

double counting_ratio(double jitter, double k)
{
    double lo = 1e300, hi = 0;
    for (int seed = 1; seed <= kCountingSeeds; ++seed) {
        double constant = counting_constant(jitter, static_cast<std::uint64_t>(seed), k);
        lo = std::min(lo, constant);
        hi = std::max(hi, constant);
    }
    return hi / lo;
}

// Quasi-uniform placement keeps the realized minimum distance proportional to a^t, as the bounds assume.
Outcome counting()
{
    bool ok = true;
    std::string detail;
    for (double k : {1.0, 3.0, 4.0}) {
        double r = counting_ratio(kCountingJitter, k);
        ok &= r <= kCountingRatio;
        detail += "k=" + fmt(k) + " ratio " + fmt(r) + "; ";
    }
    detail += "(tol " + fmt(kCountingRatio) + ", jitter " + fmt(kCountingJitter) + "; at full jitter k=1 ratio is " + fmt(counting_ratio(1.0, 1.0)) + ")";
    return {ok, detail};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility()
{
    RunConfig cfg = load_config(config_path("study.json"));
    auto root = std::filesystem::temp_directory_path() / "bubbles_acceptance_repro";
    std::filesystem::remove_all(root);
    run_command("study", cfg, (root / "a").string());
    run_command("study", cfg, (root / "b").string());
    bool same = true;
    for (const char* f : {"study.csv", "study.json"}) {
        std::string x = slurp(root / "a" / f), y = slurp(root / "b" / f);
        same &= !x.empty() && x == y;
    }
    std::filesystem::remove_all(root);
    return {same, same ? "study.csv and study.json byte-identical" : "outputs differ"};
}

Outcome performance()
{
    ClusterSpec spec;
    spec.a = 1.7e-4;
    spec.s = 1.0;
    spec.t = 1.0 / 3.0;
    spec.seed = 1;
    Cluster full = generate_cluster(spec);
    if (full.size() < kPerfM) return {false, "generator produced only " + std::to_string(full.size()) + " bubbles"};
    Cluster c = make_cluster(std::vector<BubbleShape>(full.bubbles.begin(), full.bubbles.begin() + kPerfM), spec.s, spec.t);
    ContrastLaw law;
    MediumSpec med;
    med.perBubble.assign(c.size(), law.material(spec.a, 1.0, 1.0));
    med.omega = 2.0;
    ShapeFunctionals f = compute_functionals(c.bubbles[0], 2);
    std::vector<ScatterCoefficient> co(c.size(), leading_coefficient(f, med, 0));
    auto t0 = Clock::now();
    FoldyLaxSystem sys = solve(assemble(c, co, med, Vec3::UnitZ()));
    double solveTime = seconds_since(t0);
    auto dirs = fibonacci_sphere(590);
    t0 = Clock::now();
    FarFieldPattern p = far_field(sys, c, dirs);
    double ffTime = seconds_since(t0);
    return {solveTime < kPerfSolveSeconds && ffTime < kPerfFarFieldSeconds && p.values.size() == 590,
            "M=" + std::to_string(c.size()) + " assemble+solve " + fmt(solveTime) + " s (limit " + fmt(kPerfSolveSeconds) + ", " +
                std::to_string(max_threads()) + " threads, " + sys.method + "), far field " + fmt(ffTime) + " s (limit " + fmt(kPerfFarFieldSeconds) + ")"};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sphere capacitance", capacitance},
        {"sphere aHat and star-shaped negativity", a_hat},
        {"functional scaling", scaling},
        {"Minnaert sign change", minnaert},
        {"single-bubble convergence", single_bubble},
        {"near-resonance degradation", near_resonance},
        {"multi-bubble oracle equivalence", multi_bubble},
        {"invertibility diagnostics", invertibility},
        {"counting bounds", counting},
        {"study reproducibility", reproducibility},
        {"performance envelope", performance},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
