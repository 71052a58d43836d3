#include "bubbles/harness.hpp"

#include "bubbles/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>

namespace bubbles {

namespace {

using json = nlohmann::json;

const char* kModule = "harness";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

std::string shape_key(const BubbleShape& b, int order)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s|%.17g|%.17g,%.17g,%.17g|%p|%.17g|%d", to_string(b.kind), b.radius, b.semiAxes[0], b.semiAxes[1], b.semiAxes[2],
                  static_cast<const void*>(b.mesh.get()), b.scale, order);
    return buf;
}

std::vector<Material> materials_for(const RunConfig& cfg, double a, std::size_t M)
{
    if (!cfg.materials.empty()) {
        if (cfg.materials.size() != M) fail(ErrorKind::config, "materials: need one entry per bubble");
        return cfg.materials;
    }
    return std::vector<Material>(M, cfg.contrast.material(a, cfg.rho0, cfg.k0));
}

double minnaert_or_nan(const ShapeFunctionals& f, const Material& m, double rho0)
{
    try {
        return minnaert_frequency(f, m.rho, m.k, rho0);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json report_json(const RunResult& r)
{
    if (!r.report) return json{{"error", r.reportError}};
    const InvertibilityReport& p = *r.report;
    return json{{"regime", to_string(p.regime)},
                {"lhs", p.lhs},
                {"rhs", p.rhs},
                {"verdict", to_string(p.satisfied)},
                {"tau", p.tau},
                {"d", p.d},
                {"alpha", p.alpha},
                {"minReC", p.minReC},
                {"maxAbsC", p.maxAbsC},
                {"interactionFactor", p.interactionFactor},
                {"gradientFactor", p.gradientFactor},
                {"shapeFactor", p.shapeFactor},
                {"diagnosticTerm", p.diagnosticTerm},
                {"qNormBound", p.qNormBound},
                {"note", p.note}};
}

json regime_json(const RegimeAssessment& a)
{
    json checks = json::array();
    for (const RegimeCheck& c : a.checks) checks.push_back({{"group", c.group}, {"inequality", c.inequality}, {"pass", c.pass}});
    json cases = json::object();
    for (const auto& [k, v] : a.cases) cases[k] = v;
    return json{{"frequencyRegime", a.frequencyRegime}, {"shift", a.shift}, {"lM", a.lM}, {"h1", a.h1}, {"gamma", a.gamma}, {"checks", checks}, {"cases", cases}};
}

json diagnostics_json(const RunConfig& cfg, const RunResult& r)
{
    const Prepared& p = r.prep;
    json omegaM = json::array();
    for (double w : p.omegaM) omegaM.push_back(w);
    json coeffs = json::array();
    for (const auto& c : p.coefficients) coeffs.push_back({{"cM", cplx_json(c.cM)}, {"cMinv", cplx_json(c.cMinv)}});
    return json{{"M", p.cluster.size()},
                {"a", p.cluster.realizedStats.a},
                {"d", p.cluster.realizedStats.d},
                {"s", p.cluster.s},
                {"t", p.cluster.t},
                {"omega", p.medium.omega},
                {"kappa0", p.medium.kappa0()},
                {"frequencyMode", to_string(cfg.frequency.mode)},
                {"coefficientVariant", to_string(cfg.coefficientVariant)},
                {"omegaM", omegaM},
                {"coefficients", coeffs},
                {"tau", r.system.tau},
                {"solver",
                 {{"method", r.system.method},
                  {"residualNorm", r.system.residualNorm},
                  {"conditionEstimate", r.system.conditionEstimate},
                  {"iterations", r.system.iterations}}},
                {"invertibility", report_json(r)},
                {"regime", regime_json(r.regime)}};
}

void write_json(const std::filesystem::path& path, const json& j) { write_text_file(path.string(), j.dump(2) + "\n"); }

std::string num(double v) { return format_number(v); }

}  // namespace

const ShapeFunctionals& FunctionalCache::get(const BubbleShape& shape, int order)
{
    const std::string key = shape_key(shape, order);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        ++hits_;
        return it->second;
    }
    ++misses_;
    return entries_.emplace(key, compute_functionals(shape.moved_to(Vec3::Zero()), order)).first->second;
}

Cluster build_cluster(const RunConfig& cfg, double a)
{
    if (cfg.centers.empty()) {
        ClusterSpec spec = cfg.cluster;
        spec.a = a;
        return generate_cluster(spec);
    }
    const BubbleShape proto = cfg.cluster.prototype.with_diameter(a);
    std::vector<BubbleShape> bubbles;
    for (const Vec3& c : cfg.centers) bubbles.push_back(proto.moved_to(c));
    return make_cluster(std::move(bubbles), cfg.cluster.s, cfg.cluster.t);
}

Prepared prepare(const RunConfig& cfg, double a, FunctionalCache& cache, std::optional<double> omega)
{
    Prepared p;
    p.a = a;
    p.cluster = build_cluster(cfg, a);
    const std::size_t M = p.cluster.size();
    p.medium.rho0 = cfg.rho0;
    p.medium.k0 = cfg.k0;
    p.medium.omegaMax = cfg.omegaMax;
    p.medium.perBubble = materials_for(cfg, a, M);
    for (std::size_t m = 0; m < M; ++m) {
        p.functionals.push_back(cache.get(p.cluster.bubbles[m], cfg.quadratureOrder));
        p.omegaM.push_back(minnaert_or_nan(p.functionals[m], p.medium.perBubble[m], cfg.rho0));
    }
    if (omega) {
        p.medium.omega = *omega;
    } else {
        switch (cfg.frequency.mode) {
        case FrequencySpec::Mode::fixed: p.medium.omega = cfg.frequency.omega; break;
        case FrequencySpec::Mode::relativeToResonance: {
            const Material& m0 = p.medium.perBubble[0];
            p.medium.omega = near_resonance_omega(minnaert_frequency(p.functionals[0], m0.rho, m0.k, cfg.rho0), cfg.frequency.lM, cfg.frequency.h1, a);
            break;
        }
        case FrequencySpec::Mode::sweep: fail(ErrorKind::config, "frequency.mode: sweep needs an explicit frequency per point");
        }
    }
    p.medium.validate();
    for (std::size_t m = 0; m < M; ++m) {
        if (cfg.coefficientVariant == CoefficientVariant::dominating)
            p.coefficients.push_back(dominating_coefficient(p.functionals[m], p.medium, m, cfg.frequency.lM, cfg.frequency.h1, a));
        else
            p.coefficients.push_back(scatter_coefficient(cfg.coefficientVariant, p.functionals[m], p.medium, m));
    }
    return p;
}

RegimeAssessment regime_checks(const RunConfig& cfg, const Prepared& prep, double tau)
{
    RegimeAssessment out;
    const double s = prep.cluster.s, t = prep.cluster.t;
    const double gamma = cfg.materials.empty() ? cfg.contrast.gamma() : std::numeric_limits<double>::quiet_NaN();
    out.gamma = gamma;
    const bool gammaOne = std::abs(gamma - 1) < 1e-12;
    const double wM = prep.omegaM.empty() ? std::numeric_limits<double>::quiet_NaN() : prep.omegaM[0];
    const double w = prep.medium.omega;
    out.shift = 1 - wM * wM / (w * w);
    if (cfg.frequency.mode == FrequencySpec::Mode::relativeToResonance) {
        out.frequencyRegime = "near";
        out.lM = cfg.frequency.lM;
        out.h1 = cfg.frequency.h1;
    } else {
        out.frequencyRegime = "away";
        const double mag = std::abs(out.shift);
        out.h1 = mag > 0 && mag < 1 ? std::log(mag) / std::log(prep.a) : 0.0;
        out.lM = out.shift / std::pow(prep.a, out.h1);
    }
    const double h1 = out.h1, lM = out.lM;
    auto add = [&](const std::string& group, const std::string& ineq, bool pass) {
        out.checks.push_back({group, ineq, pass});
        return pass;
    };

    bool general = true;
    general &= add("theorem", "0 <= t < 1/2", t >= 0 && t < 0.5);
    general &= add("theorem", "0 <= s <= 3/2", s >= 0 && s <= 1.5);
    general &= add("theorem", "0 <= gamma <= 1", gamma >= 0 && gamma <= 1);
    general &= add("theorem", "s + gamma <= 2", s + gamma <= 2);
    general &= add("theorem", "t >= s/3", t >= s / 3 - 1e-12);
    if (out.frequencyRegime == "away") {
        add("away-from-resonance", "gamma < 1 or omega away from omegaM", gamma < 1 || std::abs(out.shift) > 0);
    } else {
        add("near-resonance", "gamma = 1", gammaOne);
        if (lM < 0) {
            add("near-resonance", "s + h1 <= 1 (lM < 0)", s + h1 <= 1 + 1e-12);
        } else {
            add("near-resonance", "t + h1 <= 1 (lM > 0)", t + h1 <= 1 + 1e-12);
            add("near-resonance", "s + h1 < min(3/2 - t, 2 - h1) (lM > 0)", s + h1 < std::min(1.5 - t, 2 - h1));
        }
    }

    auto all = [&](const std::string& group, std::vector<std::pair<std::string, bool>> items) {
        bool ok = general;
        for (auto& [ineq, pass] : items) ok &= add(group, ineq, pass);
        out.cases[group] = ok;
    };
    const bool tWindow = t >= s / 3 - 1e-12 && t <= 1;
    all("case1a", {{"gamma < 1 or omega away from omegaM", gamma < 1 || out.frequencyRegime == "away"},
                   {"0 <= gamma <= 1", gamma >= 0 && gamma <= 1},
                   {"gamma + s <= 2", gamma + s <= 2},
                   {"s/3 <= t <= 1", tWindow}});
    all("case1b", {{"gamma = 1", gammaOne}, {"lM < 0", lM < 0}, {"s/3 <= t <= 1", tWindow}, {"1 - h1 - s >= 0", 1 - h1 - s >= -1e-12}});
    all("case2a", {{"gamma = 1", gammaOne}, {"lM > 0", lM > 0}, {"0 <= t <= 1 - h1", t >= 0 && t <= 1 - h1 + 1e-12}, {"s <= 1", s <= 1}, {"tau > 0", tau > 0}});
    all("case2b", {{"gamma = 1", gammaOne}, {"lM > 0", lM > 0}, {"s/3 <= t <= 1", tWindow}, {"1 - h1 - s >= 0", 1 - h1 - s >= -1e-12}});
    return out;
}

InvertibilityParams invertibility_params(const RunConfig& cfg)
{
    InvertibilityParams p;
    p.mMax = cfg.cluster.mMax;
    p.s = cfg.cluster.s;
    p.t = cfg.cluster.t;
    p.gamma = cfg.contrast.gamma();
    p.constant = cfg.invertibilityConstant;
    p.forcedRegime = cfg.forcedRegime;
    return p;
}

RunResult run(const RunConfig& cfg)
{
    if (cfg.frequency.mode == FrequencySpec::Mode::sweep) fail(ErrorKind::config, "frequency.mode: use the sweep command for sweep mode");
    FunctionalCache cache;
    RunResult r;
    r.prep = prepare(cfg, cfg.cluster.a, cache);
    r.system = solve(assemble(r.prep.cluster, r.prep.coefficients, r.prep.medium, cfg.incidentDirection));
    try {
        r.report = invertibility_report(r.prep.cluster, r.prep.coefficients, r.prep.functionals, r.prep.medium, invertibility_params(cfg));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::mixed_sign_coefficients) throw;
        r.reportError = e.what();
    }
    r.regime = regime_checks(cfg, r.prep, r.system.tau);
    r.pattern = far_field(r.system, r.prep.cluster, fibonacci_sphere(cfg.directionsN));
    return r;
}

std::pair<double, double> predicted_exponents(const RunConfig& cfg)
{
    const double s = cfg.cluster.s, t = cfg.cluster.t, gamma = cfg.contrast.gamma();
    if (cfg.frequency.mode != FrequencySpec::Mode::relativeToResonance) return {2 - s, 3 - gamma - s - 2 * t};
    const double h1 = cfg.frequency.h1;
    const double first = cfg.coefficientVariant == CoefficientVariant::leading ? 2 - s - 2 * h1 : 2 - s - h1;
    return {first, 3 - 2 * t - 2 * s - 2 * h1};
}

ConvergenceStudy convergence_study(const RunConfig& cfg, const std::vector<double>& aValues, StudySpec::Oracle oracle)
{
    if (aValues.size() < 3) fail(ErrorKind::invalid_argument, "convergence study needs at least 3 values of a");
    for (std::size_t i = 1; i < aValues.size(); ++i)
        if (!(aValues[i] < aValues[i - 1])) fail(ErrorKind::invalid_argument, "aValues not strictly decreasing");
    if (cfg.frequency.mode == FrequencySpec::Mode::sweep) fail(ErrorKind::config, "frequency.mode: a study needs a fixed or relativeToResonance frequency");

    ConvergenceStudy st;
    st.aValues = aValues;
    st.oracle = oracle == StudySpec::Oracle::mie ? "oracle:mie" : "oracle:bem";
    const std::vector<Vec3> dirs = fibonacci_sphere(cfg.directionsN);
    FunctionalCache cache;
    std::vector<double> la, le, lr;
    for (double a : aValues) {
        Prepared p = prepare(cfg, a, cache);
        const std::size_t M = p.cluster.size();
        FoldyLaxSystem sys = solve(assemble(p.cluster, p.coefficients, p.medium, cfg.incidentDirection));
        FarFieldPattern fl = far_field(sys, p.cluster, dirs);
        FarFieldPattern ref;
        if (oracle == StudySpec::Oracle::mie) {
            if (M != 1 || p.cluster.bubbles[0].kind != ShapeKind::sphere)
                fail(ErrorKind::oracle_infeasible, "partial-wave oracle needs exactly one spherical bubble, got M = " + std::to_string(M));
            const BubbleShape& b = p.cluster.bubbles[0];
            const Material& m = p.medium.perBubble[0];
            ref = oracle_far_field(mie_sphere(b.radius * b.scale, m.rho, m.k, p.medium, -1, b.center, cfg.incidentDirection), dirs);
        } else {
            ref = oracle_far_field(bem_solve(p.cluster, p.medium, cfg.incidentDirection, cfg.study.bemOrder), dirs);
        }
        const double err = l2_difference(fl.values, ref.values);
        const double norm = l2_norm(ref.values);
        st.omegas.push_back(p.medium.omega);
        st.bubbleCounts.push_back(M);
        st.errors.push_back(err);
        st.oracleNorms.push_back(norm);
        st.relativeErrors.push_back(norm > 0 ? err / norm : std::numeric_limits<double>::quiet_NaN());
        la.push_back(std::log(a));
        le.push_back(std::log(err));
        lr.push_back(std::log(st.relativeErrors.back()));
    }
    st.fittedSlope = least_squares_slope(la, le);
    st.fittedRelativeSlope = least_squares_slope(la, lr);
    auto [e1, e2] = predicted_exponents(cfg);
    st.exponentFirst = e1;
    st.exponentSecond = e2;
    st.predictedSlope = std::min(e1, e2);
    st.ambiguous = std::abs(e1 - e2) < kAmbiguityGap;
    st.slopeOK = st.fittedSlope >= st.predictedSlope - kSlopeTolerance;
    return st;
}

SweepResult resonance_sweep(const RunConfig& cfg)
{
    const FrequencySpec& f = cfg.frequency;
    if (f.mode != FrequencySpec::Mode::sweep) fail(ErrorKind::config, "frequency.mode: sweep command needs mode = sweep");
    SweepResult out;
    FunctionalCache cache;
    const double a = cfg.cluster.a;
    const Cluster cluster = build_cluster(cfg, a);
    const std::vector<Material> mats = materials_for(cfg, a, cluster.size());
    const ShapeFunctionals& f0 = cache.get(cluster.bubbles[0], cfg.quadratureOrder);
    out.omegaM = minnaert_or_nan(f0, mats[0], cfg.rho0);
    out.binWidth = (f.omegaMax - f.omegaMin) / (f.count - 1);
    const Vec3 theta = cfg.incidentDirection;

    out.points.resize(static_cast<std::size_t>(f.count));
    for (int i = 0; i < f.count; ++i) {
        SweepPoint& pt = out.points[static_cast<std::size_t>(i)];
        pt.omega = i == f.count - 1 ? f.omegaMax : f.omegaMin + i * out.binWidth;
        pt.crossSection = std::numeric_limits<double>::quiet_NaN();
        MediumSpec med;
        med.rho0 = cfg.rho0;
        med.k0 = cfg.k0;
        med.omegaMax = cfg.omegaMax;
        med.perBubble = mats;
        med.omega = pt.omega;
        try {
            med.validate();
            const double km = med.kappa(0);
            pt.cInv = leading_denominator(f0, med, 0) / (km * km * f0.volume);
            if (cfg.coefficientVariant == CoefficientVariant::refined) pt.cInv = refined_inverse_coefficient(f0, med, 0).cMinv;
            const double shift = 1 - out.omegaM * out.omegaM / (pt.omega * pt.omega);
            if (std::isfinite(shift)) pt.dominatingCInv = dominating_coefficient(f0, med, 0, shift / a, 1.0, a).cMinv;
            std::vector<ScatterCoefficient> coeffs;
            for (std::size_t m = 0; m < cluster.size(); ++m) {
                const ShapeFunctionals& fm = cache.get(cluster.bubbles[m], cfg.quadratureOrder);
                coeffs.push_back(cfg.coefficientVariant == CoefficientVariant::dominating
                                     ? dominating_coefficient(fm, med, m, (1 - std::pow(minnaert_or_nan(fm, mats[m], cfg.rho0) / pt.omega, 2)) / a, 1.0, a)
                                     : scatter_coefficient(cfg.coefficientVariant, fm, med, m));
            }
            FoldyLaxSystem sys = solve(assemble(cluster, coeffs, med, theta));
            pt.crossSection = cross_section([&sys](const Vec3& d) { return point_far_field(sys.centers, sys.Q, sys.kappa0, d); });
        } catch (const Error& e) {
            pt.status = to_string(e.kind());
        }
    }

    double best = -1;
    for (const SweepPoint& pt : out.points)
        if (pt.status == "ok" && pt.crossSection > best) {
            best = pt.crossSection;
            out.argmaxOmega = pt.omega;
        }
    out.peakWithinBin = std::abs(out.argmaxOmega - out.omegaM) <= out.binWidth;
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        const double r0 = out.points[i - 1].cInv.real(), r1 = out.points[i].cInv.real();
        if ((r0 < 0 && r1 >= 0) || (r0 > 0 && r1 <= 0) || (r0 == 0 && r1 != 0 && i == 1)) {
            // Linear interpolation of the zero crossing.
            const double w0 = out.points[i - 1].omega, w1 = out.points[i].omega;
            out.signChangeOmegas.push_back(r1 == r0 ? w0 : w0 - r0 * (w1 - w0) / (r1 - r0));
        }
    }
    out.signChangeWithinBin = out.signChangeOmegas.size() == 1 && std::abs(out.signChangeOmegas[0] - out.omegaM) <= out.binWidth;
    return out;
}

void run_command(const std::string& command, const RunConfig& cfg, const std::string& outDir)
{
    namespace fs = std::filesystem;
    const fs::path dir(outDir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create output directory '" + outDir + "': " + ec.message());

    if (command == "functionals") {
        FunctionalCache cache;
        const Cluster cluster = build_cluster(cfg, cfg.cluster.a);
        const std::vector<Material> mats = materials_for(cfg, cfg.cluster.a, cluster.size());
        json list = json::array();
        for (std::size_t m = 0; m < cluster.size(); ++m) {
            const ShapeFunctionals& f = cache.get(cluster.bubbles[m], cfg.quadratureOrder);
            list.push_back({{"index", m},
                            {"kind", to_string(cluster.bubbles[m].kind)},
                            {"center", vec_json(cluster.bubbles[m].center)},
                            {"aHat", f.aHat},
                            {"cap", f.cap},
                            {"volume", f.volume},
                            {"surfaceArea", f.surfaceArea},
                            {"centroidOffset", vec_json(f.centroidOffset)},
                            {"omegaM", minnaert_or_nan(f, mats[m], cfg.rho0)}});
        }
        write_json(dir / "functionals.json",
                   json{{"M", cluster.size()}, {"a", cluster.realizedStats.a}, {"d", cluster.realizedStats.d}, {"quadratureOrder", cfg.quadratureOrder},
                        {"distinctShapes", cache.misses()}, {"bubbles", list}});
        write_text_file((dir / "cluster.json").string(), cluster_to_json(cluster));
    } else if (command == "solve" || command == "farfield") {
        RunResult r = run(cfg);
        write_json(dir / "diagnostics.json", diagnostics_json(cfg, r));
        if (command == "solve") {
            CsvWriter w((dir / "solution.csv").string(), {"index", "x", "y", "z", "reQ", "imQ", "reCinv", "imCinv"});
            for (std::size_t m = 0; m < r.prep.cluster.size(); ++m) {
                const Vec3& z = r.system.centers[m];
                const cplx q = r.system.Q[static_cast<Eigen::Index>(m)], ci = r.prep.coefficients[m].cMinv;
                w.row({std::to_string(m), num(z[0]), num(z[1]), num(z[2]), num(q.real()), num(q.imag()), num(ci.real()), num(ci.imag())});
            }
            w.close();
            if (cfg.dumpMatrix) {
                if (r.system.matrixFree) fail(ErrorKind::invalid_argument, "outputs.dumpMatrix: system is matrix-free at this size");
                write_matrix_binary(r.system.matrix, (dir / "matrix.bin").string());
            }
        } else {
            write_far_field_csv((dir / "farfield.csv").string(), r.pattern);
            write_json(dir / "farfield.json", json{{"crossSection", r.pattern.crossSection},
                                                   {"thetaDir", vec_json(r.pattern.theta)},
                                                   {"omega", r.pattern.omega},
                                                   {"M", r.pattern.M},
                                                   {"source", r.pattern.source}});
        }
    } else if (command == "sweep") {
        SweepResult s = resonance_sweep(cfg);
        CsvWriter w((dir / "sweep.csv").string(), {"omega", "crossSection", "reCinv", "imCinv", "domReCinv", "domImCinv", "status"});
        for (const SweepPoint& p : s.points)
            w.row({num(p.omega), num(p.crossSection), num(p.cInv.real()), num(p.cInv.imag()), num(p.dominatingCInv.real()), num(p.dominatingCInv.imag()), p.status});
        w.close();
        write_json(dir / "sweep.json", json{{"omegaM", s.omegaM},
                                            {"binWidth", s.binWidth},
                                            {"argmaxCrossSectionOmega", s.argmaxOmega},
                                            {"peakWithinBin", s.peakWithinBin},
                                            {"signChangeOmegas", s.signChangeOmegas},
                                            {"signChanges", s.signChangeOmegas.size()},
                                            {"signChangeWithinBin", s.signChangeWithinBin}});
    } else if (command == "study") {
        if (cfg.study.aValues.empty()) fail(ErrorKind::config, "study: section with aValues is required for the study command");
        ConvergenceStudy st = convergence_study(cfg, cfg.study.aValues, cfg.study.oracle);
        CsvWriter w((dir / "study.csv").string(), {"a", "omega", "M", "error", "relativeError", "oracleNorm"});
        for (std::size_t i = 0; i < st.aValues.size(); ++i)
            w.row({num(st.aValues[i]), num(st.omegas[i]), std::to_string(st.bubbleCounts[i]), num(st.errors[i]), num(st.relativeErrors[i]), num(st.oracleNorms[i])});
        w.close();
        write_json(dir / "study.json", json{{"oracle", st.oracle},
                                            {"aValues", st.aValues},
                                            {"errors", st.errors},
                                            {"relativeErrors", st.relativeErrors},
                                            {"fittedSlope", st.fittedSlope},
                                            {"fittedRelativeSlope", st.fittedRelativeSlope},
                                            {"predictedSlope", st.predictedSlope},
                                            {"exponents", {st.exponentFirst, st.exponentSecond}},
                                            {"ambiguous", st.ambiguous},
                                            {"slopeTolerance", kSlopeTolerance},
                                            {"slopeOK", st.slopeOK}});
    } else if (command == "oracle") {
        if (cfg.frequency.mode == FrequencySpec::Mode::sweep) fail(ErrorKind::config, "frequency.mode: the oracle command needs a single frequency");
        FunctionalCache cache;
        Prepared p = prepare(cfg, cfg.cluster.a, cache);
        const std::vector<Vec3> dirs = fibonacci_sphere(cfg.directionsN);
        const bool useMie = cfg.study.aValues.empty() ? p.cluster.size() == 1 : cfg.study.oracle == StudySpec::Oracle::mie;
        FarFieldPattern ref;
        json extra;
        if (useMie) {
            if (p.cluster.size() != 1 || p.cluster.bubbles[0].kind != ShapeKind::sphere)
                fail(ErrorKind::oracle_infeasible, "partial-wave oracle needs exactly one spherical bubble");
            const BubbleShape& b = p.cluster.bubbles[0];
            PartialWaveSolution s = mie_sphere(b.radius * b.scale, p.medium.perBubble[0].rho, p.medium.perBubble[0].k, p.medium, -1, b.center, cfg.incidentDirection);
            ref = oracle_far_field(s, dirs);
            extra = {{"lMax", s.lMax}};
        } else {
            BemSolution s = bem_solve(p.cluster, p.medium, cfg.incidentDirection, cfg.study.bemOrder);
            ref = oracle_far_field(s, dirs);
            extra = {{"residual", s.residual}, {"conditionEstimate", s.conditionEstimate}, {"unknowns", s.unknowns()}, {"order", s.order}};
        }
        FoldyLaxSystem sys = solve(assemble(p.cluster, p.coefficients, p.medium, cfg.incidentDirection));
        FarFieldPattern fl = far_field(sys, p.cluster, dirs);
        const double err = l2_difference(fl.values, ref.values), norm = l2_norm(ref.values);
        write_far_field_csv((dir / "oracle_farfield.csv").string(), ref);
        json j = {{"source", ref.source},
                  {"crossSection", ref.crossSection},
                  {"thetaDir", vec_json(ref.theta)},
                  {"omega", ref.omega},
                  {"M", ref.M},
                  {"foldyLaxError", err},
                  {"foldyLaxRelativeError", norm > 0 ? err / norm : std::numeric_limits<double>::quiet_NaN()}};
        j.update(extra);
        write_json(dir / "oracle.json", j);
    } else {
        fail(ErrorKind::config, "unknown command '" + command + "'");
    }
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config: return 1;
    case ErrorKind::infeasible_regime: return 2;
    case ErrorKind::numerically_singular:
    case ErrorKind::singular_system: return 3;
    default: return 4;
    }
}

}  // namespace bubbles
