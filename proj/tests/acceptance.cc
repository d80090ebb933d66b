// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.
#include "oracles.h"

#include "bletradeoff/cli.h"
#include "bletradeoff/errors.h"
#include "bletradeoff/event-sim.h"
#include "bletradeoff/reliability-model.h"
#include "bletradeoff/sweep.h"
#include "bletradeoff/throughput-model.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace bletradeoff;

namespace
{

using Clock = std::chrono::steady_clock;

const std::filesystem::path kConfigDir = BLETRADEOFF_CONFIG_DIR;
const std::filesystem::path kReadme = BLETRADEOFF_README_PATH;

struct Verdict
{
    bool pass;
    std::string detail;
};

std::string
Fmt(const char* fmt, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
    return buf;
}

double
Elapsed(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

RawScenario
BaseScenario(int x)
{
    RawScenario raw;
    raw.ber = 1e-5;
    raw.payloadVBytes = 50;
    raw.x = x;
    raw.ciVUs = 7500;
    raw.payloadDBytes = 50;
    raw.n = 10;
    raw.ciDUs = 7500;
    return raw;
}

Verdict
ProbabilitySums()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logBer(-7.0, -2.0);
    std::uniform_int_distribution<int> payload(0, kMaxPayloadBytes);
    double worstSum = 0;
    double worstP6 = 0;
    const auto start = Clock::now();
    for (int i = 0; i < 1000; ++i)
    {
        const double ber = std::pow(10.0, logBer(rng));
        const long lcp = PacketBitsFromPayload(payload(rng));
        const long lpc = PacketBitsFromPayload(payload(rng));
        const auto p = TransactionProbs(ber, lcp, lpc);
        worstSum = std::max({worstSum, std::abs(p.p1 + p.p2 + p.p3 - 1), std::abs(p.p4 + p.p5 + p.p6 - 1)});
        worstP6 = std::max(worstP6, std::abs(p.p6 - p.p6Complement));
        const auto lit = oracle::LiteralProbs(ber, lcp, lpc);
        worstP6 = std::max(worstP6, std::abs(p.p6 - lit.p6));
    }
    const double t = Elapsed(start);
    return {worstSum <= 1e-12 && worstP6 <= 1e-9 && t < 1.0,
            Fmt("max |sum-1| %.2e (<=1e-12), max P6 gap %.2e (<=1e-9), %.3f s (<1 s)", worstSum,
                worstP6, t)};
}

Verdict
StationaryAgreement()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> logBer(-7.0, -2.0);
    std::uniform_int_distribution<int> payload(0, kMaxPayloadBytes);
    std::uniform_int_distribution<int> xs(1, 8);
    double worstGap = 0;
    double worstSum = 0;
    const auto start = Clock::now();
    for (int i = 0; i < 1000; ++i)
    {
        const double ber = std::pow(10.0, logBer(rng));
        const auto probs = TransactionProbs(ber, PacketBitsFromPayload(payload(rng)),
                                            PacketBitsFromPayload(payload(rng)));
        const auto matrix = BuildTransitionMatrix(probs, xs(rng));
        const auto iter = StationaryByIteration(matrix);
        const auto solved = StationaryByLinearSolve(matrix);
        for (int k = 0; k < 3; ++k)
        {
            worstGap = std::max(worstGap, std::abs(iter.weights[k] - solved[k]));
        }
        std::array<double, 3> v{1.0, 0.0, 0.0};
        for (long it = 0; it < std::min<long>(iter.iterations, 200); ++it)
        {
            v = PropagateOnce(matrix, v);
            worstSum = std::max(worstSum, std::abs(v[0] + v[1] + v[2] - 1));
        }
    }
    const double t = Elapsed(start);
    return {worstGap <= 1e-9 && worstSum <= 1e-12 && t < 5.0,
            Fmt("max |power-linear| %.2e (<=1e-9), max |sum-1| per step %.2e (<=1e-12), %.3f s (<5 s)",
                worstGap, worstSum, t)};
}

Verdict
SimulatorAgreement()
{
    const auto start = Clock::now();
    SimProtocol protocol;
    protocol.runs = 500;
    protocol.intervalsPerRun = 1000;
    protocol.masterSeed = 42;

    RawScenario raw1 = BaseScenario(1);
    RawScenario raw2 = BaseScenario(2);
    raw1.ber = raw2.ber = 1e-3;
    const double model1 = 0.358972;
    const double model2 = 0.284572;
    const double oracle1 = oracle::StationaryTsr(1e-3, 512, 512, 1);
    const double oracle2 = oracle::StationaryTsr(1e-3, 512, 512, 2);
    const double sim1 = SimulateConnection(ValidateScenario(raw1), protocol).empiricalTsr;
    const double sim2 = SimulateConnection(ValidateScenario(raw2), protocol).empiricalTsr;
    const double t = Elapsed(start);
    const double gap1 = std::abs(sim1 - model1);
    const double rel2 = std::abs(sim2 - model2) / model2;
    const bool referencesHold =
        std::abs(oracle1 - model1) <= 1e-6 && std::abs(oracle2 - model2) <= 1e-6;
    return {gap1 <= 0.005 && rel2 <= 0.05 && referencesHold && t < 120.0,
            Fmt("x=1 sim %.6f vs 0.358972 (|d|<=0.005), x=2 sim %.6f vs 0.284572 (rel<=0.05), "
                "%.1f s (<120 s)",
                sim1, sim2, t)};
}

Verdict
ReliabilityEndpoints()
{
    const auto start = Clock::now();
    SweepSpec spec;
    spec.base = BaseScenario(2);
    spec.swept = SweepParam::kBer;
    spec.values = LogGrid(1e-5, 1e-3, kDefaultBerPoints);
    const auto c = Sweep(spec).front();
    const double lo = *c.points.front().reliability;
    const double hi = *c.points.back().reliability;
    bool monotone = true;
    for (std::size_t i = 1; i < c.points.size(); ++i)
    {
        monotone = monotone && *c.points[i].reliability <= *c.points[i - 1].reliability;
    }
    const double t = Elapsed(start);
    return {lo >= 0.985 && lo <= 0.995 && hi >= 0.33 && hi <= 0.40 && monotone && t < 1.0,
            Fmt("reliability %.4f at ber 1e-5 in [0.985,0.995], %.4f at ber 1e-3 in [0.33,0.40], "
                "%.3f s (<1 s)",
                lo, hi, t)};
}

Verdict
PayloadPeak()
{
    SweepSpec spec;
    spec.base = BaseScenario(1);
    spec.base.ber = 5e-4;
    spec.swept = SweepParam::kPayloadV;
    spec.values = LinearGrid(0, kMaxPayloadBytes, kDefaultPayloadStep);
    const auto c = Sweep(spec).front();
    const auto peak = FindThroughputPeak(c);
    std::vector<double> series;
    for (const auto& p : c.points)
    {
        series.push_back(p.throughputReal);
    }
    const bool unimodal = IsUnimodal(series);
    return {peak.value >= 110 && peak.value <= 135 && *peak.reliability >= 0.30 &&
                *peak.reliability <= 0.37 && unimodal,
            Fmt("peak payload %.0f in [110,135], reliability %.4f in [0.30,0.37], unimodal %.0f", peak.value,
                *peak.reliability, unimodal ? 1.0 : 0.0)};
}

Verdict
IntervalIndependence()
{
    SweepSpec spec;
    spec.base = BaseScenario(1);
    spec.base.ber = 5e-4;
    spec.swept = SweepParam::kCiV;
    spec.values = LinearGrid(7500, 45000, kDefaultCiStepUs);
    const auto c = Sweep(spec).front();
    bool identical = true;
    for (const auto& p : c.points)
    {
        identical = identical && *p.pTf == *c.points.front().pTf;
    }
    const double ratio = c.points.front().throughputIdeal / c.points.back().throughputIdeal;
    const bool sixfold = std::abs(ratio - 6.0) <= 1e-12;
    return {identical && sixfold,
            Fmt("p_tf bitwise constant %.0f across %.0f points, ideal throughput ratio %.15f (==6)",
                identical ? 1.0 : 0.0, static_cast<double>(c.points.size()), ratio)};
}

Verdict
CoexistenceAgreement()
{
    const auto start = Clock::now();
    RawScenario raw = BaseScenario(2);
    raw.ber = 1e-3;
    const auto scenario = ValidateScenario(raw);
    const double model = oracle::LiteralPtf(1e-3, 512, 4, 10, 512, 512, 7500);
    SimProtocol protocol;
    protocol.mode = SimMode::kCoexistence;
    const auto same = SimulateCoexistence(scenario.victim, *scenario.disturber, raw.ber, protocol);
    protocol.channelMode = ChannelMode::kDisjoint;
    const auto disjoint = SimulateCoexistence(scenario.victim, *scenario.disturber, raw.ber, protocol);
    const double rel = std::abs(same.empiricalPtf - model) / model;
    const double t = Elapsed(start);
    const bool modelHolds = std::abs(model - 0.64103) <= 5e-6;
    return {same.victimPackets >= 1000000 && rel <= 0.15 && modelHolds &&
                disjoint.failedPackets == 0 && t < 180.0,
            Fmt("%.0f packets (>=1e6), sim %.5f vs 0.64103 (rel<=0.15), disjoint failures %.0f (==0), "
                "%.1f s",
                static_cast<double>(same.victimPackets), same.empiricalPtf,
                static_cast<double>(disjoint.failedPackets), t)};
}

std::string
ReadFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict
Reproducibility()
{
    const auto start = Clock::now();
    const auto dir = std::filesystem::temp_directory_path() / "bletradeoff-acceptance";
    std::filesystem::create_directories(dir);
    const std::string config = (kConfigDir / "base.json").string();
    std::ostringstream sink;
    std::vector<std::string> outputs;
    bool allOk = true;
    for (const char* threads : {"1", "1", "4"})
    {
        const auto path = dir / (std::string("validate-") + std::to_string(outputs.size()) + ".csv");
        allOk = allOk && Run({"validate", "-c", config, "--seed", "42", "--threads", threads, "-o",
                              path.string()},
                             sink, sink) == kExitOk;
        outputs.push_back(ReadFile(path));
    }
    const double t = Elapsed(start);
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    return {allOk && same && t < 120.0,
            Fmt("exit codes ok %.0f, threads 1/1/4 byte-identical %.0f (%.0f bytes), %.1f s (<120 s)",
                allOk ? 1.0 : 0.0, same ? 1.0 : 0.0, static_cast<double>(outputs[0].size()), t)};
}

Verdict
ReadmeScope()
{
    const auto text = ReadFile(kReadme);
    const bool scope = text.find("hardware deviation percentages") != std::string::npos &&
                       text.find("out of scope") != std::string::npos;
    const bool pointers = text.find("criteria 3 and 7") != std::string::npos;
    return {scope && pointers, scope && pointers
                                   ? "README states the hardware-deviation scope and names criteria 3 and 7"
                                   : "README is missing the hardware-deviation scope statement"};
}

} // namespace

int
main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"probability vectors sum to one", ProbabilitySums},
        {"stationary solvers agree", StationaryAgreement},
        {"simulator matches throughput model", SimulatorAgreement},
        {"reliability versus ber endpoints", ReliabilityEndpoints},
        {"throughput peak over payload", PayloadPeak},
        {"reliability independent of victim interval", IntervalIndependence},
        {"coexistence simulator matches reliability model", CoexistenceAgreement},
        {"validate is reproducible across thread counts", Reproducibility},
        {"README scope statement", ReadmeScope},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto start = Clock::now();
        Verdict v{false, ""};
        try
        {
            v = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += v.pass ? 0 : 1;
        std::printf("[%s] criterion %zu: %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), v.detail.c_str(), Elapsed(start));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
