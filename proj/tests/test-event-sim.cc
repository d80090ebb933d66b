#include "oracles.h"

#include "bletradeoff/errors.h"
#include "bletradeoff/event-sim.h"
#include "bletradeoff/throughput-model.h"

#include <doctest.h>

#include <cmath>

using namespace bletradeoff;

namespace
{

Scenario
MakeScenario(double ber, int payload, int x, double ciUs = 7500.0)
{
    RawScenario raw;
    raw.ber = ber;
    raw.payloadVBytes = payload;
    raw.x = x;
    raw.ciVUs = ciUs;
    raw.payloadDBytes = 50;
    raw.n = 10;
    raw.ciDUs = 7500;
    return ValidateScenario(raw);
}

SimProtocol
Protocol(SimMode mode, long runs, long intervals, unsigned threads = 1)
{
    SimProtocol p;
    p.mode = mode;
    p.runs = runs;
    p.intervalsPerRun = intervals;
    p.masterSeed = 1234;
    p.threads = threads;
    return p;
}

} // namespace

TEST_CASE("corrupt packet")
{
    RandomStream rng(5);
    for (int i = 0; i < 1000; ++i)
    {
        CHECK(CorruptPacket(512, 32, 0.0, rng) == PacketOutcome::kClean);
        CHECK(CorruptPacket(512, 32, 1.0, rng) == PacketOutcome::kAaError);
    }

    const long samples = 1'000'000;
    long aa = 0;
    long crc = 0;
    const auto model = PacketErrorModel::For(512, 32, 1e-3);
    for (long i = 0; i < samples; ++i)
    {
        const auto o = CorruptPacket(model, rng);
        aa += o == PacketOutcome::kAaError;
        crc += o == PacketOutcome::kCrcError;
    }
    const double qAa = 1.0 - std::pow(1.0 - 1e-3, 32);
    CHECK(qAa == doctest::Approx(0.031509).epsilon(1e-5));
    const double sigma = std::sqrt(qAa * (1 - qAa) / samples);
    CHECK(std::abs(double(aa) / samples - qAa) <= 3 * sigma);

    const double qCrc = (1 - qAa) * (1.0 - std::pow(1.0 - 1e-3, 480));
    const double sigmaCrc = std::sqrt(qCrc * (1 - qCrc) / samples);
    CHECK(std::abs(double(crc) / samples - qCrc) <= 4 * sigmaCrc);

    CHECK_THROWS_AS(PacketErrorModel::For(16, 32, 1e-3), ValidationError);
}

TEST_CASE("run seeds")
{
    CHECK(RunSeed(42, 0) == 42);
    CHECK(RunSeed(42, 1) == 43);
    CHECK(RunSeed(42, 3) == (42ULL ^ 3ULL));
}

TEST_CASE("transaction simulator: error-free link")
{
    const auto res = SimulateConnection(MakeScenario(0.0, 50, 3), Protocol(SimMode::kTransaction, 10, 200));
    CHECK(res.empiricalTsr == 1.0);
    CHECK(res.failOpen == 0);
    CHECK(res.failClose == 0);
    CHECK(res.attempts == 10 * 200 * 3);
    CHECK(res.deliveredThroughput == doctest::Approx(ThroughputIdeal(50, 3, Seconds{0.0075})));
}

TEST_CASE("transaction simulator: x = 1 converges to p1")
{
    const auto res = SimulateConnection(MakeScenario(1e-3, 50, 1), Protocol(SimMode::kTransaction, 500, 1000));
    const double p1 = TransactionProbs(1e-3, 512, 512).p1;
    const double sigma = std::sqrt(p1 * (1 - p1) / static_cast<double>(res.attempts));
    CHECK(res.attempts == 500 * 1000);
    CHECK(std::abs(res.empiricalTsr - 0.35897) <= 0.005);
    CHECK(std::abs(res.empiricalTsr - p1) <= 4 * sigma);
    CHECK(res.tsrStdError == doctest::Approx(sigma).epsilon(0.2));
}

TEST_CASE("transaction simulator: x = 2 tracks the chain")
{
    const auto res = SimulateConnection(MakeScenario(1e-3, 50, 2), Protocol(SimMode::kTransaction, 500, 1000));
    CHECK(std::abs(res.empiricalTsr - 0.284572) <= 0.05 * 0.284572);
}

TEST_CASE("transaction simulator bookkeeping")
{
    for (int x : {1, 2, 5})
    {
        const auto res = SimulateConnection(MakeScenario(8e-4, 100, x), Protocol(SimMode::kTransaction, 20, 500));
        CHECK(res.success + res.failOpen + res.failClose == res.attempts);
        long perRunSum = 0;
        for (const auto& r : res.perRun)
        {
            perRunSum += r.Attempts();
            CHECK(r.Attempts() <= 500L * x);
        }
        CHECK(perRunSum == res.attempts);
        const double ideal = ThroughputIdeal(100, x, Seconds{0.0075});
        CHECK(res.empiricalThroughput == doctest::Approx(res.empiricalTsr * ideal).epsilon(1e-12));
        CHECK(res.deliveredThroughput <= res.empiricalThroughput + 1e-9);
        CHECK(res.deferredRetransmissions > 0);
    }
}

TEST_CASE("transaction simulator is deterministic across thread counts")
{
    const auto s = MakeScenario(5e-4, 80, 3);
    const auto a = SimulateConnection(s, Protocol(SimMode::kTransaction, 37, 300, 1));
    const auto b = SimulateConnection(s, Protocol(SimMode::kTransaction, 37, 300, 4));
    const auto c = SimulateConnection(s, Protocol(SimMode::kTransaction, 37, 300, 0));
    CHECK(a.success == b.success);
    CHECK(a.failOpen == b.failOpen);
    CHECK(a.failClose == b.failClose);
    CHECK(a.empiricalTsr == b.empiricalTsr);
    CHECK(a.tsrStdError == b.tsrStdError);
    CHECK(a.success == c.success);
    for (std::size_t i = 0; i < a.perRun.size(); ++i)
    {
        CHECK(a.perRun[i].success == b.perRun[i].success);
    }

    auto other = Protocol(SimMode::kTransaction, 37, 300, 1);
    other.masterSeed = 99;
    CHECK(SimulateConnection(s, other).success != a.success);
}

TEST_CASE("simulator protocol validation")
{
    const auto s = MakeScenario(1e-4, 50, 1);
    CHECK_THROWS_AS(SimulateConnection(s, Protocol(SimMode::kTransaction, 0, 10)), ValidationError);
    CHECK_THROWS_AS(SimulateConnection(s, Protocol(SimMode::kTransaction, 10, 0)), ValidationError);
    CHECK_THROWS_AS(SimulateConnection(s, Protocol(SimMode::kCoexistence, 10, 10)), ValidationError);
    CHECK_THROWS_AS(SimulateCoexistence(s.victim, *s.disturber, 1e-3, Protocol(SimMode::kTransaction, 1, 1)),
                    ValidationError);
    auto d = *s.disturber;
    d.n = 0;
    CHECK_THROWS_AS(SimulateCoexistence(s.victim, d, 1e-3, Protocol(SimMode::kCoexistence, 1, 1)),
                    ValidationError);
    CHECK(ChannelModeFromString("uniform-37") == ChannelMode::kUniform37);
    CHECK(ToString(ChannelMode::kDisjoint) == "disjoint");
    CHECK_THROWS_AS(ChannelModeFromString("hopping"), ValidationError);
}

TEST_CASE("coexistence: trivial regimes")
{
    const auto s = MakeScenario(1e-3, 50, 2);
    auto p = Protocol(SimMode::kCoexistence, 50, 200);
    p.channelMode = ChannelMode::kDisjoint;
    auto res = SimulateCoexistence(s.victim, *s.disturber, 1e-3, p);
    CHECK(res.failedPackets == 0);
    CHECK(res.empiricalPtf == 0.0);
    CHECK(res.victimPackets == 50 * 200 * 4);

    p.channelMode = ChannelMode::kSameChannel;
    res = SimulateCoexistence(s.victim, *s.disturber, 0.0, p);
    CHECK(res.empiricalPtf == 0.0);
    CHECK(res.overlapFraction > 0.0);
}

TEST_CASE("coexistence: saturated regime tracks the closed form")
{
    const auto s = MakeScenario(1e-3, 50, 2);
    const auto res = SimulateCoexistence(s.victim, *s.disturber, 1e-3, Protocol(SimMode::kCoexistence, 250, 1000));
    CHECK(res.victimPackets >= 1'000'000);
    CHECK(std::abs(res.empiricalPtf - 0.64103) <= 0.15 * 0.64103);
}

TEST_CASE("coexistence: no overlap when the disturber fits in the victim's idle time")
{
    // Victim event spans 2 * 80 + 150 = 310 µs every 7.5 ms; a single short
    // disturber packet every 4 s collides only if it lands in that window.
    RawScenario raw;
    raw.ber = 1e-2;
    raw.payloadVBytes = 0;
    raw.x = 1;
    raw.ciVUs = 7500;
    raw.payloadDBytes = 0;
    raw.n = 1;
    raw.ciDUs = 4e6;
    const auto s = ValidateScenario(raw);
    const auto res = SimulateCoexistence(s.victim, *s.disturber, 1e-2, Protocol(SimMode::kCoexistence, 20, 100));
    // 100 intervals = 750 ms < 4 s: at most one disturber packet per run.
    CHECK(res.overlappedPackets <= 20 * 2);
}

TEST_CASE("coexistence: uniform channels scale by 1/37")
{
    const auto s = MakeScenario(1e-3, 50, 2);
    auto p = Protocol(SimMode::kCoexistence, 250, 1000);
    const auto same = SimulateCoexistence(s.victim, *s.disturber, 1e-3, p);
    p.channelMode = ChannelMode::kUniform37;
    const auto hop = SimulateCoexistence(s.victim, *s.disturber, 1e-3, p);
    const double ratio = hop.empiricalPtf / same.empiricalPtf;
    CHECK(ratio == doctest::Approx(1.0 / 37.0).epsilon(0.2));
}

TEST_CASE("coexistence is deterministic across thread counts")
{
    const auto s = MakeScenario(1e-3, 50, 2);
    auto p = Protocol(SimMode::kCoexistence, 30, 200, 1);
    p.channelMode = ChannelMode::kUniform37;
    const auto a = SimulateCoexistence(s.victim, *s.disturber, 1e-3, p);
    p.threads = 3;
    const auto b = SimulateCoexistence(s.victim, *s.disturber, 1e-3, p);
    CHECK(a.failedPackets == b.failedPackets);
    CHECK(a.overlappedPackets == b.overlappedPackets);
    CHECK(a.ptfStdError == b.ptfStdError);
}
