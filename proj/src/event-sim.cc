#include "bletradeoff/event-sim.h"

#include "bletradeoff/errors.h"
#include "bletradeoff/throughput-model.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace bletradeoff
{

namespace
{

constexpr int kDataChannels = 37;

std::uint64_t
SplitMix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void
CheckProtocol(const SimProtocol& protocol)
{
    std::vector<Issue> issues;
    if (protocol.intervalsPerRun < 1)
    {
        issues.push_back({"intervals", "intervals per run must be >= 1"});
    }
    if (protocol.runs < 1)
    {
        issues.push_back({"runs", "runs must be >= 1"});
    }
    if (!issues.empty())
    {
        throw ValidationError(std::move(issues));
    }
}

/// Runs `body(run)` for every run index, spread over worker threads. Each run writes
/// only its own slot, so the output is independent of scheduling.
std::vector<RunCounts>
ForEachRun(long runs, unsigned threads, const std::function<RunCounts(long)>& body)
{
    std::vector<RunCounts> out(static_cast<std::size_t>(runs));
    if (threads == 0)
    {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<long>(threads, runs));

    std::atomic<long> next{0};
    auto worker = [&] {
        for (long r = next++; r < runs; r = next++)
        {
            out[static_cast<std::size_t>(r)] = body(r);
        }
    };
    if (threads <= 1)
    {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
    {
        pool.emplace_back(worker);
    }
    for (auto& th : pool)
    {
        th.join();
    }
    return out;
}

/// Standard error of the mean of per-run ratios num/den (runs with den = 0 skipped).
template <typename Num, typename Den>
double
RunStdError(const std::vector<RunCounts>& runs, Num num, Den den)
{
    std::vector<double> values;
    values.reserve(runs.size());
    for (const auto& r : runs)
    {
        if (den(r) > 0)
        {
            values.push_back(static_cast<double>(num(r)) / static_cast<double>(den(r)));
        }
    }
    if (values.size() < 2)
    {
        return 0.0;
    }
    double mean = 0.0;
    for (double v : values)
    {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values)
    {
        ss += (v - mean) * (v - mean);
    }
    const double var = ss / static_cast<double>(values.size() - 1);
    return std::sqrt(var / static_cast<double>(values.size()));
}

SimResult
Aggregate(std::vector<RunCounts> perRun, long intervalsPerRun)
{
    SimResult res;
    for (const auto& r : perRun)
    {
        res.success += r.success;
        res.failOpen += r.failOpen;
        res.failClose += r.failClose;
        res.deferredRetransmissions += r.deferredRetransmissions;
        res.victimPackets += r.victimPackets;
        res.failedPackets += r.failedPackets;
        res.overlappedPackets += r.overlappedPackets;
    }
    res.attempts = res.success + res.failOpen + res.failClose;
    res.intervals = intervalsPerRun * static_cast<long>(perRun.size());
    if (res.attempts > 0)
    {
        res.empiricalTsr = static_cast<double>(res.success) / static_cast<double>(res.attempts);
        res.tsrStdError = RunStdError(
            perRun,
            [](const RunCounts& r) { return r.success; },
            [](const RunCounts& r) { return r.Attempts(); });
    }
    if (res.victimPackets > 0)
    {
        res.empiricalPtf =
            static_cast<double>(res.failedPackets) / static_cast<double>(res.victimPackets);
        res.overlapFraction =
            static_cast<double>(res.overlappedPackets) / static_cast<double>(res.victimPackets);
        res.ptfStdError = RunStdError(
            perRun,
            [](const RunCounts& r) { return r.failedPackets; },
            [](const RunCounts& r) { return r.victimPackets; });
    }
    res.perRun = std::move(perRun);
    return res;
}

} // namespace

std::string
ToString(ChannelMode mode)
{
    switch (mode)
    {
    case ChannelMode::kSameChannel:
        return "same-channel";
    case ChannelMode::kUniform37:
        return "uniform-37";
    case ChannelMode::kDisjoint:
        return "disjoint";
    }
    return "unknown";
}

ChannelMode
ChannelModeFromString(const std::string& name)
{
    if (name == "same-channel")
    {
        return ChannelMode::kSameChannel;
    }
    if (name == "uniform-37")
    {
        return ChannelMode::kUniform37;
    }
    if (name == "disjoint")
    {
        return ChannelMode::kDisjoint;
    }
    throw ValidationError("channel_mode",
                          "unknown channel mode '" + name +
                              "' (expected same-channel, uniform-37 or disjoint)");
}

std::uint64_t
RunSeed(std::uint64_t masterSeed, long runIndex)
{
    return masterSeed ^ static_cast<std::uint64_t>(runIndex);
}

PacketErrorModel
PacketErrorModel::For(long bits, long aaBits, double ber)
{
    if (aaBits < 0 || bits < aaBits)
    {
        throw ValidationError("bits", "packet must be at least as long as its access address");
    }
    return {FailureProbability(ber, aaBits), FailureProbability(ber, bits - aaBits)};
}

PacketOutcome
CorruptPacket(const PacketErrorModel& model, RandomStream& rng)
{
    // Both draws always happen so the stream position does not depend on outcomes.
    const bool aaHit = rng.Uniform() < model.qAccessAddress;
    const bool restHit = rng.Uniform() < model.qRemainder;
    if (aaHit)
    {
        return PacketOutcome::kAaError;
    }
    return restHit ? PacketOutcome::kCrcError : PacketOutcome::kClean;
}

PacketOutcome
CorruptPacket(long bits, long aaBits, double ber, RandomStream& rng)
{
    return CorruptPacket(PacketErrorModel::For(bits, aaBits, ber), rng);
}

SimResult
SimulateConnection(const Scenario& scenario, const SimProtocol& protocol)
{
    CheckProtocol(protocol);
    if (protocol.mode != SimMode::kTransaction)
    {
        throw ValidationError("mode", "SimulateConnection needs transaction mode");
    }
    const auto& victim = scenario.victim;
    const double ber = scenario.channel.ber;
    const auto central = PacketErrorModel::For(victim.packetCp.totalBits, victim.packetCp.aaBits, ber);
    const auto peripheral =
        PacketErrorModel::For(victim.packetPc.totalBits, victim.packetPc.aaBits, ber);
    const int x = victim.x;
    const long intervals = protocol.intervalsPerRun;

    auto runOnce = [&](long run) {
        RandomStream rng(RunSeed(protocol.masterSeed, run));
        RunCounts counts;
        bool deferred = false;
        for (long ev = 0; ev < intervals; ++ev)
        {
            if (deferred)
            {
                ++counts.deferredRetransmissions;
                deferred = false;
            }
            // Consecutive CRC failures of the same packet within this event (rule 4).
            int centralCrcRun = 0;
            int peripheralCrcRun = 0;
            // Last fail-open hit only one direction: the next clean exchange pairs the
            // retransmitted packet with one from the following transaction.
            bool oneSided = false;
            for (int slot = 0; slot < x; ++slot)
            {
                const auto c = CorruptPacket(central, rng);
                const auto p = CorruptPacket(peripheral, rng);
                if (c == PacketOutcome::kAaError || p == PacketOutcome::kAaError)
                {
                    ++counts.failClose;
                    deferred = true;
                    break;
                }
                const bool cBad = c == PacketOutcome::kCrcError;
                const bool pBad = p == PacketOutcome::kCrcError;
                centralCrcRun = cBad ? centralCrcRun + 1 : 0;
                peripheralCrcRun = pBad ? peripheralCrcRun + 1 : 0;
                if (centralCrcRun >= 2 || peripheralCrcRun >= 2)
                {
                    ++counts.failClose;
                    deferred = true;
                    break;
                }
                if (!cBad && !pBad)
                {
                    if (oneSided)
                    {
                        ++counts.failOpen;
                    }
                    else
                    {
                        ++counts.success;
                    }
                    oneSided = false;
                    continue;
                }
                ++counts.failOpen;
                oneSided = cBad != pBad;
                if (slot == x - 1)
                {
                    deferred = true;
                }
            }
        }
        return counts;
    };

    auto result = Aggregate(ForEachRun(protocol.runs, protocol.threads, runOnce), intervals);
    const Seconds ci = victim.ci;
    const double ideal = ThroughputIdeal(victim.packetCp.payloadBytes, x, ci);
    result.empiricalThroughput = result.empiricalTsr * ideal;
    result.throughputStdError = result.tsrStdError * ideal;
    result.deliveredThroughput = static_cast<double>(result.success) *
                                 victim.packetCp.payloadBytes * 8.0 /
                                 (static_cast<double>(result.intervals) * ci.count());
    return result;
}

SimResult
SimulateCoexistence(const VictimConfig& victim,
                    const DisturberConfig& disturber,
                    double berV,
                    const SimProtocol& protocol)
{
    CheckProtocol(protocol);
    if (protocol.mode != SimMode::kCoexistence)
    {
        throw ValidationError("mode", "SimulateCoexistence needs coexistence mode");
    }
    if (disturber.n < 1)
    {
        throw ValidationError("n", "disturber packets per event must be >= 1");
    }
    if (!(berV >= 0.0 && berV <= 1.0))
    {
        throw ValidationError("ber", "bit error rate must lie in [0, 1]");
    }

    const double ifs = kInterFrameSpace.count();
    const int m = victim.PacketsPerEvent();
    const double ciV = victim.ci.count();
    const double ptCp = victim.packetCp.airtime.count();
    const double ptPc = victim.packetPc.airtime.count();
    const double ptD = disturber.packet.airtime.count();
    const double ciD = disturber.ciD.count();
    const double stepD = ptD + ifs;
    const double spanD = (disturber.n - 1) * stepD + ptD;
    const int n = disturber.n;
    const ChannelMode channelMode = protocol.channelMode;
    const long intervals = protocol.intervalsPerRun;

    const double qPair =
        FailureProbability(berV, victim.packetCp.totalBits + victim.packetPc.totalBits);
    const double qSingle = FailureProbability(berV, victim.packetCp.totalBits);

    auto runOnce = [&](long run) {
        const std::uint64_t seed = RunSeed(protocol.masterSeed, run);
        RandomStream rng(seed);
        RunCounts counts;
        const double phase = rng.Uniform() * ciD;

        auto disturberChannel = [&](long event) {
            return static_cast<int>(
                SplitMix64(seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(event))) %
                kDataChannels);
        };

        // True if [start, end] strictly intersects a disturber packet on `channel`.
        auto collides = [&](double start, double end, int channel) {
            if (channelMode == ChannelMode::kDisjoint)
            {
                return false;
            }
            const auto firstEvent = static_cast<long>(std::floor((start - phase - spanD) / ciD));
            const auto lastEvent = static_cast<long>(std::floor((end - phase) / ciD));
            for (long e = firstEvent; e <= lastEvent; ++e)
            {
                if (channelMode == ChannelMode::kUniform37 && disturberChannel(e) != channel)
                {
                    continue;
                }
                const double eventStart = phase + static_cast<double>(e) * ciD;
                const int jLo = std::max(0, static_cast<int>(std::floor((start - eventStart - ptD) / stepD)));
                const int jHi = std::min(n - 1, static_cast<int>(std::ceil((end - eventStart) / stepD)));
                for (int j = jLo; j <= jHi; ++j)
                {
                    const double ds = eventStart + j * stepD;
                    const double de = ds + ptD;
                    if (std::max(start, ds) < std::min(end, de))
                    {
                        return true;
                    }
                }
            }
            return false;
        };

        for (long ev = 0; ev < intervals; ++ev)
        {
            const double eventStart = static_cast<double>(ev) * ciV;
            int channel = 0;
            if (channelMode == ChannelMode::kUniform37)
            {
                channel = static_cast<int>(rng.Next() % kDataChannels);
            }
            counts.victimPackets += m;
            double t = eventStart;
            for (int k = 0; k < m; k += 2)
            {
                const bool single = k + 1 >= m;
                const double s0 = t;
                const double e0 = s0 + ptCp;
                bool hit = collides(s0, e0, channel);
                int overlapped = hit ? 1 : 0;
                t = e0 + ifs;
                if (!single)
                {
                    const double s1 = t;
                    const double e1 = s1 + ptPc;
                    const bool hit1 = collides(s1, e1, channel);
                    overlapped += hit1 ? 1 : 0;
                    hit = hit || hit1;
                    t = e1 + ifs;
                }
                counts.overlappedPackets += overlapped;
                if (hit && rng.Uniform() < (single ? qSingle : qPair))
                {
                    counts.failedPackets += single ? 1 : 2;
                }
            }
        }
        return counts;
    };

    return Aggregate(ForEachRun(protocol.runs, protocol.threads, runOnce), intervals);
}

} // namespace bletradeoff
