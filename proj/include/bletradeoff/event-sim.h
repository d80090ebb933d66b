#ifndef BLETRADEOFF_EVENT_SIM_H
#define BLETRADEOFF_EVENT_SIM_H

#include "bletradeoff/scenario.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bletradeoff
{

enum class SimMode
{
    kTransaction,
    kCoexistence
};

/// How the victim and disturber channels relate in coexistence runs.
enum class ChannelMode
{
    kSameChannel, ///< hopping disabled, both on one channel
    kUniform37,   ///< each event independently on one of 37 data channels
    kDisjoint     ///< never on the same channel
};

std::string ToString(ChannelMode mode);
ChannelMode ChannelModeFromString(const std::string& name);

struct SimProtocol
{
    long intervalsPerRun = 1000;
    long runs = 500;
    std::uint64_t masterSeed = 42;
    SimMode mode = SimMode::kTransaction;
    ChannelMode channelMode = ChannelMode::kSameChannel;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

/// Counts collected by one run.
struct RunCounts
{
    long success = 0;
    long failOpen = 0;
    long failClose = 0;
    long deferredRetransmissions = 0;
    long victimPackets = 0;
    long failedPackets = 0;
    long overlappedPackets = 0;

    long Attempts() const noexcept
    {
        return success + failOpen + failClose;
    }
};

struct SimResult
{
    long success = 0;
    long failOpen = 0;
    long failClose = 0;
    long attempts = 0;
    long deferredRetransmissions = 0;
    long intervals = 0;

    double empiricalTsr = 0.0;
    double tsrStdError = 0.0;
    /// successes * payload bits / (attempts * CI / x)
    double empiricalThroughput = 0.0;
    double throughputStdError = 0.0;
    /// successes * payload bits / (intervals * CI)
    double deliveredThroughput = 0.0;

    long victimPackets = 0;
    long failedPackets = 0;
    long overlappedPackets = 0;
    double empiricalPtf = 0.0;
    double ptfStdError = 0.0;
    double overlapFraction = 0.0;

    std::vector<RunCounts> perRun;
};

enum class PacketOutcome
{
    kClean,
    kCrcError,
    kAaError
};

/// Per-run uniform source. The engine is fixed and the mapping to [0, 1) uses the
/// top 53 bits, so streams are identical across standard library implementations.
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed)
        : m_engine(seed)
    {
    }

    double Uniform()
    {
        return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
    }

    std::uint64_t Next()
    {
        return m_engine();
    }

  private:
    std::mt19937_64 m_engine;
};

/// Seed of run `runIndex`: master seed XOR run index.
std::uint64_t RunSeed(std::uint64_t masterSeed, long runIndex);

/// Failure probabilities of the access address and of the rest of one packet.
struct PacketErrorModel
{
    double qAccessAddress = 0.0;
    double qRemainder = 0.0;

    static PacketErrorModel For(long bits, long aaBits, double ber);
};

PacketOutcome CorruptPacket(const PacketErrorModel& model, RandomStream& rng);
PacketOutcome CorruptPacket(long bits, long aaBits, double ber, RandomStream& rng);

/// Bit-error transaction simulator following the four retransmission rules.
SimResult SimulateConnection(const Scenario& scenario, const SimProtocol& protocol);

/// Two-connection timeline simulator: victim failure needs channel coincidence,
/// airtime overlap with a disturber packet, and bit corruption.
SimResult SimulateCoexistence(const VictimConfig& victim,
                              const DisturberConfig& disturber,
                              double berV,
                              const SimProtocol& protocol);

} // namespace bletradeoff

#endif
