#ifndef BLETRADEOFF_SCENARIO_H
#define BLETRADEOFF_SCENARIO_H

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace bletradeoff
{

using Micros = std::chrono::duration<double, std::micro>;
using Seconds = std::chrono::duration<double>;

constexpr int kAccessAddressBits = 32;
/// Preamble, access address, header, MIC-less trailer and CRC of an LE 1M packet.
constexpr int kPacketOverheadBytes = 14;
constexpr long kMinPacketBits = 80;
constexpr int kMaxPayloadBytes = 251;
/// Transactions per event beyond this trigger a warning; most controllers cap there.
constexpr int kTypicalMaxTransactions = 5;
constexpr double kDefaultPhyRate = 1e6;
constexpr Micros kMinConnectionInterval{7500.0};
constexpr Micros kInterFrameSpace{150.0};

struct ChannelCondition
{
    double ber = 0.0;
    double phyRate = kDefaultPhyRate; ///< bits per second
};

struct PacketSpec
{
    int payloadBytes = 0;
    int totalBits = 0;
    Micros airtime{0.0};
    int aaBits = kAccessAddressBits;

    static PacketSpec FromPayload(int payloadBytes, double phyRate = kDefaultPhyRate);
};

struct VictimConfig
{
    PacketSpec packetCp; ///< central -> peripheral
    PacketSpec packetPc; ///< peripheral -> central
    int x = 1;           ///< transactions per connection event
    Micros ci{kMinConnectionInterval};

    int PacketsPerEvent() const noexcept
    {
        return 2 * x;
    }
};

struct DisturberConfig
{
    PacketSpec packet;
    int n = 1; ///< packets per disturber event, both directions together
    Micros ciD{kMinConnectionInterval};
};

struct Scenario
{
    ChannelCondition channel;
    VictimConfig victim;
    std::optional<DisturberConfig> disturber;
    Micros ifs{kInterFrameSpace};
    std::vector<std::string> warnings;
};

/// Unvalidated scenario parameters, field names mirroring the config keys.
struct RawScenario
{
    double ber = 0.0;
    long payloadVBytes = 0;
    long x = 1;
    double ciVUs = 7500.0;
    std::optional<long> payloadDBytes;
    std::optional<long> n;
    std::optional<double> ciDUs;
    double ifsUs = 150.0;
    double phyRateBps = kDefaultPhyRate;
};

/// On-air bits of a packet carrying `payloadBytes`: 8 * (payload + 14).
int PacketBitsFromPayload(long payloadBytes);

/// Inverse of PacketBitsFromPayload. Throws if `bits` is not a valid packet length.
int PayloadFromPacketBits(long bits);

Micros PacketAirtime(long bits, double phyRate = kDefaultPhyRate);

/// Checks every invariant and fills derived fields. Throws ValidationError listing
/// all violations at once.
Scenario ValidateScenario(const RawScenario& raw);

/// Round-trips a validated scenario back to its raw form (used by sweeps).
RawScenario ToRaw(const Scenario& scenario);

} // namespace bletradeoff

#endif
