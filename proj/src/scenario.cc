#include "bletradeoff/scenario.h"

#include "bletradeoff/errors.h"

#include <cmath>
#include <sstream>

namespace bletradeoff
{

namespace
{

std::string
JoinIssues(const std::vector<Issue>& issues)
{
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& issue : issues)
    {
        os << "\n  " << issue.field << ": " << issue.message;
    }
    return os.str();
}

bool
PayloadInRange(long payloadBytes)
{
    return payloadBytes >= 0 && payloadBytes <= kMaxPayloadBytes;
}

void
CheckPayload(std::vector<Issue>& issues, const char* field, long payloadBytes)
{
    if (payloadBytes < 0)
    {
        issues.push_back({field, "payload must be >= 0 bytes"});
    }
    else if (payloadBytes > kMaxPayloadBytes)
    {
        issues.push_back({field, "payload exceeds 251 bytes (BLE maximum)"});
    }
}

void
CheckInterval(std::vector<Issue>& issues, const char* field, double us)
{
    if (!std::isfinite(us) || us < kMinConnectionInterval.count())
    {
        issues.push_back({field, "connection interval below 7500 µs (BLE minimum)"});
    }
}

} // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : std::runtime_error(JoinIssues(issues)),
      m_issues(std::move(issues))
{
}

ValidationError::ValidationError(std::string field, std::string message)
    : ValidationError(std::vector<Issue>{{std::move(field), std::move(message)}})
{
}

int
PacketBitsFromPayload(long payloadBytes)
{
    if (!PayloadInRange(payloadBytes))
    {
        std::vector<Issue> issues;
        CheckPayload(issues, "payload_bytes", payloadBytes);
        throw ValidationError(std::move(issues));
    }
    return static_cast<int>(8 * (payloadBytes + kPacketOverheadBytes));
}

int
PayloadFromPacketBits(long bits)
{
    if (bits % 8 != 0 || !PayloadInRange(bits / 8 - kPacketOverheadBytes))
    {
        throw ValidationError("bits", "not the length of a packet with a 0..251 byte payload");
    }
    return static_cast<int>(bits / 8 - kPacketOverheadBytes);
}

Micros
PacketAirtime(long bits, double phyRate)
{
    if (bits < kMinPacketBits)
    {
        throw ValidationError("bits", "packet shorter than the 80-bit minimum");
    }
    if (!(phyRate > 0.0) || !std::isfinite(phyRate))
    {
        throw ValidationError("phy_rate_bps", "PHY rate must be positive");
    }
    return Micros{static_cast<double>(bits) * 1e6 / phyRate};
}

PacketSpec
PacketSpec::FromPayload(int payloadBytes, double phyRate)
{
    PacketSpec spec;
    spec.payloadBytes = payloadBytes;
    spec.totalBits = PacketBitsFromPayload(payloadBytes);
    spec.airtime = PacketAirtime(spec.totalBits, phyRate);
    return spec;
}

Scenario
ValidateScenario(const RawScenario& raw)
{
    std::vector<Issue> issues;

    if (!(raw.ber >= 0.0 && raw.ber <= 1.0))
    {
        issues.push_back({"ber", "bit error rate must lie in [0, 1]"});
    }
    const bool phyOk = raw.phyRateBps > 0.0 && std::isfinite(raw.phyRateBps);
    if (!phyOk)
    {
        issues.push_back({"phy_rate_bps", "PHY rate must be positive"});
    }
    CheckPayload(issues, "payload_v_bytes", raw.payloadVBytes);
    if (raw.x < 1)
    {
        issues.push_back({"x", "transactions per event must be >= 1"});
    }
    CheckInterval(issues, "ci_v_us", raw.ciVUs);
    if (raw.ifsUs != kInterFrameSpace.count())
    {
        issues.push_back({"ifs_us", "inter frame space is fixed at 150 µs"});
    }

    const int disturberKeys = int(raw.payloadDBytes.has_value()) + int(raw.n.has_value()) +
                              int(raw.ciDUs.has_value());
    if (disturberKeys != 0 && disturberKeys != 3)
    {
        issues.push_back(
            {"disturber", "payload_d_bytes, n and ci_d_us must be given together"});
    }
    if (raw.payloadDBytes)
    {
        CheckPayload(issues, "payload_d_bytes", *raw.payloadDBytes);
    }
    if (raw.n && *raw.n < 1)
    {
        issues.push_back({"n", "disturber packets per event must be >= 1"});
    }
    if (raw.ciDUs)
    {
        CheckInterval(issues, "ci_d_us", *raw.ciDUs);
    }

    if (!issues.empty())
    {
        throw ValidationError(std::move(issues));
    }

    Scenario scenario;
    scenario.channel = {raw.ber, raw.phyRateBps};
    const auto victimPacket = PacketSpec::FromPayload(int(raw.payloadVBytes), raw.phyRateBps);
    scenario.victim.packetCp = victimPacket;
    scenario.victim.packetPc = victimPacket;
    scenario.victim.x = int(raw.x);
    scenario.victim.ci = Micros{raw.ciVUs};
    if (disturberKeys == 3)
    {
        DisturberConfig disturber;
        disturber.packet = PacketSpec::FromPayload(int(*raw.payloadDBytes), raw.phyRateBps);
        disturber.n = int(*raw.n);
        disturber.ciD = Micros{*raw.ciDUs};
        scenario.disturber = disturber;
    }
    scenario.ifs = kInterFrameSpace;
    if (raw.x > kTypicalMaxTransactions)
    {
        scenario.warnings.push_back("x = " + std::to_string(raw.x) +
                                    " exceeds the 5 transactions most controllers allow");
    }
    return scenario;
}

RawScenario
ToRaw(const Scenario& scenario)
{
    RawScenario raw;
    raw.ber = scenario.channel.ber;
    raw.phyRateBps = scenario.channel.phyRate;
    raw.payloadVBytes = scenario.victim.packetCp.payloadBytes;
    raw.x = scenario.victim.x;
    raw.ciVUs = scenario.victim.ci.count();
    raw.ifsUs = scenario.ifs.count();
    if (scenario.disturber)
    {
        raw.payloadDBytes = scenario.disturber->packet.payloadBytes;
        raw.n = scenario.disturber->n;
        raw.ciDUs = scenario.disturber->ciD.count();
    }
    return raw;
}

} // namespace bletradeoff
