#include "bletradeoff/reliability-model.h"

#include "bletradeoff/errors.h"

#include <algorithm>
#include <cmath>

namespace bletradeoff
{

std::vector<std::string>
ValidateReliabilityInputs(const ReliabilityInputs& in)
{
    std::vector<Issue> issues;
    if (!(in.berV >= 0.0 && in.berV <= 1.0))
    {
        issues.push_back({"ber", "bit error rate must lie in [0, 1]"});
    }
    if (!(in.lV >= 0.0) || !std::isfinite(in.lV))
    {
        issues.push_back({"l_v", "victim bit length must be >= 0"});
    }
    if (in.m < 1)
    {
        issues.push_back({"m", "victim packets per event must be >= 1"});
    }
    if (in.n < 1)
    {
        issues.push_back({"n", "disturber packets per event must be >= 1"});
    }
    if (!(in.ptV.count() > 0.0))
    {
        issues.push_back({"pt_v", "victim packet time must be positive"});
    }
    if (!(in.ptD.count() > 0.0))
    {
        issues.push_back({"pt_d", "disturber packet time must be positive"});
    }
    if (!(in.ciD >= kMinConnectionInterval))
    {
        issues.push_back({"ci_d_us", "connection interval below 7500 µs (BLE minimum)"});
    }
    if (in.ifs != kInterFrameSpace)
    {
        issues.push_back({"ifs_us", "inter frame space is fixed at 150 µs"});
    }
    if (!issues.empty())
    {
        throw ValidationError(std::move(issues));
    }

    std::vector<std::string> warnings;
    if (in.m % 2 != 0)
    {
        warnings.push_back("m = " + std::to_string(in.m) +
                           " is odd; a full transaction always carries two packets");
    }
    return warnings;
}

ReliabilityInputs
MakeReliabilityInputs(const Scenario& scenario)
{
    if (!scenario.disturber)
    {
        throw ValidationError("disturber", "reliability needs a disturber connection");
    }
    const auto& v = scenario.victim;
    const auto& d = *scenario.disturber;
    ReliabilityInputs in;
    in.berV = scenario.channel.ber;
    in.lV = 0.5 * (v.packetCp.totalBits + v.packetPc.totalBits);
    in.m = v.PacketsPerEvent();
    in.n = d.n;
    in.ptV = 0.5 * (v.packetCp.airtime + v.packetPc.airtime);
    in.ptD = d.packet.airtime;
    in.ciD = d.ciD;
    in.ifs = scenario.ifs;
    return in;
}

FailureTerms
TransmissionFailureTerms(const ReliabilityInputs& in)
{
    ValidateReliabilityInputs(in);

    FailureTerms terms;
    if (in.berV == 1.0)
    {
        terms.bitError = in.lV > 0.0 ? 1.0 : 0.0;
    }
    else
    {
        terms.bitError = -std::expm1(2.0 * in.lV * std::log1p(-in.berV));
    }

    const Micros busy = in.m * (in.ptV + in.ifs) + in.n * (in.ptD + in.ifs);
    terms.busyRatio = std::min(1.0, busy / in.ciD);

    const double gapFraction = std::max(0.0, (in.ifs - in.ptV) / (in.ptD + in.ifs));
    terms.gap = 1.0 - std::pow(gapFraction, in.m);
    return terms;
}

double
TransmissionFailureProbability(const ReliabilityInputs& in)
{
    const auto t = TransmissionFailureTerms(in);
    return std::clamp(t.bitError * t.busyRatio * t.gap, 0.0, 1.0);
}

double
Reliability(const ReliabilityInputs& in)
{
    return 1.0 - TransmissionFailureProbability(in);
}

} // namespace bletradeoff
