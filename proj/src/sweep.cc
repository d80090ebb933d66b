#include "bletradeoff/sweep.h"

#include "bletradeoff/errors.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bletradeoff
{

namespace
{

std::string
PointLabel(const ParetoCurve& curve, double value)
{
    std::ostringstream os;
    os.precision(10);
    os << "sweep point " << ToString(curve.swept) << "=" << value;
    if (curve.familyParam)
    {
        os << " (" << ToString(*curve.familyParam) << "=" << curve.familyValue << ")";
    }
    return os.str();
}

long
Integral(SweepParam param, double value)
{
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9)
    {
        throw ValidationError(ToString(param), "value must be an integer");
    }
    return static_cast<long>(rounded);
}

} // namespace

ModelOutputs
EvaluateModel(const Scenario& scenario)
{
    ModelOutputs out;
    out.warnings = scenario.warnings;
    out.throughput = EvaluateThroughput(scenario);
    if (scenario.disturber)
    {
        const auto inputs = MakeReliabilityInputs(scenario);
        for (auto& w : ValidateReliabilityInputs(inputs))
        {
            out.warnings.push_back(std::move(w));
        }
        out.pTf = TransmissionFailureProbability(inputs);
        out.reliability = 1.0 - *out.pTf;
    }
    return out;
}

std::string
ToString(SweepParam param)
{
    switch (param)
    {
    case SweepParam::kBer:
        return "ber";
    case SweepParam::kPayloadV:
        return "payload_v";
    case SweepParam::kCiV:
        return "ci_v";
    case SweepParam::kX:
        return "x";
    }
    return "unknown";
}

SweepParam
SweepParamFromString(const std::string& name)
{
    if (name == "ber")
    {
        return SweepParam::kBer;
    }
    if (name == "payload_v")
    {
        return SweepParam::kPayloadV;
    }
    if (name == "ci_v")
    {
        return SweepParam::kCiV;
    }
    if (name == "x")
    {
        return SweepParam::kX;
    }
    throw ValidationError("param", "unknown sweep parameter '" + name + "'");
}

std::vector<double>
LinearGrid(double min, double max, double step)
{
    if (!(step > 0.0) || !std::isfinite(min) || !std::isfinite(max) || max < min)
    {
        throw ValidationError("range", "need min <= max and step > 0");
    }
    std::vector<double> values;
    const double slack = 1e-9 * step;
    for (long k = 0;; ++k)
    {
        const double v = min + static_cast<double>(k) * step;
        if (v > max + slack)
        {
            break;
        }
        values.push_back(std::min(v, max));
    }
    return values;
}

std::vector<double>
LogGrid(double min, double max, int points)
{
    if (!(min > 0.0) || max < min || points < 1)
    {
        throw ValidationError("range", "log grid needs 0 < min <= max and points >= 1");
    }
    if (points == 1)
    {
        return {min};
    }
    std::vector<double> values(static_cast<std::size_t>(points));
    const double lo = std::log10(min);
    const double hi = std::log10(max);
    for (int k = 0; k < points; ++k)
    {
        values[k] = std::pow(10.0, lo + (hi - lo) * k / (points - 1));
    }
    values.front() = min;
    values.back() = max;
    return values;
}

void
ApplySweepValue(RawScenario& raw, SweepParam param, double value)
{
    switch (param)
    {
    case SweepParam::kBer:
        raw.ber = value;
        break;
    case SweepParam::kPayloadV:
        raw.payloadVBytes = Integral(param, value);
        break;
    case SweepParam::kCiV:
        raw.ciVUs = value;
        break;
    case SweepParam::kX:
        raw.x = Integral(param, value);
        break;
    }
}

std::vector<ParetoCurve>
Sweep(const SweepSpec& spec)
{
    if (spec.values.empty())
    {
        throw ValidationError("sweep", "swept range is empty");
    }
    if (spec.swept == SweepParam::kX)
    {
        throw ValidationError("sweep.param", "x can only be a family parameter");
    }
    if (spec.family && spec.family->values.empty())
    {
        throw ValidationError("sweep.family", "family value list is empty");
    }
    if (spec.family && spec.family->param == spec.swept)
    {
        throw ValidationError("sweep.family", "family parameter must differ from the swept one");
    }

    std::vector<double> sortedValues = spec.values;
    std::sort(sortedValues.begin(), sortedValues.end());
    sortedValues.erase(std::unique(sortedValues.begin(), sortedValues.end()), sortedValues.end());

    const std::vector<double> familyValues =
        spec.family ? spec.family->values : std::vector<double>{0.0};

    std::vector<ParetoCurve> curves;
    curves.reserve(familyValues.size());
    for (double fv : familyValues)
    {
        ParetoCurve curve;
        curve.swept = spec.swept;
        if (spec.family)
        {
            curve.familyParam = spec.family->param;
            curve.familyValue = fv;
        }
        for (double v : sortedValues)
        {
            try
            {
                RawScenario raw = spec.base;
                if (spec.family)
                {
                    ApplySweepValue(raw, spec.family->param, fv);
                }
                ApplySweepValue(raw, spec.swept, v);
                const auto out = EvaluateModel(ValidateScenario(raw));
                ParetoPoint pt;
                pt.value = v;
                pt.tsr = out.throughput.tsr;
                pt.throughputIdeal = out.throughput.throughputIdeal;
                pt.throughputReal = out.throughput.throughputReal;
                pt.pTf = out.pTf;
                pt.reliability = out.reliability;
                curve.points.push_back(pt);
            }
            catch (const ValidationError& e)
            {
                auto issues = e.Issues();
                issues.insert(issues.begin(), Issue{PointLabel(curve, v), "invalid scenario"});
                throw ValidationError(std::move(issues));
            }
            catch (const ConvergenceError& e)
            {
                throw ConvergenceError(PointLabel(curve, v) + ": " + e.what(),
                                       e.LastIterate(),
                                       e.Iterations());
            }
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

ThroughputPeak
FindThroughputPeak(const ParetoCurve& curve)
{
    if (curve.points.empty())
    {
        throw ValidationError("curve", "curve has no points");
    }
    const ParetoPoint* best = &curve.points.front();
    for (const auto& pt : curve.points)
    {
        // Strict comparison keeps the earliest (smallest) value on ties.
        if (pt.throughputReal > best->throughputReal)
        {
            best = &pt;
        }
    }
    return {best->value, best->throughputReal, best->reliability};
}

bool
IsUnimodal(const std::vector<double>& series, double tolerance)
{
    if (series.size() < 3)
    {
        return true;
    }
    const double scale = *std::max_element(series.begin(), series.end());
    const double eps = tolerance * std::max(std::abs(scale), 1.0);
    bool falling = false;
    for (std::size_t i = 1; i < series.size(); ++i)
    {
        const double d = series[i] - series[i - 1];
        if (d > eps)
        {
            if (falling)
            {
                return false;
            }
        }
        else if (d < -eps)
        {
            falling = true;
        }
    }
    return true;
}

} // namespace bletradeoff
