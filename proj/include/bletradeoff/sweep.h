#ifndef BLETRADEOFF_SWEEP_H
#define BLETRADEOFF_SWEEP_H

#include "bletradeoff/reliability-model.h"
#include "bletradeoff/scenario.h"
#include "bletradeoff/throughput-model.h"

#include <optional>
#include <string>
#include <vector>

namespace bletradeoff
{

/// Closed-form results for one scenario. p_tf/reliability need a disturber.
struct ModelOutputs
{
    ThroughputOutputs throughput;
    std::optional<double> pTf;
    std::optional<double> reliability;
    std::vector<std::string> warnings;
};

ModelOutputs EvaluateModel(const Scenario& scenario);

enum class SweepParam
{
    kBer,
    kPayloadV,
    kCiV,
    kX ///< family parameter only
};

std::string ToString(SweepParam param);
SweepParam SweepParamFromString(const std::string& name);

constexpr int kDefaultBerPoints = 50;
constexpr double kDefaultPayloadStep = 1.0;
constexpr double kDefaultCiStepUs = 2500.0;

/// min, min + step, ... up to max (inclusive, up to rounding).
std::vector<double> LinearGrid(double min, double max, double step);

/// `points` values evenly spaced in log10 between min and max, both included.
std::vector<double> LogGrid(double min, double max, int points);

struct SweepFamily
{
    SweepParam param = SweepParam::kBer;
    std::vector<double> values;
};

struct SweepSpec
{
    RawScenario base;
    SweepParam swept = SweepParam::kBer;
    std::vector<double> values;
    std::optional<SweepFamily> family;
};

struct ParetoPoint
{
    double value = 0.0;
    double tsr = 0.0;
    double throughputIdeal = 0.0;
    double throughputReal = 0.0;
    std::optional<double> pTf;
    std::optional<double> reliability;
};

struct ParetoCurve
{
    SweepParam swept = SweepParam::kBer;
    std::optional<SweepParam> familyParam;
    double familyValue = 0.0;
    std::vector<ParetoPoint> points;
};

/// Applies `value` of `param` to a raw scenario. Integral parameters must be integral.
void ApplySweepValue(RawScenario& raw, SweepParam param, double value);

/// Evaluates both closed forms at every grid point, one curve per family member,
/// points in ascending swept value. Point failures are rethrown naming the point.
std::vector<ParetoCurve> Sweep(const SweepSpec& spec);

struct ThroughputPeak
{
    double value = 0.0;
    double throughputReal = 0.0;
    std::optional<double> reliability;
};

/// Grid point with the highest real throughput; ties go to the smaller swept value.
ThroughputPeak FindThroughputPeak(const ParetoCurve& curve);

/// True when `series` rises then falls with at most one local maximum; steps smaller
/// than `tolerance` (relative to the series maximum) count as flat.
bool IsUnimodal(const std::vector<double>& series, double tolerance = 1e-12);

} // namespace bletradeoff

#endif
