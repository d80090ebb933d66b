#ifndef BLETRADEOFF_RELIABILITY_MODEL_H
#define BLETRADEOFF_RELIABILITY_MODEL_H

#include "bletradeoff/scenario.h"

#include <string>
#include <vector>

namespace bletradeoff
{

/// Victim-under-disturber parameters of the transmission failure model.
/// The victim connection interval is deliberately absent.
struct ReliabilityInputs
{
    double berV = 0.0;
    double lV = 0.0;       ///< (average) bits per victim packet, one direction
    int m = 2;             ///< victim packets per event, both directions
    int n = 1;             ///< disturber packets per event, both directions
    Micros ptV{0.0};       ///< (average) victim packet airtime
    Micros ptD{0.0};       ///< (average) disturber packet airtime
    Micros ciD{kMinConnectionInterval};
    Micros ifs{kInterFrameSpace};
};

/// Throws ValidationError on violated bounds; returns non-fatal warnings (odd m).
std::vector<std::string> ValidateReliabilityInputs(const ReliabilityInputs& inputs);

/// Builds the inputs from a scenario with a disturber; throws ValidationError otherwise.
ReliabilityInputs MakeReliabilityInputs(const Scenario& scenario);

struct FailureTerms
{
    double bitError = 0.0; ///< 1 - (1 - BER_V)^(2 L_V)
    double busyRatio = 0.0; ///< min(1, (m(PT_V+IFS) + n(PT_D+IFS)) / CI_D)
    double gap = 0.0;       ///< 1 - max(0, (IFS - PT_V) / (PT_D + IFS))^m
};

FailureTerms TransmissionFailureTerms(const ReliabilityInputs& inputs);

/// P_TF, probability that a victim transmission fails under the disturber.
double TransmissionFailureProbability(const ReliabilityInputs& inputs);

/// 1 - P_TF.
double Reliability(const ReliabilityInputs& inputs);

} // namespace bletradeoff

#endif
