#ifndef BLETRADEOFF_THROUGHPUT_MODEL_H
#define BLETRADEOFF_THROUGHPUT_MODEL_H

#include "bletradeoff/scenario.h"

#include <array>

namespace bletradeoff
{

enum TransactionState
{
    kSuccess = 0,
    kFailOpen = 1,
    kFailClose = 2
};

/**
 * Outcome probabilities of one transaction.
 *
 * p1..p3 apply to a normal transaction (success, fail-open, fail-close), p4..p6 to a
 * retransmission that follows a fail-open. When p2 is zero the retransmission state
 * is unreachable and (p4, p5, p6) is set to (1, 0, 0).
 */
struct TransactionProbabilities
{
    double p1 = 1.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double p4 = 1.0;
    double p5 = 0.0;
    double p6 = 0.0;
    /// p6 as 1 - p4 - p5, kept alongside the full derivation for cross-checking.
    double p6Complement = 0.0;

    std::array<double, 3> NormalRow() const noexcept
    {
        return {p1, p2, p3};
    }

    std::array<double, 3> RetransmissionRow() const noexcept
    {
        return {p4, p5, p6};
    }
};

/// Row-stochastic 3x3 matrix, rows/columns indexed by TransactionState.
using TransitionMatrix = std::array<std::array<double, 3>, 3>;

struct StationaryDistribution
{
    std::array<double, 3> weights{};
    long iterations = 0;
    bool converged = false;

    double Sum() const noexcept
    {
        return weights[0] + weights[1] + weights[2];
    }
};

constexpr double kDefaultStationaryTolerance = 1e-12;
constexpr long kDefaultMaxIterations = 1'000'000;
/// Allowed disagreement between the full P6 derivation and 1 - P4 - P5.
constexpr double kP6ConsistencyTolerance = 1e-9;

/// Probability that `bits` bits all survive a channel with bit error rate `ber`.
double SuccessProbability(double ber, long bits);

/// Complement of SuccessProbability, computed without cancellation for small ber.
double FailureProbability(double ber, long bits);

/// Throws ValidationError for ber outside [0, 1) or lengths below 32 bits, and
/// ConsistencyError if the two P6 routes disagree.
TransactionProbabilities TransactionProbs(double ber, long lcpBits, long lpcBits);

TransitionMatrix BuildTransitionMatrix(const TransactionProbabilities& probs, int x);

/// One step pi * A.
std::array<double, 3> PropagateOnce(const TransitionMatrix& matrix,
                                    const std::array<double, 3>& pi);

/**
 * Power iteration pi <- pi * A from `initial` until the largest component change is
 * at most `tolerance`. Throws ConvergenceError (carrying the last iterate) when the
 * cap is hit. The component sum of `initial` is preserved, so the result is not
 * normalised.
 */
StationaryDistribution StationaryByIteration(const TransitionMatrix& matrix,
                                             std::array<double, 3> initial = {1.0, 0.0, 0.0},
                                             double tolerance = kDefaultStationaryTolerance,
                                             long maxIterations = kDefaultMaxIterations);

/// Solves pi = pi * A, sum(pi) = 1 directly (Gaussian elimination, partial pivoting).
std::array<double, 3> StationaryByLinearSolve(const TransitionMatrix& matrix);

double Tsr(const StationaryDistribution& pi);

/// Single-direction ideal throughput in bit/s: payload * 8 * x / CI.
double ThroughputIdeal(int payloadBytes, int x, Seconds ci);

/// Ideal throughput counting every on-air bit instead of payload only.
double ThroughputIdealOnAir(int totalBits, int x, Seconds ci);

double ThroughputReal(double tsr, double ideal);

struct ThroughputOutputs
{
    TransactionProbabilities probs;
    TransitionMatrix matrix{};
    StationaryDistribution stationary;
    double tsr = 1.0;
    double throughputIdeal = 0.0;
    double throughputReal = 0.0;
    double throughputIdealOnAir = 0.0;
};

ThroughputOutputs EvaluateThroughput(const Scenario& scenario);

} // namespace bletradeoff

#endif
