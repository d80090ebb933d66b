#include "bletradeoff/throughput-model.h"

#include "bletradeoff/errors.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace bletradeoff
{

namespace
{

void
CheckBer(double ber)
{
    if (!(ber >= 0.0 && ber <= 1.0))
    {
        throw ValidationError("ber", "bit error rate must lie in [0, 1]");
    }
}

} // namespace

double
SuccessProbability(double ber, long bits)
{
    CheckBer(ber);
    if (bits < 0)
    {
        throw ValidationError("bits", "bit count must be >= 0");
    }
    if (bits == 0)
    {
        return 1.0;
    }
    if (ber == 1.0)
    {
        return 0.0;
    }
    return std::exp(static_cast<double>(bits) * std::log1p(-ber));
}

double
FailureProbability(double ber, long bits)
{
    CheckBer(ber);
    if (bits < 0)
    {
        throw ValidationError("bits", "bit count must be >= 0");
    }
    if (bits == 0)
    {
        return 0.0;
    }
    if (ber == 1.0)
    {
        return 1.0;
    }
    return -std::expm1(static_cast<double>(bits) * std::log1p(-ber));
}

TransactionProbabilities
TransactionProbs(double ber, long lcpBits, long lpcBits)
{
    CheckBer(ber);
    if (ber == 1.0)
    {
        throw ValidationError("ber", "ber = 1 corrupts every bit; the chain is degenerate");
    }
    if (lcpBits < kAccessAddressBits || lpcBits < kAccessAddressBits)
    {
        throw ValidationError("bits", "packet lengths must cover the 32-bit access address");
    }

    // rho/q for the access address and for the remainder of each direction.
    const double aa = SuccessProbability(ber, kAccessAddressBits);
    const double qAa = FailureProbability(ber, kAccessAddressBits);
    const double cp = SuccessProbability(ber, lcpBits - kAccessAddressBits);
    const double qCp = FailureProbability(ber, lcpBits - kAccessAddressBits);
    const double pc = SuccessProbability(ber, lpcBits - kAccessAddressBits);
    const double qPc = FailureProbability(ber, lpcBits - kAccessAddressBits);
    const double aa2 = aa * aa;

    TransactionProbabilities probs;
    probs.p1 = aa * cp * aa * pc;
    // The three fail-open cases: central CRC only, peripheral CRC only, both.
    const double openCentral = aa * qCp * aa * pc;
    const double openPeripheral = aa * cp * aa * qPc;
    const double openBoth = aa * qCp * aa * qPc;
    probs.p2 = openCentral + openPeripheral + openBoth;
    probs.p3 = qAa + aa * qAa;

    if (!(probs.p2 > 0.0))
    {
        probs.p2 = 0.0;
        probs.p4 = 1.0;
        probs.p5 = 0.0;
        probs.p6 = 0.0;
        probs.p6Complement = 0.0;
        return probs;
    }

    // Each numerator of P4..P6 is a sum over the fail-open cases, weighted by
    // case / P2. That weight does not depend on the access address, so it is
    // formed from the remainders only: P2 = rho_AA^2 (1 - rho_CP rho_PC).
    const double qRemainders = FailureProbability(ber, lcpBits + lpcBits - 2 * kAccessAddressBits);
    const double wCentral = qCp * pc / qRemainders;
    const double wPeripheral = cp * qPc / qRemainders;
    const double wBoth = qCp * qPc / qRemainders;

    const double qCentralPacket = FailureProbability(ber, lcpBits);
    const double qPeripheralPacket = FailureProbability(ber, lpcBits);
    const double qTransaction = FailureProbability(ber, lcpBits + lpcBits);

    // Only a retransmission of a doubly-failed transaction counts as success;
    // the clean exchange after a single-sided failure is booked as fail-open.
    probs.p4 = wBoth * probs.p1;
    probs.p5 = wCentral * (aa * cp * aa) + wPeripheral * (aa2 * pc);
    probs.p6 = wCentral * (qCentralPacket + aa * cp * qAa) +
               wPeripheral * (qAa + aa * qPeripheralPacket) + wBoth * qTransaction;
    probs.p6Complement = 1.0 - probs.p4 - probs.p5;
    // Rounding can push a weight a few ulp past one when a single case dominates.
    probs.p4 = std::min(probs.p4, 1.0);
    probs.p5 = std::min(probs.p5, 1.0);
    probs.p6 = std::min(probs.p6, 1.0);

    if (std::abs(probs.p6 - probs.p6Complement) > kP6ConsistencyTolerance)
    {
        throw ConsistencyError("P6 derivation disagrees with 1 - P4 - P5 at ber = " +
                               std::to_string(ber));
    }
    return probs;
}

TransitionMatrix
BuildTransitionMatrix(const TransactionProbabilities& probs, int x)
{
    if (x < 1)
    {
        throw ValidationError("x", "transactions per event must be >= 1");
    }
    const auto normal = probs.NormalRow();
    const auto retx = probs.RetransmissionRow();
    const double leave = 1.0 / x;
    const double stay = 1.0 - leave;

    TransitionMatrix matrix{};
    matrix[kSuccess] = normal;
    matrix[kFailClose] = normal;
    for (int j = 0; j < 3; ++j)
    {
        matrix[kFailOpen][j] = leave * normal[j] + stay * retx[j];
    }
    return matrix;
}

std::array<double, 3>
PropagateOnce(const TransitionMatrix& matrix, const std::array<double, 3>& pi)
{
    std::array<double, 3> next{};
    for (int j = 0; j < 3; ++j)
    {
        next[j] = pi[0] * matrix[0][j] + pi[1] * matrix[1][j] + pi[2] * matrix[2][j];
    }
    return next;
}

StationaryDistribution
StationaryByIteration(const TransitionMatrix& matrix,
                      std::array<double, 3> initial,
                      double tolerance,
                      long maxIterations)
{
    for (double w : initial)
    {
        if (!(w >= 0.0) || !std::isfinite(w))
        {
            throw ValidationError("pi0", "initial distribution must be non-negative");
        }
    }

    StationaryDistribution result;
    result.weights = initial;
    for (long it = 1; it <= maxIterations; ++it)
    {
        const auto next = PropagateOnce(matrix, result.weights);
        double change = 0.0;
        for (int j = 0; j < 3; ++j)
        {
            change = std::max(change, std::abs(next[j] - result.weights[j]));
        }
        result.weights = next;
        result.iterations = it;
        if (change <= tolerance)
        {
            result.converged = true;
            return result;
        }
    }
    throw ConvergenceError("power iteration did not converge within " +
                               std::to_string(maxIterations) + " iterations",
                           result.weights,
                           result.iterations);
}

std::array<double, 3>
StationaryByLinearSolve(const TransitionMatrix& matrix)
{
    // (A^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1.
    std::array<std::array<double, 4>, 3> aug{};
    for (int i = 0; i < 2; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            aug[i][j] = matrix[j][i] - (i == j ? 1.0 : 0.0);
        }
        aug[i][3] = 0.0;
    }
    aug[2] = {1.0, 1.0, 1.0, 1.0};

    for (int col = 0; col < 3; ++col)
    {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
        {
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col]))
            {
                pivot = r;
            }
        }
        if (aug[pivot][col] == 0.0)
        {
            throw ConvergenceError("stationary balance equations are singular", {}, 0);
        }
        std::swap(aug[col], aug[pivot]);
        for (int r = 0; r < 3; ++r)
        {
            if (r == col)
            {
                continue;
            }
            const double f = aug[r][col] / aug[col][col];
            for (int k = col; k < 4; ++k)
            {
                aug[r][k] -= f * aug[col][k];
            }
        }
    }
    return {aug[0][3] / aug[0][0], aug[1][3] / aug[1][1], aug[2][3] / aug[2][2]};
}

double
Tsr(const StationaryDistribution& pi)
{
    const double sum = pi.Sum();
    if (!(sum > 0.0))
    {
        throw ValidationError("pi", "stationary distribution has zero mass");
    }
    return std::clamp(pi.weights[kSuccess] / sum, 0.0, 1.0);
}

double
ThroughputIdeal(int payloadBytes, int x, Seconds ci)
{
    return static_cast<double>(payloadBytes) * 8.0 * x / ci.count();
}

double
ThroughputIdealOnAir(int totalBits, int x, Seconds ci)
{
    return static_cast<double>(totalBits) * x / ci.count();
}

double
ThroughputReal(double tsr, double ideal)
{
    if (!(tsr >= 0.0 && tsr <= 1.0))
    {
        throw ValidationError("tsr", "TSR must lie in [0, 1]");
    }
    return tsr * ideal;
}

ThroughputOutputs
EvaluateThroughput(const Scenario& scenario)
{
    const auto& victim = scenario.victim;
    ThroughputOutputs out;
    out.probs = TransactionProbs(scenario.channel.ber,
                                 victim.packetCp.totalBits,
                                 victim.packetPc.totalBits);
    out.matrix = BuildTransitionMatrix(out.probs, victim.x);
    out.stationary = StationaryByIteration(out.matrix);
    out.tsr = Tsr(out.stationary);
    const Seconds ci = victim.ci;
    out.throughputIdeal = ThroughputIdeal(victim.packetCp.payloadBytes, victim.x, ci);
    out.throughputReal = ThroughputReal(out.tsr, out.throughputIdeal);
    out.throughputIdealOnAir = ThroughputIdealOnAir(victim.packetCp.totalBits, victim.x, ci);
    return out;
}

} // namespace bletradeoff
