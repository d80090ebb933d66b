#ifndef BLETRADEOFF_CLI_H
#define BLETRADEOFF_CLI_H

#include "bletradeoff/event-sim.h"
#include "bletradeoff/results-io.h"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bletradeoff
{

enum ExitCode
{
    kExitOk = 0,
    kExitIoError = 1,
    kExitConfigError = 2,
    kExitNonConvergence = 3,
    kExitValidationFailed = 4
};

/// Overrides the built-in default seed; --seed overrides this.
constexpr const char* kSeedEnvVar = "BLE_TRADEOFF_SEED";
constexpr std::uint64_t kDefaultSeed = 42;

/// Model-vs-simulation tolerances used by `validate`.
constexpr double kTsrAbsToleranceSingleTransaction = 0.005;
constexpr double kTsrRelTolerance = 0.05;
constexpr double kPtfRelTolerance = 0.15;

struct RunConfig
{
    std::string command;
    std::string configPath;
    std::optional<std::string> outPath;
    OutputFormat format = OutputFormat::kCsv;
    std::uint64_t seed = kDefaultSeed;
    int verbosity = 0;
    long runs = 500;
    long intervals = 1000;
    unsigned threads = 0;
    SimMode simMode = SimMode::kTransaction;
    ChannelMode channelMode = ChannelMode::kSameChannel;
};

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bletradeoff

#endif
