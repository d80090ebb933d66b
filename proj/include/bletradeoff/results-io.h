#ifndef BLETRADEOFF_RESULTS_IO_H
#define BLETRADEOFF_RESULTS_IO_H

#include "bletradeoff/event-sim.h"
#include "bletradeoff/sweep.h"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bletradeoff
{

enum class OutputFormat
{
    kCsv,
    kJson
};

OutputFormat OutputFormatFromString(const std::string& name);

/// One line of model output. `value` is empty for a single, unswept scenario.
struct ResultRow
{
    std::string sweptParam = "none";
    std::optional<double> value;
    double tsr = 0.0;
    double throughputIdeal = 0.0;
    double throughputReal = 0.0;
    std::optional<double> pTf;
    std::optional<double> reliability;
    std::optional<std::string> familyParam;
    std::optional<double> familyValue;
};

std::vector<ResultRow> RowsFromCurves(const std::vector<ParetoCurve>& curves);
ResultRow RowFromModel(const ModelOutputs& outputs);

/// Columns: swept_param, value, tsr, throughput_ideal_bps, throughput_real_bps, p_tf,
/// reliability, then family_param, family_value when any row carries a family.
std::string FormatResults(const std::vector<ResultRow>& rows, OutputFormat format);
std::vector<ResultRow> ParseResultsCsv(const std::string& text);

/// One model-versus-simulation comparison of the validate command.
struct ValidationCheck
{
    std::string name;
    double model = 0.0;
    double simulated = 0.0;
    double tolerance = 0.0;
    bool relative = false;
    bool pass = false;
};

std::string FormatValidation(const std::vector<ValidationCheck>& checks, OutputFormat format);
std::string FormatSimResult(const SimResult& result,
                            SimMode mode,
                            ChannelMode channelMode,
                            OutputFormat format);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void WriteFileAtomically(const std::filesystem::path& path, const std::string& content);

/// Fixed-precision helpers shared by every writer.
std::string FormatProbability(double p);
std::string FormatThroughput(double bps);

} // namespace bletradeoff

#endif
