#include "bletradeoff/results-io.h"

#include "bletradeoff/errors.h"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace bletradeoff
{

namespace
{

using ordered_json = nlohmann::ordered_json;

constexpr const char* kHeader =
    "swept_param,value,tsr,throughput_ideal_bps,throughput_real_bps,p_tf,reliability";

std::string
Printf(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string
FormatValue(double v)
{
    return Printf("%.10g", v);
}

double
Rounded(double v, double scale)
{
    return std::round(v * scale) / scale;
}

std::vector<std::string>
SplitCsvLine(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
    {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',')
    {
        cells.emplace_back();
    }
    return cells;
}

std::optional<double>
ParseOptional(const std::string& cell)
{
    if (cell.empty())
    {
        return std::nullopt;
    }
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size())
    {
        throw ValidationError("csv", "malformed number '" + cell + "'");
    }
    return v;
}

ordered_json
OptionalJson(const std::optional<double>& v, double scale)
{
    return v ? ordered_json(Rounded(*v, scale)) : ordered_json(nullptr);
}

} // namespace

OutputFormat
OutputFormatFromString(const std::string& name)
{
    if (name == "csv")
    {
        return OutputFormat::kCsv;
    }
    if (name == "json")
    {
        return OutputFormat::kJson;
    }
    throw ValidationError("format", "unknown output format '" + name + "' (csv or json)");
}

std::string
FormatProbability(double p)
{
    return Printf("%.6f", p);
}

std::string
FormatThroughput(double bps)
{
    return Printf("%.1f", bps);
}

std::vector<ResultRow>
RowsFromCurves(const std::vector<ParetoCurve>& curves)
{
    std::vector<ResultRow> rows;
    for (const auto& curve : curves)
    {
        for (const auto& pt : curve.points)
        {
            ResultRow row;
            row.sweptParam = ToString(curve.swept);
            row.value = pt.value;
            row.tsr = pt.tsr;
            row.throughputIdeal = pt.throughputIdeal;
            row.throughputReal = pt.throughputReal;
            row.pTf = pt.pTf;
            row.reliability = pt.reliability;
            if (curve.familyParam)
            {
                row.familyParam = ToString(*curve.familyParam);
                row.familyValue = curve.familyValue;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

ResultRow
RowFromModel(const ModelOutputs& outputs)
{
    ResultRow row;
    row.tsr = outputs.throughput.tsr;
    row.throughputIdeal = outputs.throughput.throughputIdeal;
    row.throughputReal = outputs.throughput.throughputReal;
    row.pTf = outputs.pTf;
    row.reliability = outputs.reliability;
    return row;
}

std::string
FormatResults(const std::vector<ResultRow>& rows, OutputFormat format)
{
    bool withFamily = false;
    for (const auto& r : rows)
    {
        withFamily = withFamily || r.familyParam.has_value();
    }

    if (format == OutputFormat::kJson)
    {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows)
        {
            ordered_json o;
            o["swept_param"] = r.sweptParam;
            o["value"] = r.value ? ordered_json(*r.value) : ordered_json(nullptr);
            o["tsr"] = Rounded(r.tsr, 1e6);
            o["throughput_ideal_bps"] = Rounded(r.throughputIdeal, 10.0);
            o["throughput_real_bps"] = Rounded(r.throughputReal, 10.0);
            o["p_tf"] = OptionalJson(r.pTf, 1e6);
            o["reliability"] = OptionalJson(r.reliability, 1e6);
            if (withFamily)
            {
                o["family_param"] = r.familyParam ? ordered_json(*r.familyParam) : ordered_json(nullptr);
                o["family_value"] = r.familyValue ? ordered_json(*r.familyValue) : ordered_json(nullptr);
            }
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }

    std::ostringstream os;
    os << kHeader;
    if (withFamily)
    {
        os << ",family_param,family_value";
    }
    os << "\n";
    for (const auto& r : rows)
    {
        os << r.sweptParam << ',' << (r.value ? FormatValue(*r.value) : "") << ','
           << FormatProbability(r.tsr) << ',' << FormatThroughput(r.throughputIdeal) << ','
           << FormatThroughput(r.throughputReal) << ','
           << (r.pTf ? FormatProbability(*r.pTf) : "") << ','
           << (r.reliability ? FormatProbability(*r.reliability) : "");
        if (withFamily)
        {
            os << ',' << r.familyParam.value_or("") << ','
               << (r.familyValue ? FormatValue(*r.familyValue) : "");
        }
        os << "\n";
    }
    return os.str();
}

std::vector<ResultRow>
ParseResultsCsv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind(kHeader, 0) != 0)
    {
        throw ValidationError("csv", "missing or unexpected header");
    }
    const bool withFamily = line.size() > std::string(kHeader).size();
    const std::size_t columns = withFamily ? 9 : 7;

    std::vector<ResultRow> rows;
    while (std::getline(is, line))
    {
        if (line.empty())
        {
            continue;
        }
        const auto cells = SplitCsvLine(line);
        if (cells.size() != columns)
        {
            throw ValidationError("csv", "wrong column count in '" + line + "'");
        }
        ResultRow r;
        r.sweptParam = cells[0];
        r.value = ParseOptional(cells[1]);
        r.tsr = ParseOptional(cells[2]).value_or(0.0);
        r.throughputIdeal = ParseOptional(cells[3]).value_or(0.0);
        r.throughputReal = ParseOptional(cells[4]).value_or(0.0);
        r.pTf = ParseOptional(cells[5]);
        r.reliability = ParseOptional(cells[6]);
        if (withFamily)
        {
            if (!cells[7].empty())
            {
                r.familyParam = cells[7];
            }
            r.familyValue = ParseOptional(cells[8]);
        }
        rows.push_back(r);
    }
    return rows;
}

std::string
FormatValidation(const std::vector<ValidationCheck>& checks, OutputFormat format)
{
    if (format == OutputFormat::kJson)
    {
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks)
        {
            ordered_json o;
            o["check"] = c.name;
            o["model"] = Rounded(c.model, 1e6);
            o["simulated"] = Rounded(c.simulated, 1e6);
            o["tolerance"] = c.tolerance;
            o["tolerance_kind"] = c.relative ? "relative" : "absolute";
            o["pass"] = c.pass;
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "check,model,simulated,tolerance,tolerance_kind,pass\n";
    for (const auto& c : checks)
    {
        os << c.name << ',' << FormatProbability(c.model) << ',' << FormatProbability(c.simulated)
           << ',' << FormatValue(c.tolerance) << ',' << (c.relative ? "relative" : "absolute")
           << ',' << (c.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

std::string
FormatSimResult(const SimResult& r, SimMode mode, ChannelMode channelMode, OutputFormat format)
{
    const std::string modeName = mode == SimMode::kTransaction ? "transaction" : "coexistence";
    const long runs = static_cast<long>(r.perRun.size());
    if (format == OutputFormat::kJson)
    {
        ordered_json o;
        o["mode"] = modeName;
        o["channel_mode"] = ToString(channelMode);
        o["runs"] = runs;
        o["intervals"] = r.intervals;
        o["attempts"] = r.attempts;
        o["success"] = r.success;
        o["fail_open"] = r.failOpen;
        o["fail_close"] = r.failClose;
        o["deferred_retransmissions"] = r.deferredRetransmissions;
        o["empirical_tsr"] = Rounded(r.empiricalTsr, 1e6);
        o["tsr_std_error"] = Rounded(r.tsrStdError, 1e6);
        o["empirical_throughput_bps"] = Rounded(r.empiricalThroughput, 10.0);
        o["delivered_throughput_bps"] = Rounded(r.deliveredThroughput, 10.0);
        o["victim_packets"] = r.victimPackets;
        o["failed_packets"] = r.failedPackets;
        o["overlapped_packets"] = r.overlappedPackets;
        o["empirical_ptf"] = Rounded(r.empiricalPtf, 1e6);
        o["ptf_std_error"] = Rounded(r.ptfStdError, 1e6);
        return o.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "mode,channel_mode,runs,intervals,attempts,success,fail_open,fail_close,"
          "deferred_retransmissions,empirical_tsr,tsr_std_error,empirical_throughput_bps,"
          "delivered_throughput_bps,victim_packets,failed_packets,overlapped_packets,"
          "empirical_ptf,ptf_std_error\n";
    os << modeName << ',' << ToString(channelMode) << ',' << runs << ',' << r.intervals << ','
       << r.attempts << ',' << r.success << ',' << r.failOpen << ',' << r.failClose << ','
       << r.deferredRetransmissions << ',' << FormatProbability(r.empiricalTsr) << ','
       << FormatProbability(r.tsrStdError) << ',' << FormatThroughput(r.empiricalThroughput)
       << ',' << FormatThroughput(r.deliveredThroughput) << ',' << r.victimPackets << ','
       << r.failedPackets << ',' << r.overlappedPackets << ','
       << FormatProbability(r.empiricalPtf) << ',' << FormatProbability(r.ptfStdError) << "\n";
    return os.str();
}

void
WriteFileAtomically(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
        {
            throw std::system_error(std::make_error_code(std::errc::io_error),
                                    "cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out)
        {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::system_error(std::make_error_code(std::errc::io_error),
                                    "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw std::system_error(ec, "cannot move output into place at " + path.string());
    }
}

} // namespace bletradeoff
