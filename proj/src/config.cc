#include "bletradeoff/config.h"

#include "bletradeoff/errors.h"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace bletradeoff
{

namespace
{

using nlohmann::json;

const std::set<std::string> kScenarioKeys = {"ber",
                                             "payload_v_bytes",
                                             "payload_d_bytes",
                                             "x",
                                             "n",
                                             "ci_v_us",
                                             "ci_d_us",
                                             "ifs_us",
                                             "phy_rate_bps",
                                             "sweep"};
const std::set<std::string> kSweepKeys = {"param", "values", "min", "max", "step", "points",
                                          "scale", "family"};
const std::set<std::string> kFamilyKeys = {"param", "values"};

class Reader
{
  public:
    void Unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix)
    {
        for (const auto& [key, value] : obj.items())
        {
            if (!allowed.count(key))
            {
                m_issues.push_back({prefix + key, "unknown key"});
            }
        }
    }

    std::optional<double> Number(const json& obj, const std::string& key, const std::string& path)
    {
        if (!obj.contains(key))
        {
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number())
        {
            m_issues.push_back({path, "expected a number"});
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<long> Integer(const json& obj, const std::string& key, const std::string& path)
    {
        if (!obj.contains(key))
        {
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number_integer())
        {
            m_issues.push_back({path, "expected an integer"});
            return std::nullopt;
        }
        return v.get<long>();
    }

    std::optional<std::string> String(const json& obj, const std::string& key, const std::string& path)
    {
        if (!obj.contains(key))
        {
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_string())
        {
            m_issues.push_back({path, "expected a string"});
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    std::optional<std::vector<double>> Numbers(const json& obj,
                                               const std::string& key,
                                               const std::string& path)
    {
        if (!obj.contains(key))
        {
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_array() || v.empty())
        {
            m_issues.push_back({path, "expected a non-empty array of numbers"});
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : v)
        {
            if (!e.is_number())
            {
                m_issues.push_back({path, "expected a non-empty array of numbers"});
                return std::nullopt;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    void Fail(std::string field, std::string message)
    {
        m_issues.push_back({std::move(field), std::move(message)});
    }

    template <typename F>
    void Guard(const std::string& field, F&& fn)
    {
        try
        {
            fn();
        }
        catch (const ValidationError& e)
        {
            for (const auto& issue : e.Issues())
            {
                m_issues.push_back({field + "." + issue.field, issue.message});
            }
        }
    }

    std::vector<Issue>& Issues()
    {
        return m_issues;
    }

  private:
    std::vector<Issue> m_issues;
};

std::optional<SweepParam>
ReadParam(Reader& rd, const json& obj, const std::string& path)
{
    const auto name = rd.String(obj, "param", path + ".param");
    if (!name)
    {
        if (!obj.contains("param"))
        {
            rd.Fail(path + ".param", "missing");
        }
        return std::nullopt;
    }
    std::optional<SweepParam> param;
    rd.Guard(path, [&] { param = SweepParamFromString(*name); });
    return param;
}

std::optional<SweepSpec>
ReadSweep(Reader& rd, const json& obj, const RawScenario& base)
{
    if (!obj.is_object())
    {
        rd.Fail("sweep", "expected an object");
        return std::nullopt;
    }
    rd.Unknown(obj, kSweepKeys, "sweep.");

    SweepSpec spec;
    spec.base = base;
    const auto param = ReadParam(rd, obj, "sweep");
    const auto values = rd.Numbers(obj, "values", "sweep.values");
    const auto min = rd.Number(obj, "min", "sweep.min");
    const auto max = rd.Number(obj, "max", "sweep.max");
    const auto step = rd.Number(obj, "step", "sweep.step");
    const auto points = rd.Integer(obj, "points", "sweep.points");
    const auto scale = rd.String(obj, "scale", "sweep.scale");

    if (scale && *scale != "linear" && *scale != "log")
    {
        rd.Fail("sweep.scale", "expected \"linear\" or \"log\"");
    }
    if (param)
    {
        spec.swept = *param;
        if (values)
        {
            if (min || max || step || points || scale)
            {
                rd.Fail("sweep.values", "give either values or a min/max range, not both");
            }
            spec.values = *values;
        }
        else if (min && max)
        {
            const bool log = scale ? *scale == "log" : (*param == SweepParam::kBer && !step);
            rd.Guard("sweep", [&] {
                if (log)
                {
                    if (step)
                    {
                        throw ValidationError("step", "log ranges take points, not step");
                    }
                    spec.values = LogGrid(*min, *max, int(points.value_or(kDefaultBerPoints)));
                }
                else
                {
                    if (points)
                    {
                        throw ValidationError("points", "linear ranges take step, not points");
                    }
                    double defaultStep = kDefaultPayloadStep;
                    if (*param == SweepParam::kCiV)
                    {
                        defaultStep = kDefaultCiStepUs;
                    }
                    else if (*param == SweepParam::kBer)
                    {
                        throw ValidationError("step", "linear ber ranges need an explicit step");
                    }
                    spec.values = LinearGrid(*min, *max, step.value_or(defaultStep));
                }
            });
        }
        else
        {
            rd.Fail("sweep", "needs values or both min and max");
        }
    }

    if (obj.contains("family"))
    {
        const auto& fam = obj.at("family");
        if (!fam.is_object())
        {
            rd.Fail("sweep.family", "expected an object");
        }
        else
        {
            rd.Unknown(fam, kFamilyKeys, "sweep.family.");
            const auto fparam = ReadParam(rd, fam, "sweep.family");
            const auto fvalues = rd.Numbers(fam, "values", "sweep.family.values");
            if (!fam.contains("values"))
            {
                rd.Fail("sweep.family.values", "missing");
            }
            if (fparam && fvalues)
            {
                spec.family = SweepFamily{*fparam, *fvalues};
            }
        }
    }
    return spec;
}

} // namespace

LoadedConfig
ParseConfig(const std::string& text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ValidationError("config", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw ValidationError("config", "expected a JSON object");
    }

    Reader rd;
    rd.Unknown(doc, kScenarioKeys, "");

    RawScenario raw;
    if (auto v = rd.Number(doc, "ber", "ber"))
    {
        raw.ber = *v;
    }
    else if (!doc.contains("ber"))
    {
        rd.Fail("ber", "missing");
    }
    if (auto v = rd.Integer(doc, "payload_v_bytes", "payload_v_bytes"))
    {
        raw.payloadVBytes = *v;
    }
    else if (!doc.contains("payload_v_bytes"))
    {
        rd.Fail("payload_v_bytes", "missing");
    }
    if (auto v = rd.Integer(doc, "x", "x"))
    {
        raw.x = *v;
    }
    if (auto v = rd.Number(doc, "ci_v_us", "ci_v_us"))
    {
        raw.ciVUs = *v;
    }
    raw.payloadDBytes = rd.Integer(doc, "payload_d_bytes", "payload_d_bytes");
    raw.n = rd.Integer(doc, "n", "n");
    raw.ciDUs = rd.Number(doc, "ci_d_us", "ci_d_us");
    if (auto v = rd.Number(doc, "ifs_us", "ifs_us"))
    {
        raw.ifsUs = *v;
    }
    if (auto v = rd.Number(doc, "phy_rate_bps", "phy_rate_bps"))
    {
        raw.phyRateBps = *v;
    }

    LoadedConfig cfg;
    cfg.raw = raw;
    try
    {
        cfg.scenario = ValidateScenario(raw);
    }
    catch (const ValidationError& e)
    {
        for (const auto& issue : e.Issues())
        {
            rd.Issues().push_back(issue);
        }
    }
    if (doc.contains("sweep"))
    {
        cfg.sweep = ReadSweep(rd, doc.at("sweep"), raw);
    }
    if (!rd.Issues().empty())
    {
        throw ValidationError(std::move(rd.Issues()));
    }
    return cfg;
}

LoadedConfig
LoadConfig(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ValidationError("config", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return ParseConfig(buf.str());
}

} // namespace bletradeoff
