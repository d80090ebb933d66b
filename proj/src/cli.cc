#include "bletradeoff/cli.h"

#include "bletradeoff/config.h"
#include "bletradeoff/errors.h"
#include "bletradeoff/reliability-model.h"
#include "bletradeoff/sweep.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <system_error>

namespace bletradeoff
{

namespace
{

std::uint64_t
SeedFromEnvironment()
{
    const char* env = std::getenv(kSeedEnvVar);
    if (env == nullptr || *env == '\0')
    {
        return kDefaultSeed;
    }
    try
    {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string(env).size())
        {
            return v;
        }
    }
    catch (const std::exception&)
    {
    }
    throw ValidationError(kSeedEnvVar, "must be an unsigned integer");
}

void
Emit(const RunConfig& cfg, const std::string& content, std::ostream& out)
{
    if (cfg.outPath)
    {
        WriteFileAtomically(*cfg.outPath, content);
    }
    else
    {
        out << content;
    }
}

void
PrintWarnings(const std::vector<std::string>& warnings, std::ostream& err)
{
    for (const auto& w : warnings)
    {
        err << "warning: " << w << "\n";
    }
}

SimProtocol
ProtocolFor(const RunConfig& cfg, SimMode mode, ChannelMode channelMode)
{
    SimProtocol p;
    p.intervalsPerRun = cfg.intervals;
    p.runs = cfg.runs;
    p.masterSeed = cfg.seed;
    p.mode = mode;
    p.channelMode = channelMode;
    p.threads = cfg.threads;
    return p;
}

ValidationCheck
Compare(std::string name, double model, double simulated, double tolerance, bool relative)
{
    ValidationCheck c{std::move(name), model, simulated, tolerance, relative, false};
    const double diff = std::abs(simulated - model);
    c.pass = relative ? diff <= tolerance * std::abs(model) : diff <= tolerance;
    return c;
}

int
CmdModel(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto loaded = LoadConfig(cfg.configPath);
    const auto outputs = EvaluateModel(loaded.scenario);
    PrintWarnings(outputs.warnings, err);
    if (cfg.verbosity > 0)
    {
        const auto& th = outputs.throughput;
        err << "P1..P6 = " << th.probs.p1 << " " << th.probs.p2 << " " << th.probs.p3 << " "
            << th.probs.p4 << " " << th.probs.p5 << " " << th.probs.p6 << "\n"
            << "stationary converged after " << th.stationary.iterations << " iterations\n";
    }
    Emit(cfg, FormatResults({RowFromModel(outputs)}, cfg.format), out);
    return kExitOk;
}

int
CmdReliability(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto loaded = LoadConfig(cfg.configPath);
    const auto inputs = MakeReliabilityInputs(loaded.scenario);
    PrintWarnings(ValidateReliabilityInputs(inputs), err);
    const auto terms = TransmissionFailureTerms(inputs);
    const double pTf = TransmissionFailureProbability(inputs);

    std::ostringstream os;
    if (cfg.format == OutputFormat::kJson)
    {
        os << "{\n  \"ber\": " << inputs.berV << ",\n  \"l_v_bits\": " << inputs.lV
           << ",\n  \"m\": " << inputs.m << ",\n  \"n\": " << inputs.n
           << ",\n  \"bit_error_term\": " << FormatProbability(terms.bitError)
           << ",\n  \"busy_ratio_term\": " << FormatProbability(terms.busyRatio)
           << ",\n  \"gap_term\": " << FormatProbability(terms.gap)
           << ",\n  \"p_tf\": " << FormatProbability(pTf)
           << ",\n  \"reliability\": " << FormatProbability(1.0 - pTf) << "\n}\n";
    }
    else
    {
        os << "ber,l_v_bits,m,n,pt_v_us,pt_d_us,ci_d_us,bit_error_term,busy_ratio_term,"
              "gap_term,p_tf,reliability\n"
           << inputs.berV << ',' << inputs.lV << ',' << inputs.m << ',' << inputs.n << ','
           << inputs.ptV.count() << ',' << inputs.ptD.count() << ',' << inputs.ciD.count() << ','
           << FormatProbability(terms.bitError) << ',' << FormatProbability(terms.busyRatio)
           << ',' << FormatProbability(terms.gap) << ',' << FormatProbability(pTf) << ','
           << FormatProbability(1.0 - pTf) << "\n";
    }
    Emit(cfg, os.str(), out);
    return kExitOk;
}

int
CmdSimulate(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto loaded = LoadConfig(cfg.configPath);
    PrintWarnings(loaded.scenario.warnings, err);
    SimResult result;
    if (cfg.simMode == SimMode::kTransaction)
    {
        result = SimulateConnection(loaded.scenario,
                                    ProtocolFor(cfg, SimMode::kTransaction, cfg.channelMode));
    }
    else
    {
        if (!loaded.scenario.disturber)
        {
            throw ValidationError("disturber", "coexistence mode needs a disturber connection");
        }
        result = SimulateCoexistence(loaded.scenario.victim,
                                     *loaded.scenario.disturber,
                                     loaded.scenario.channel.ber,
                                     ProtocolFor(cfg, SimMode::kCoexistence, cfg.channelMode));
    }
    Emit(cfg, FormatSimResult(result, cfg.simMode, cfg.channelMode, cfg.format), out);
    return kExitOk;
}

int
CmdSweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto loaded = LoadConfig(cfg.configPath);
    if (!loaded.sweep)
    {
        throw ValidationError("sweep", "config has no sweep block");
    }
    PrintWarnings(loaded.scenario.warnings, err);
    const auto curves = Sweep(*loaded.sweep);
    Emit(cfg, FormatResults(RowsFromCurves(curves), cfg.format), out);
    return kExitOk;
}

int
CmdValidate(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto loaded = LoadConfig(cfg.configPath);
    const auto& scenario = loaded.scenario;
    const auto model = EvaluateModel(scenario);
    PrintWarnings(model.warnings, err);

    std::vector<ValidationCheck> checks;
    const auto sim = SimulateConnection(
        scenario, ProtocolFor(cfg, SimMode::kTransaction, ChannelMode::kSameChannel));
    if (scenario.victim.x == 1)
    {
        checks.push_back(Compare("tsr", model.throughput.tsr, sim.empiricalTsr,
                                 kTsrAbsToleranceSingleTransaction, false));
    }
    else
    {
        checks.push_back(
            Compare("tsr", model.throughput.tsr, sim.empiricalTsr, kTsrRelTolerance, true));
    }

    if (scenario.disturber && model.pTf)
    {
        const auto same = SimulateCoexistence(
            scenario.victim, *scenario.disturber, scenario.channel.ber,
            ProtocolFor(cfg, SimMode::kCoexistence, ChannelMode::kSameChannel));
        if (*model.pTf > 0.0)
        {
            checks.push_back(Compare("p_tf", *model.pTf, same.empiricalPtf, kPtfRelTolerance, true));
        }
        else
        {
            checks.push_back(Compare("p_tf", 0.0, same.empiricalPtf, 0.0, false));
        }
        const auto disjoint = SimulateCoexistence(
            scenario.victim, *scenario.disturber, scenario.channel.ber,
            ProtocolFor(cfg, SimMode::kCoexistence, ChannelMode::kDisjoint));
        checks.push_back(Compare("p_tf_disjoint", 0.0, disjoint.empiricalPtf, 0.0, false));
    }

    Emit(cfg, FormatValidation(checks, cfg.format), out);
    bool ok = true;
    for (const auto& c : checks)
    {
        if (!c.pass)
        {
            ok = false;
            err << "validate: " << c.name << " outside tolerance (model " << c.model
                << ", simulated " << c.simulated << ")\n";
        }
    }
    return ok ? kExitOk : kExitValidationFailed;
}

} // namespace

int
Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Throughput and reliability of a BLE connection under interference"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::string simMode = "transaction";
    std::string channelMode = "same-channel";

    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("--config,-c", cfg.configPath, "Scenario JSON")->required();
        sub->add_option("--out,-o", cfg.outPath, "Output file (default: stdout)");
        sub->add_option("--format,-f", format, "csv or json (default from --out extension)");
        sub->add_flag("-v,--verbose", cfg.verbosity, "More diagnostics on stderr");
    };
    auto addSim = [&](CLI::App* sub) {
        sub->add_option("--runs", cfg.runs, "Independent runs")->check(CLI::PositiveNumber);
        sub->add_option("--intervals", cfg.intervals, "Connection intervals per run")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, std::string("Master seed (default $") + kSeedEnvVar +
                                            " or 42)");
        sub->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores");
    };

    auto* model = app.add_subcommand("model", "Closed-form throughput and reliability");
    addCommon(model);
    auto* reliability = app.add_subcommand("reliability", "Transmission failure model only");
    addCommon(reliability);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
    addCommon(simulate);
    addSim(simulate);
    simulate->add_option("--mode", simMode, "transaction or coexistence")
        ->check(CLI::IsMember({"transaction", "coexistence"}));
    simulate->add_option("--channel-mode", channelMode, "same-channel, uniform-37 or disjoint")
        ->check(CLI::IsMember({"same-channel", "uniform-37", "disjoint"}));
    auto* sweep = app.add_subcommand("sweep", "Pareto curves over a parameter grid");
    addCommon(sweep);
    auto* validate = app.add_subcommand("validate", "Cross-check the models against simulation");
    addCommon(validate);
    addSim(validate);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try
    {
        cfg.command = app.get_subcommands().front()->get_name();
        if (!format.empty())
        {
            cfg.format = OutputFormatFromString(format);
        }
        else if (cfg.outPath && std::filesystem::path(*cfg.outPath).extension() == ".json")
        {
            cfg.format = OutputFormat::kJson;
        }
        cfg.seed = seed ? *seed : SeedFromEnvironment();
        cfg.simMode = simMode == "coexistence" ? SimMode::kCoexistence : SimMode::kTransaction;
        cfg.channelMode = ChannelModeFromString(channelMode);

        if (cfg.command == "model")
        {
            return CmdModel(cfg, out, err);
        }
        if (cfg.command == "reliability")
        {
            return CmdReliability(cfg, out, err);
        }
        if (cfg.command == "simulate")
        {
            return CmdSimulate(cfg, out, err);
        }
        if (cfg.command == "sweep")
        {
            return CmdSweep(cfg, out, err);
        }
        return CmdValidate(cfg, out, err);
    }
    catch (const ValidationError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    catch (const ConvergenceError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    catch (const ConsistencyError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

} // namespace bletradeoff
