#ifndef GMI_CLI_HPP
#define GMI_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gmi/errors.hpp"
#include "gmi/ingest.hpp"
#include "gmi/report.hpp"
#include "gmi/rubric.hpp"
#include "gmi/schema.hpp"
#include "gmi/scoring.hpp"

// Command-line front end. run() is the whole program; main() only forwards
// argv and the standard streams so tests can drive it in-process.
namespace gmi::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kUsageFailure = 2 };

enum class Mode { RawIndicators, PrecomputedCategories };

struct RunConfig {
    std::optional<std::string> schema_path;
    std::optional<std::string> template_path;
    std::vector<std::string> input_paths;
    Mode mode = Mode::RawIndicators;
    bool allow_partial = false;
    std::optional<std::string> conversion_table;
    OutputFormat output_format = OutputFormat::Table;
    std::optional<std::string> output_path;
    bool detail = false;
};

// Environment variable naming a default schema file.
inline constexpr const char* kSchemaEnv = "GMI_SCHEMA";

namespace detail {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return in;
}

inline Schema active_schema(const RunConfig& cfg) {
    std::optional<std::string> path = cfg.schema_path;
    if (!path) {
        if (const char* env = std::getenv(kSchemaEnv); env && *env) path = env;
    }
    if (!path) return builtin_schema();
    auto in = open_input(*path);
    return load_schema(in);
}

inline RubricTemplate active_template(const RunConfig& cfg) {
    if (!cfg.template_path) return builtin_template();
    auto in = open_input(*cfg.template_path);
    return load_template(in);
}

inline ConversionRates active_rates(const RunConfig& cfg) {
    if (!cfg.conversion_table) return {};
    auto in = open_input(*cfg.conversion_table);
    return load_rates(in);
}

inline std::vector<ProgramDataset> load_datasets(const RunConfig& cfg, const Schema& schema,
                                                 const RubricTemplate& tmpl) {
    std::vector<ProgramDataset> datasets;
    for (const auto& path : cfg.input_paths) {
        auto in = open_input(path);
        try {
            datasets.push_back(load_program_dataset(in, schema, tmpl));
        } catch (const Error& e) {
            throw Error(e.kind(), path + ": " + e.what());
        }
    }
    return datasets;
}

inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (!cfg.output_path) {
        out << content;
        return;
    }
    std::ofstream file(*cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write '" + *cfg.output_path + "'");
    file << content;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.input_paths.empty()) throw UsageError("validate needs at least one observation file");
    const auto schema = active_schema(cfg);
    const auto tmpl = active_template(cfg);
    const auto rates = active_rates(cfg);
    const auto datasets = load_datasets(cfg, schema, tmpl);

    std::string content;
    bool ok = true;
    for (const auto& ds : datasets) {
        const auto report = validate_dataset(ds, schema, tmpl, rates);
        ok = ok && report.all_scorable();
        content += render_validation(report, schema);
    }
    emit(cfg, content, out);
    return ok ? kSuccess : kDomainFailure;
}

inline int cmd_score(const RunConfig& cfg, std::ostream& out) {
    if (cfg.input_paths.empty()) throw UsageError("score needs at least one input file");
    if (cfg.mode == Mode::PrecomputedCategories && cfg.conversion_table)
        throw UsageError("--rates cannot be combined with --mode precomputed-categories");
    if (cfg.mode == Mode::PrecomputedCategories && cfg.detail)
        throw UsageError("--detail needs --mode raw-indicators");
    if (cfg.detail && cfg.output_format != OutputFormat::Table) throw UsageError("--detail needs --format table");

    GmiOptions opts;
    opts.allow_partial = cfg.allow_partial;

    if (cfg.mode == Mode::PrecomputedCategories) {
        CategoryTable merged;
        for (const auto& path : cfg.input_paths) {
            auto in = open_input(path);
            auto table = load_category_table(in);
            merged.programs.insert(merged.programs.end(), table.programs.begin(), table.programs.end());
            merged.notes.insert(merged.notes.end(), table.notes.begin(), table.notes.end());
        }
        const auto results = compute_gmi(merged.programs, opts);
        emit(cfg, render_comparison(results, cfg.output_format, merged.notes), out);
        return kSuccess;
    }

    const auto schema = active_schema(cfg);
    const auto tmpl = active_template(cfg);
    const auto rates = active_rates(cfg);
    const auto datasets = load_datasets(cfg, schema, tmpl);
    const auto run = score_datasets(datasets, schema, tmpl, rates, opts);
    std::string content = render_comparison(run.results, cfg.output_format);
    if (cfg.detail) {
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            content += "\n";
            content += render_program_report(run.results[i], validate_dataset(datasets[i], schema, tmpl, rates));
        }
    }
    emit(cfg, content, out);
    return kSuccess;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grant Maturity Index engine", "gmi"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--schema", cfg.schema_path, "Indicator schema file (default: builtin, or $GMI_SCHEMA)");
        sub->add_option("--template", cfg.template_path, "Rubric template file (default: builtin)");
        sub->add_option("--rates", cfg.conversion_table, "Token conversion table (symbol|usd_rate)");
        sub->add_option("--out", cfg.output_path, "Write output to this file instead of stdout");
        sub->add_option("inputs", cfg.input_paths, "Input files");
    };

    auto* validate = app.add_subcommand("validate", "Check observation files before scoring");
    add_common(validate);

    std::string mode = "raw-indicators";
    std::string format = "table";
    const std::map<std::string, Mode> modes{{"raw-indicators", Mode::RawIndicators},
                                            {"precomputed-categories", Mode::PrecomputedCategories}};
    const std::vector<std::string> formats{"table", "delimited", "structured"};
    std::vector<CLI::App*> scoring;
    for (const auto* name : {"score", "compare"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "score" ? "Compute GMI scores"
                                                                          : "Compute GMI scores (alias of score)");
        add_common(sub);
        sub->add_option("--mode", mode, "raw-indicators | precomputed-categories")
            ->check(CLI::IsMember({"raw-indicators", "precomputed-categories"}));
        sub->add_flag("--allow-partial", cfg.allow_partial, "Rescale programs with absent categories");
        sub->add_option("--format", format, "table | delimited | structured")->check(CLI::IsMember(formats));
        sub->add_flag("--detail", cfg.detail, "Append per-program reports (raw mode, table format)");
        scoring.push_back(sub);
    }

    auto* survey = app.add_subcommand("survey", "Self-assessment survey tools");
    survey->require_subcommand(1);
    auto* survey_template = survey->add_subcommand("template", "Print the blank survey instrument");
    survey_template->add_option("--template", cfg.template_path, "Rubric template file (default: builtin)");

    auto* schema_cmd = app.add_subcommand("schema", "Schema tools");
    schema_cmd->require_subcommand(1);
    auto* schema_dump = schema_cmd->add_subcommand("dump", "Print the active schema in file format");
    schema_dump->add_option("--schema", cfg.schema_path, "Indicator schema file (default: builtin, or $GMI_SCHEMA)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsageFailure;
    }
    cfg.mode = modes.at(mode);
    cfg.output_format = *parse_output_format(format);

    try {
        if (validate->parsed()) return detail::cmd_validate(cfg, out);
        for (auto* sub : scoring)
            if (sub->parsed()) return detail::cmd_score(cfg, out);
        if (survey_template->parsed()) {
            out << render_survey_template(detail::active_template(cfg));
            return kSuccess;
        }
        if (schema_dump->parsed()) {
            out << serialize_schema(detail::active_schema(cfg));
            return kSuccess;
        }
    } catch (const detail::UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageFailure;
    } catch (const PartialDataError& e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return kDomainFailure;
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return kUsageFailure;
    }
    err << "usage error: no command\n";
    return kUsageFailure;
}

} // namespace gmi::cli

#endif // GMI_CLI_HPP
