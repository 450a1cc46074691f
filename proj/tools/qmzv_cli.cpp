#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmzv/indices.hpp"
#include "qmzv/qseries.hpp"
#include "qmzv/rational.hpp"
#include "qmzv/report.hpp"
#include "qmzv/verifier.hpp"
#include "qmzv/word.hpp"
#include "qmzv/word_maps.hpp"

namespace {

constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

qmzv::Rational parse_q(const std::string& text)
{
    qmzv::Rational q;
    try {
        q = qmzv::parse_ratio(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("q: ") + e.what());
    }
    if (q <= 0 || q >= 1)
        throw UsageError("q must lie strictly between 0 and 1, got " + text);
    return q;
}

std::optional<long> parse_terms(const std::string& text)
{
    if (text.empty() || text == "auto")
        return std::nullopt;
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw UsageError("--terms must be an integer or 'auto', got " + text);
    if (v < 4)
        throw UsageError("--terms must be at least 4");
    return v;
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + path);
    out << text;
}

int cmd_eval(const std::string& index_text, const std::string& q_text, const std::string& terms_text)
{
    qmzv::Composition c;
    try {
        c = qmzv::parse_composition(index_text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("index: ") + e.what());
    }
    if (!c.admissible())
        throw UsageError("index " + c.to_string() + " is not admissible (first part must be at least 2)");
    const qmzv::AdmissibleIndex alpha(c);
    const qmzv::QContext ctx(parse_q(q_text));
    const int depth = static_cast<int>(alpha.depth());
    long M_max = 0;
    if (auto fixed = parse_terms(terms_text)) {
        M_max = std::max<long>(*fixed, depth);
    } else {
        M_max = qmzv::auto_terms(
            ctx, [&](long m) { return qmzv::tail_closed_form(ctx, depth, m); }, qmzv::default_tail_target(), depth);
    }
    const auto value = qmzv::zeta_q(ctx, alpha, M_max);
    std::cout << "index: " << c.to_string() << "\n"
              << "q: " << qmzv::to_string(ctx.q()) << "\n"
              << "terms_used: " << value.terms_used << "\n"
              << "partial: " << qmzv::to_string(value.partial) << "\n"
              << "tail: " << qmzv::to_string(value.tail) << "\n"
              << "decimal (display only): " << qmzv::to_decimal(value.partial, 20) << "\n";
    return 0;
}

int cmd_expand(const std::string& map, const std::string& word, int s, int l, const std::string& left,
               const std::string& right)
{
    auto poly = [](const std::string& text, const char* flag) {
        if (text.empty())
            throw UsageError(std::string(flag) + " is required");
        try {
            return qmzv::parse_poly(text);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string(flag) + ": " + e.what());
        }
    };
    qmzv::WordPoly out;
    try {
        if (map == "d")
            out = qmzv::d_map(poly(word, "--word"));
        else if (map == "phi")
            out = qmzv::phi(s, poly(word, "--word"));
        else if (map == "Phi")
            out = qmzv::Phi(l, poly(word, "--word"));
        else if (map == "Z")
            out = qmzv::Z_map(s, poly(word, "--word"));
        else if (map == "rho")
            out = qmzv::rho(poly(left, "--left"), poly(right, "--right"));
        else
            throw UsageError("unknown map '" + map + "' (expected d, phi, Phi, Z or rho)");
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::cout << out.to_string() << "\n";
    return 0;
}

// Remaining "--key value" pairs after the tag become check parameters.
qmzv::Params collect_params(const std::vector<std::string>& extras)
{
    qmzv::Params params;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& flag = extras[i];
        if (flag.rfind("--", 0) != 0 || flag.size() == 2)
            throw UsageError("expected --key value, got " + flag);
        std::string key = flag.substr(2), value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.erase(eq);
        } else {
            if (i + 1 >= extras.size())
                throw UsageError("missing value for " + flag);
            value = extras[++i];
        }
        if (params.count(key) != 0)
            throw UsageError("parameter " + key + " given twice");
        params[key] = value;
    }
    return params;
}

int emit(const qmzv::Report& report, const std::string& format, const std::string& out, bool timings)
{
    write_output(format == "csv" ? qmzv::to_csv(report, timings) : qmzv::to_json(report, timings), out);
    return qmzv::exit_code(report.overall());
}

int cmd_verify(const std::string& tag, const std::vector<std::string>& extras, const std::string& format,
               const std::string& out, bool timings)
{
    const auto id = qmzv::parse_identity(tag);
    if (!id)
        throw UsageError("unknown identity " + tag);
    qmzv::Params params = collect_params(extras);
    if (params.count("terms") != 0)
        parse_terms(params["terms"]);
    if (qmzv::mode_of(*id) != qmzv::Mode::Symbolic) {
        if (params.count("q") == 0)
            throw UsageError(tag + " needs --q");
        parse_q(params["q"]);
    }
    try {
        qmzv::validate_params(*id, params);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::optional<qmzv::QContext> ctx;
    if (params.count("q") != 0)
        ctx.emplace(parse_q(params["q"]));

    qmzv::Report report;
    if (ctx)
        report.q_values.push_back(params["q"]);
    report.plan_hash = qmzv::fnv1a_hex(tag);
    report.terms_policy = params.count("terms") != 0 ? params["terms"] : "auto";
    try {
        report.results.push_back(qmzv::run_check(*id, params, ctx ? &*ctx : nullptr));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    switch (report.results.back().verdict) {
    case qmzv::Verdict::Pass:
        ++report.passed;
        break;
    case qmzv::Verdict::Fail:
        ++report.failed;
        break;
    case qmzv::Verdict::Indeterminate:
        ++report.indeterminate;
        break;
    }
    return emit(report, format, out, timings);
}

std::vector<std::string> split_q_list(const std::vector<std::string>& raw)
{
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const auto comma = item.find(',', start);
            const std::string q = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            parse_q(q);
            out.push_back(qmzv::to_string(qmzv::parse_ratio(q)));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
    }
    return out;
}

int cmd_suite(const std::string& plan_path, const std::vector<std::string>& q_raw, const std::string& terms_text,
              unsigned threads, const std::string& format, const std::string& out, bool timings)
{
    qmzv::SuiteOptions options;
    options.check.terms = parse_terms(terms_text);
    options.threads = threads > 0 ? threads : qmzv::default_threads();
    qmzv::Plan plan;
    try {
        plan = qmzv::load_plan(plan_path, split_q_list(q_raw));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return emit(qmzv::run_suite(plan, options), format, out, timings);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact checks for q-analogues of multiple zeta values"};
    app.require_subcommand(1);

    std::string index, q_text, terms_text, format = "json", out, map, word, left, right, tag, plan_path;
    int s = 0, l = 0;
    unsigned threads = 0;
    bool timings = false;
    std::vector<std::string> q_list{"1/2"};

    auto* eval = app.add_subcommand("eval", "Evaluate a truncated q-MZV with a certified tail bound");
    eval->add_option("--index", index, "Admissible index, e.g. 2,1")->required();
    eval->add_option("--q", q_text, "Deformation parameter p/r in (0,1)")->required();
    eval->add_option("--terms", terms_text, "Truncation M_max (default: auto)");

    auto* expand = app.add_subcommand("expand", "Expand a word-algebra map");
    expand->add_option("map", map, "d, phi, Phi, Z or rho")->required();
    expand->add_option("--word", word, "Argument word polynomial");
    expand->add_option("--s", s, "Index s for phi and Z")->check(CLI::NonNegativeNumber);
    expand->add_option("--l", l, "Index l for Phi")->check(CLI::NonNegativeNumber);
    expand->add_option("--left", left, "Left argument of rho (xi letters only)");
    expand->add_option("--right", right, "Right argument of rho");

    auto* verify = app.add_subcommand("verify", "Check one identity instance");
    verify->add_option("identity", tag, "Identity tag, e.g. T1")->required();
    verify->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--out", out, "Output path (default stdout)");
    verify->add_flag("--timings", timings, "Record elapsed times");
    verify->allow_extras();

    auto* suite = app.add_subcommand("suite", "Run a plan file of checks");
    suite->add_option("--plan", plan_path, "Plan file")->required();
    suite->add_option("--q", q_list, "q values for lines without q (p/r, comma separated)");
    suite->add_option("--terms", terms_text, "Fixed M_max or 'auto'");
    suite->add_option("--threads", threads, "Worker threads (default: QMZV_THREADS or all cores)");
    suite->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    suite->add_option("--out", out, "Output path (default stdout)");
    suite->add_flag("--timings", timings, "Record elapsed times");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*eval)
            return cmd_eval(index, q_text, terms_text);
        if (*expand)
            return cmd_expand(map, word, s, l, left, right);
        if (*verify)
            return cmd_verify(tag, verify->remaining(), format, out, timings);
        return cmd_suite(plan_path, q_list, terms_text, threads, format, out, timings);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
