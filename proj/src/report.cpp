#include "qmzv/report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace qmzv {

namespace {

std::string flatten_params(const Params& params)
{
    std::string out;
    for (const auto& [key, value] : params) {
        if (!out.empty())
            out += ';';
        out += key + "=" + value;
    }
    return out;
}

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Verdict Report::overall() const
{
    if (failed > 0)
        return Verdict::Fail;
    if (indeterminate > 0)
        return Verdict::Indeterminate;
    return Verdict::Pass;
}

unsigned default_threads()
{
    if (const char* env = std::getenv("QMZV_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

Report run_suite(const Plan& plan, const SuiteOptions& options)
{
    Report report;
    report.plan_hash = plan.hash;
    report.terms_policy = options.check.terms ? std::to_string(*options.check.terms) : "auto";

    std::map<std::string, std::unique_ptr<QContext>> contexts;
    for (const auto& entry : plan.entries) {
        auto it = entry.params.find("q");
        if (it == entry.params.end() || contexts.count(it->second) != 0)
            continue;
        report.q_values.push_back(it->second);
        contexts.emplace(it->second, std::make_unique<QContext>(parse_ratio(it->second)));
    }

    report.results.resize(plan.entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < plan.entries.size(); i = next++) {
            const auto& entry = plan.entries[i];
            const QContext* ctx = nullptr;
            if (auto it = entry.params.find("q"); it != entry.params.end())
                ctx = contexts.at(it->second).get();
            try {
                report.results[i] = run_check(entry.identity, entry.params, ctx, options.check);
            } catch (const std::exception& e) {
                CheckResult& r = report.results[i];
                r.identity = entry.identity;
                r.params = entry.params;
                r.mode = mode_of(entry.identity);
                r.verdict = Verdict::Indeterminate;
                r.message = std::string("error: ") + e.what();
            }
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(plan.entries.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    for (const auto& r : report.results) {
        switch (r.verdict) {
        case Verdict::Pass:
            ++report.passed;
            break;
        case Verdict::Fail:
            ++report.failed;
            break;
        case Verdict::Indeterminate:
            ++report.indeterminate;
            break;
        }
    }
    return report;
}

std::string to_json(const Report& report, bool timings)
{
    using json = nlohmann::ordered_json;
    json doc;
    doc["engine"] = report.engine;
    doc["q_values"] = report.q_values;
    doc["plan_hash"] = report.plan_hash;
    doc["terms_policy"] = report.terms_policy;
    doc["summary"] = {{"checks", report.results.size()},
                      {"passed", report.passed},
                      {"failed", report.failed},
                      {"indeterminate", report.indeterminate},
                      {"overall", to_string(report.overall())}};
    json checks = json::array();
    for (const auto& r : report.results) {
        json rec;
        rec["identity"] = to_string(r.identity);
        rec["params"] = json::object();
        for (const auto& [key, value] : r.params)
            rec["params"][key] = value;
        rec["mode"] = to_string(r.mode);
        rec["verdict"] = to_string(r.verdict);
        rec["lhs"] = r.lhs;
        rec["rhs"] = r.rhs;
        rec["lhs_tail"] = r.lhs_tail ? json(*r.lhs_tail) : json(nullptr);
        rec["rhs_tail"] = r.rhs_tail ? json(*r.rhs_tail) : json(nullptr);
        rec["slack"] = r.slack ? json(to_string(*r.slack)) : json(nullptr);
        rec["doubled_slack"] = r.doubled_slack ? json(to_string(*r.doubled_slack)) : json(nullptr);
        rec["terms_used"] = r.mode == Mode::Truncated ? json(r.terms_used) : json(nullptr);
        rec["message"] = r.message;
        rec["elapsed_ms"] = timings ? json(r.elapsed.count()) : json(nullptr);
        checks.push_back(std::move(rec));
    }
    doc["checks"] = std::move(checks);
    return doc.dump(2) + "\n";
}

std::string to_csv(const Report& report, bool timings)
{
    std::ostringstream out;
    out << "# engine: " << report.engine << "\n";
    out << "# q_values: ";
    for (std::size_t i = 0; i < report.q_values.size(); ++i)
        out << (i ? "," : "") << report.q_values[i];
    out << "\n# plan_hash: " << report.plan_hash << "\n";
    out << "# terms_policy: " << report.terms_policy << "\n";
    out << "# overall: " << to_string(report.overall()) << "\n";
    out << "identity,params,mode,verdict,lhs,rhs,lhs_tail,rhs_tail,slack,doubled_slack,terms_used,message,elapsed_ms\n";
    for (const auto& r : report.results) {
        out << to_string(r.identity) << ',' << csv_field(flatten_params(r.params)) << ',' << to_string(r.mode) << ','
            << to_string(r.verdict) << ',' << csv_field(r.lhs) << ',' << csv_field(r.rhs) << ','
            << r.lhs_tail.value_or("") << ',' << r.rhs_tail.value_or("") << ','
            << (r.slack ? to_string(*r.slack) : "") << ',' << (r.doubled_slack ? to_string(*r.doubled_slack) : "")
            << ',' << (r.mode == Mode::Truncated ? std::to_string(r.terms_used) : "") << ',' << csv_field(r.message)
            << ',';
        if (timings)
            out << r.elapsed.count();
        out << '\n';
    }
    return out.str();
}

int exit_code(Verdict overall)
{
    switch (overall) {
    case Verdict::Pass:
        return 0;
    case Verdict::Fail:
        return 1;
    case Verdict::Indeterminate:
        return 3;
    }
    return 1;
}

}  // namespace qmzv
