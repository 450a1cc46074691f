#include "qmzv/plan.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qmzv/word.hpp"

namespace qmzv {

namespace {

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

long to_long(const std::string& text)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::invalid_argument("expected an integer, got '" + text + "'");
    return v;
}

bool is_range(const std::string& value)
{
    const auto pos = value.find("..");
    if (pos == std::string::npos || value.find("..", pos + 2) != std::string::npos)
        return false;
    const auto lo = value.substr(0, pos), hi = value.substr(pos + 2);
    auto digits = [](const std::string& s) {
        std::size_t i = s.size() > 1 && s[0] == '-' ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                return false;
        return true;
    };
    return digits(lo) && digits(hi);
}

std::vector<std::string> expand_range(const std::string& value)
{
    const auto pos = value.find("..");
    const long lo = to_long(value.substr(0, pos));
    const long hi = to_long(value.substr(pos + 2));
    if (hi < lo)
        throw std::invalid_argument("empty range '" + value + "'");
    std::vector<std::string> out;
    for (long v = lo; v <= hi; ++v)
        out.push_back(std::to_string(v));
    return out;
}

std::vector<std::string> expand_words(const std::string& value)
{
    const auto parts = split(value, ':');
    if (parts.size() != 3 || parts[0] != "words")
        throw std::invalid_argument("word grid must look like words:z1,xi1:3, got '" + value + "'");
    std::vector<Letter> alphabet;
    for (const auto& name : split(parts[1], ','))
        alphabet.push_back(parse_letter(name));
    long lo = 0, hi = 0;
    if (is_range(parts[2])) {
        const auto pos = parts[2].find("..");
        lo = to_long(parts[2].substr(0, pos));
        hi = to_long(parts[2].substr(pos + 2));
    } else {
        hi = to_long(parts[2]);
    }
    if (lo < 0 || hi < lo)
        throw std::invalid_argument("bad word length range in '" + value + "'");
    std::vector<std::string> out;
    for (const auto& w : enumerate_words(alphabet, static_cast<int>(hi)))
        if (static_cast<long>(w.length()) >= lo)
            out.push_back(w.to_string());
    return out;
}

std::vector<std::string> expand_value(const std::string& value)
{
    if (value.empty())
        throw std::invalid_argument("empty value");
    if (value.rfind("words:", 0) == 0)
        return expand_words(value);
    if (is_range(value))
        return expand_range(value);
    if (value.find(',') != std::string::npos) {
        auto items = split(value, ',');
        for (const auto& item : items)
            if (item.empty())
                throw std::invalid_argument("empty list item in '" + value + "'");
        return items;
    }
    return {value};
}

// Linear integer expression over parameter names: terms joined by + and -.
struct LinearExpr {
    std::vector<std::pair<long, std::string>> terms;  // (sign, name or integer literal)

    long eval(const Params& params) const
    {
        long total = 0;
        for (const auto& [sign, atom] : terms) {
            long v = 0;
            if (std::isdigit(static_cast<unsigned char>(atom[0]))) {
                v = to_long(atom);
            } else {
                auto it = params.find(atom);
                if (it == params.end())
                    throw std::invalid_argument("constraint uses unknown parameter '" + atom + "'");
                v = to_long(it->second);
            }
            total += sign * v;
        }
        return total;
    }
};

LinearExpr parse_linear(const std::string& text)
{
    LinearExpr out;
    long sign = 1;
    std::string atom;
    auto flush = [&] {
        if (atom.empty())
            throw std::invalid_argument("malformed constraint expression '" + text + "'");
        out.terms.emplace_back(sign, atom);
        atom.clear();
    };
    for (char c : text) {
        if (c == '+' || c == '-') {
            flush();
            sign = c == '+' ? 1 : -1;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            atom += c;
        } else {
            throw std::invalid_argument("malformed constraint expression '" + text + "'");
        }
    }
    flush();
    return out;
}

struct Constraint {
    LinearExpr left, right;
    std::string op;

    bool holds(const Params& params) const
    {
        const long l = left.eval(params), r = right.eval(params);
        if (op == "<")
            return l < r;
        if (op == "<=")
            return l <= r;
        if (op == ">")
            return l > r;
        if (op == ">=")
            return l >= r;
        if (op == "==")
            return l == r;
        return l != r;
    }
};

Constraint parse_constraint(const std::string& token)
{
    for (const char* op : {"<=", ">=", "==", "!=", "<", ">"}) {
        const auto pos = token.find(op);
        if (pos != std::string::npos) {
            const std::string o(op);
            return {parse_linear(token.substr(0, pos)), parse_linear(token.substr(pos + o.size())), o};
        }
    }
    throw std::invalid_argument("malformed constraint '" + token + "'");
}

bool is_constraint(const std::string& token)
{
    return token.find('<') != std::string::npos || token.find('>') != std::string::npos ||
           token.find("==") != std::string::npos || token.find("!=") != std::string::npos;
}

void expand_line(const std::string& line, std::size_t line_no, const std::vector<std::string>& default_q,
                 std::vector<PlanEntry>& out)
{
    std::istringstream in(line);
    std::string tag;
    in >> tag;
    const auto id = parse_identity(tag);
    if (!id)
        throw std::invalid_argument("unknown identity '" + tag + "'");

    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
    std::vector<Constraint> constraints;
    std::string token;
    while (in >> token) {
        if (is_constraint(token)) {
            constraints.push_back(parse_constraint(token));
            continue;
        }
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        for (const auto& [existing, values] : grid)
            if (existing == key)
                throw std::invalid_argument("parameter '" + key + "' given twice");
        grid.emplace_back(key, expand_value(token.substr(eq + 1)));
    }
    const bool has_q = std::any_of(grid.begin(), grid.end(), [](const auto& kv) { return kv.first == "q"; });
    if (!has_q && mode_of(*id) != Mode::Symbolic) {
        if (default_q.empty())
            throw std::invalid_argument(tag + " needs q and no default q list is configured");
        grid.emplace_back("q", default_q);
    }

    std::vector<std::size_t> pos(grid.size(), 0);
    while (true) {
        Params params;
        for (std::size_t i = 0; i < grid.size(); ++i)
            params[grid[i].first] = grid[i].second[pos[i]];
        bool keep = true;
        for (const auto& c : constraints)
            keep = keep && c.holds(params);
        if (keep) {
            validate_params(*id, params);
            out.push_back({*id, std::move(params), line_no});
        }
        // Odometer with the rightmost key fastest.
        std::size_t i = grid.size();
        while (i > 0) {
            --i;
            if (++pos[i] < grid[i].second.size())
                break;
            pos[i] = 0;
            if (i == 0)
                return;
        }
        if (grid.empty())
            return;
    }
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

Plan parse_plan(std::string_view text, const std::vector<std::string>& default_q)
{
    Plan plan;
    plan.hash = fnv1a_hex(text);
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            expand_line(line, line_no, default_q, plan.entries);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("plan line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return plan;
}

Plan load_plan(const std::filesystem::path& path, const std::vector<std::string>& default_q)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot read plan file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str(), default_q);
}

}  // namespace qmzv
