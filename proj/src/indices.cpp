#include "qmzv/indices.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qmzv {

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts))
{
    if (parts_.empty())
        throw std::invalid_argument("composition must have at least one part");
    for (int p : parts_)
        if (p < 1)
            throw std::invalid_argument("composition parts must be >= 1");
}

int Composition::weight() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::string Composition::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i)
        os << (i ? "," : "") << parts_[i];
    os << ')';
    return os.str();
}

AdmissibleIndex::AdmissibleIndex(Composition c) : c_(std::move(c))
{
    if (!c_.admissible())
        throw std::invalid_argument("index " + c_.to_string() + " is not admissible");
}

namespace {

// Lexicographic generation: parts[i] runs upward from `low` while leaving room for the rest.
void compose(int remaining_parts, int remaining_weight, int low, std::vector<int>& prefix,
             std::vector<std::vector<int>>& out)
{
    if (remaining_parts == 0) {
        if (remaining_weight == 0)
            out.push_back(prefix);
        return;
    }
    if (remaining_parts == 1) {
        if (remaining_weight >= low) {
            prefix.push_back(remaining_weight);
            out.push_back(prefix);
            prefix.pop_back();
        }
        return;
    }
    for (int p = low; p <= remaining_weight - low * (remaining_parts - 1); ++p) {
        prefix.push_back(p);
        compose(remaining_parts - 1, remaining_weight - p, low, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Composition> enumerate_compositions(int r, int n)
{
    if (r <= 0)
        throw std::invalid_argument("composition depth must be >= 1");
    std::vector<Composition> out;
    if (n < r)
        return out;
    std::vector<std::vector<int>> raw;
    std::vector<int> prefix;
    compose(r, n, 1, prefix, raw);
    out.reserve(raw.size());
    for (auto& parts : raw)
        out.emplace_back(std::move(parts));
    return out;
}

std::vector<AdmissibleIndex> enumerate_admissible(int r, int n)
{
    std::vector<AdmissibleIndex> out;
    for (auto& c : enumerate_compositions(r, n))
        if (c.admissible())
            out.emplace_back(std::move(c));
    return out;
}

std::vector<std::vector<int>> enumerate_weak_compositions(int r, int n)
{
    std::vector<std::vector<int>> out;
    if (r < 0 || n < 0)
        return out;
    std::vector<int> prefix;
    compose(r, n, 0, prefix, out);
    return out;
}

Composition parse_composition(const std::string& text)
{
    if (!text.empty() && text.back() == ',')
        throw std::invalid_argument("malformed index '" + text + "'");
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const bool digits = !item.empty() && item.size() <= 9 &&
                            std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); });
        if (!digits)
            throw std::invalid_argument("malformed index '" + text + "'");
        const int v = std::stoi(item);
        parts.push_back(v);
    }
    return Composition(std::move(parts));
}

}  // namespace qmzv
