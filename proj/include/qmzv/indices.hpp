#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qmzv {

// Ordered tuple of positive integers. Depth = number of parts, weight = their sum.
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<int> parts);

    const std::vector<int>& parts() const noexcept { return parts_; }
    std::size_t depth() const noexcept { return parts_.size(); }
    int weight() const noexcept;
    int operator[](std::size_t i) const { return parts_[i]; }

    // First part >= 2.
    bool admissible() const noexcept { return !parts_.empty() && parts_.front() >= 2; }

    std::string to_string() const;  // "(2,1,1)"

    auto operator<=>(const Composition&) const = default;

private:
    std::vector<int> parts_;
};

// Composition whose first part is at least 2.
class AdmissibleIndex {
public:
    explicit AdmissibleIndex(Composition c);
    explicit AdmissibleIndex(std::vector<int> parts) : AdmissibleIndex(Composition(std::move(parts))) {}

    const Composition& composition() const noexcept { return c_; }
    const std::vector<int>& parts() const noexcept { return c_.parts(); }
    std::size_t depth() const noexcept { return c_.depth(); }
    int weight() const noexcept { return c_.weight(); }

    auto operator<=>(const AdmissibleIndex&) const = default;

private:
    Composition c_;
};

// I(r, n): compositions of n into r positive parts, lexicographic order.
// Empty when n < r. Throws std::invalid_argument when r <= 0.
std::vector<Composition> enumerate_compositions(int r, int n);

// I_0(r, n): the members of I(r, n) with first part >= 2.
std::vector<AdmissibleIndex> enumerate_admissible(int r, int n);

// Compositions of n into r nonnegative parts (lexicographic); r == 0 yields {()} iff n == 0.
std::vector<std::vector<int>> enumerate_weak_compositions(int r, int n);

// Parses "2,1,1" into a composition; throws std::invalid_argument.
Composition parse_composition(const std::string& text);

}  // namespace qmzv
