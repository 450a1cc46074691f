#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qmzv/verifier.hpp"

namespace qmzv {

// One concrete check: identity, fully expanded parameters, and the plan line it came from.
struct PlanEntry {
    IdentityId identity{};
    Params params;
    std::size_t line = 0;
};

struct Plan {
    std::vector<PlanEntry> entries;
    std::string hash;  // FNV-1a 64 of the plan text, hex
};

// Line syntax:  TAG key=value ... [constraint ...]   with '#' starting a comment.
//   value forms:  7    1/2    z1*xi1    a..b (integer range)    x,y,z (list)
//                 words:z1,xi1:3 (all words of length 0..3 over the letters; also :1..3)
//   constraints:  linear integer comparisons such as  b<n  m2<m1  s+a<=8
// Grid keys expand as a cartesian product, leftmost key outermost. Lines for identities that
// need q and do not set one expand over default_q. Throws std::invalid_argument with the
// line number on malformed input.
Plan parse_plan(std::string_view text, const std::vector<std::string>& default_q);
Plan load_plan(const std::filesystem::path& path, const std::vector<std::string>& default_q);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace qmzv
