#pragma once

#include <cstdint>
#include <functional>

namespace seek {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

/// One (head, relation, tail) fact, id-encoded against a Vocabulary.
struct Triple {
    EntityId h = 0;
    RelationId r = 0;
    EntityId t = 0;

    friend bool operator==(const Triple&, const Triple&) = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& x) const noexcept {
        // 64-bit mix of the three ids, splitmix-style.
        std::uint64_t v = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x.h));
        v = v * 0x9e3779b97f4a7c15ull + static_cast<std::uint32_t>(x.r);
        v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
        v = v * 0x9e3779b97f4a7c15ull + static_cast<std::uint32_t>(x.t);
        v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
        return static_cast<std::size_t>(v ^ (v >> 31));
    }
};

/// Training example: a triple plus its +1 (true) / -1 (corrupted) label.
struct LabeledTriple {
    Triple triple;
    int label = 1;
};

}  // namespace seek
