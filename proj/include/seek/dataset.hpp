#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "seek/triple.hpp"
#include "seek/vocabulary.hpp"

namespace seek {

/// Raised for a line that is not `head<TAB>relation<TAB>tail`.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Id-encoded triples of one split. Duplicates are kept; file order is kept.
struct TripleSet {
    std::vector<Triple> triples;
    std::string split_name;  // train / valid / test

    std::size_t size() const { return triples.size(); }
};

/// Deduplicated set of all known true triples (train ∪ valid ∪ test),
/// used to drop corrupted-but-true candidates during filtered ranking.
class FilterIndex {
  public:
    void insert(const Triple& t) { known_.insert(t); }
    bool contains(const Triple& t) const { return known_.count(t) != 0; }
    std::size_t size() const { return known_.size(); }

  private:
    std::unordered_set<Triple, TripleHash> known_;
};

/// Reads tab-separated `head relation tail` lines, appending unseen strings
/// to `vocab`. Empty lines are skipped; whitespace other than the two tabs
/// is part of the token. Throws ParseError (with the 1-based line number)
/// on a malformed line and std::runtime_error on an unreadable file.
TripleSet load_triples(const std::filesystem::path& path, Vocabulary& vocab,
                       std::string split_name = "");

/// Inverse of load_triples; decodes ids back to strings, one triple per line.
void write_triples(const std::filesystem::path& path, const TripleSet& set,
                   const Vocabulary& vocab);

FilterIndex build_filter_index(const TripleSet& train, const TripleSet& valid,
                               const TripleSet& test);

/// A dataset directory: train.txt / valid.txt / test.txt sharing one
/// vocabulary, plus the filter index over all three splits.
struct Dataset {
    Vocabulary vocab;
    TripleSet train;
    TripleSet valid;
    TripleSet test;
    FilterIndex filter;
};

Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace seek
