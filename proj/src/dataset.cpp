#include "seek/dataset.hpp"

#include <fstream>

namespace seek {

TripleSet load_triples(const std::filesystem::path& path, Vocabulary& vocab,
                       std::string split_name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triple file " + path.string());

    if (split_name.empty()) split_name = path.stem().string();

    TripleSet set;
    set.split_name = std::move(split_name);

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;

        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            line.find('\t', tab2 + 1) != std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": expected head<TAB>relation<TAB>tail",
                             lineno);
        }
        std::string head = line.substr(0, tab1);
        std::string rel = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string tail = line.substr(tab2 + 1);
        if (head.empty() || rel.empty() || tail.empty()) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": empty field",
                             lineno);
        }
        set.triples.push_back({vocab.add_entity(head), vocab.add_relation(rel),
                               vocab.add_entity(tail)});
    }
    if (in.bad()) throw std::runtime_error("read error on " + path.string());
    return set;
}

void write_triples(const std::filesystem::path& path, const TripleSet& set,
                   const Vocabulary& vocab) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const Triple& x : set.triples) {
        out << vocab.entity_name(x.h) << '\t' << vocab.relation_name(x.r) << '\t'
            << vocab.entity_name(x.t) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

FilterIndex build_filter_index(const TripleSet& train, const TripleSet& valid,
                               const TripleSet& test) {
    FilterIndex index;
    for (const TripleSet* split : {&train, &valid, &test})
        for (const Triple& x : split->triples) index.insert(x);
    return index;
}

Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset ds;
    // Vocabulary spans all three splits so evaluation never meets an unknown id.
    ds.train = load_triples(dir / "train.txt", ds.vocab, "train");
    ds.valid = load_triples(dir / "valid.txt", ds.vocab, "valid");
    ds.test = load_triples(dir / "test.txt", ds.vocab, "test");
    ds.filter = build_filter_index(ds.train, ds.valid, ds.test);
    return ds;
}

}  // namespace seek
