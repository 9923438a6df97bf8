#include "seek/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace seek {

void ModelConfig::validate() const {
    if (d < 1) throw std::invalid_argument("dim must be >= 1, got " + std::to_string(d));
    if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
    if (d % k != 0)
        throw std::invalid_argument("k must divide dim: k=" + std::to_string(k) +
                                    ", dim=" + std::to_string(d));
}

namespace {

// Uniform double in [lo, hi) from the generator's raw bits; identical output
// on every platform, unlike std::uniform_real_distribution.
double uniform_from_bits(std::mt19937_64& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

void fill_uniform(Matrix& m, std::mt19937_64& rng, double bound) {
    for (double& v : m.data) v = uniform_from_bits(rng, -bound, bound);
}

}  // namespace

EmbeddingTable init_embeddings(std::size_t num_entities, std::size_t num_relations,
                               const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    EmbeddingTable table;
    table.entities = Matrix(num_entities, static_cast<std::size_t>(cfg.d));
    table.relations = Matrix(num_relations, static_cast<std::size_t>(cfg.d));

    double bound = 6.0 / std::sqrt(static_cast<double>(cfg.d));
    std::mt19937_64 rng(seed);
    fill_uniform(table.entities, rng, bound);
    fill_uniform(table.relations, rng, bound);
    return table;
}

namespace {

void write_row(std::FILE* out, char tag, const std::string& name,
               std::span<const double> row) {
    std::fputc(tag, out);
    std::fputc(' ', out);
    std::fwrite(name.data(), 1, name.size(), out);
    char buf[40];
    for (double v : row) {
        int n = std::snprintf(buf, sizeof buf, " %.17g", v);
        std::fwrite(buf, 1, static_cast<std::size_t>(n), out);
    }
    std::fputc('\n', out);
}

struct LineFile {
    std::FILE* f = nullptr;
    explicit LineFile(const char* path, const char* mode) : f(std::fopen(path, mode)) {}
    ~LineFile() {
        if (f) std::fclose(f);
    }
    LineFile(const LineFile&) = delete;
    LineFile& operator=(const LineFile&) = delete;
};

// Splits "<tag> <name> v1 ... vd". The d values are located by scanning
// spaces from the end of the line, so names may contain spaces.
void parse_row(const std::string& line, std::size_t lineno, int d,
               std::string& name, std::span<double> row) {
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("checkpoint line " + std::to_string(lineno) + ": " + what);
    };
    if (line.size() < 4 || line[1] != ' ') fail("malformed row");

    std::size_t cut = line.size();
    for (int i = 0; i < d; ++i) {
        if (cut < 2) fail("fewer than d values");
        std::size_t sp = line.rfind(' ', cut - 1);
        if (sp == std::string::npos || sp < 2) fail("fewer than d values");
        cut = sp;
    }
    if (cut < 3) fail("empty name");
    name = line.substr(2, cut - 2);

    const char* p = line.c_str() + cut;
    for (int i = 0; i < d; ++i) {
        char* end = nullptr;
        row[static_cast<std::size_t>(i)] = std::strtod(p, &end);
        if (end == p) fail("bad decimal in value " + std::to_string(i));
        p = end;
    }
    if (*p != '\0') fail("trailing characters after values");
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const EmbeddingTable& table,
                     const Vocabulary& vocab, const ModelConfig& cfg) {
    if (table.entities.rows != vocab.num_entities() ||
        table.relations.rows != vocab.num_relations())
        throw std::invalid_argument("embedding table does not match vocabulary sizes");

    LineFile file(path.string().c_str(), "w");
    if (!file.f) throw std::runtime_error("cannot open " + path.string() + " for writing");

    std::fprintf(file.f, "seek-checkpoint v1 d=%d k=%d entities=%zu relations=%zu\n",
                 cfg.d, cfg.k, vocab.num_entities(), vocab.num_relations());
    for (std::size_t i = 0; i < table.entities.rows; ++i)
        write_row(file.f, 'E', vocab.entity_name(static_cast<EntityId>(i)),
                  table.entities.row(i));
    for (std::size_t i = 0; i < table.relations.rows; ++i)
        write_row(file.f, 'R', vocab.relation_name(static_cast<RelationId>(i)),
                  table.relations.row(i));
    if (std::ferror(file.f)) throw std::runtime_error("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("checkpoint " + path.string() + ": empty file");

    int d = 0, k = 0;
    std::size_t ne = 0, nr = 0;
    if (std::sscanf(line.c_str(), "seek-checkpoint v1 d=%d k=%d entities=%zu relations=%zu",
                    &d, &k, &ne, &nr) != 4)
        throw std::runtime_error("checkpoint " + path.string() +
                                 ": unrecognized header '" + line + "'");

    Checkpoint ckpt;
    ckpt.config = ModelConfig{d, k, 0};
    ckpt.config.validate();
    ckpt.table.entities = Matrix(ne, static_cast<std::size_t>(d));
    ckpt.table.relations = Matrix(nr, static_cast<std::size_t>(d));

    std::string name;
    std::size_t lineno = 1;
    for (std::size_t i = 0; i < ne + nr; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("checkpoint " + path.string() + ": truncated at row " +
                                     std::to_string(i));
        ++lineno;
        bool entity = i < ne;
        char expect = entity ? 'E' : 'R';
        if (line.empty() || line[0] != expect)
            throw std::runtime_error("checkpoint line " + std::to_string(lineno) +
                                     ": expected '" + std::string(1, expect) + "' row");
        std::span<double> row = entity ? ckpt.table.entities.row(i)
                                       : ckpt.table.relations.row(i - ne);
        parse_row(line, lineno, d, name, row);
        for (double v : row)
            if (!std::isfinite(v))
                throw std::runtime_error("checkpoint line " + std::to_string(lineno) +
                                         ": non-finite value");
        if (entity)
            ckpt.vocab.add_entity(name);
        else
            ckpt.vocab.add_relation(name);
    }
    if (ckpt.vocab.num_entities() != ne || ckpt.vocab.num_relations() != nr)
        throw std::runtime_error("checkpoint " + path.string() + ": duplicate names");
    return ckpt;
}

}  // namespace seek
