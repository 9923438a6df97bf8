#include <doctest.h>

#include <fstream>
#include <string>

#include "seek/model.hpp"
#include "temp_dir.hpp"

using namespace seek;

namespace {

Vocabulary small_vocab() {
    Vocabulary v;
    v.add_entity("alpha");
    v.add_entity("New York");  // name with a space must survive the round trip
    v.add_entity("gamma");
    v.add_relation("r one");
    v.add_relation("r2");
    return v;
}

std::string first_line(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

void patch_file(const std::filesystem::path& path, const std::string& from,
                const std::string& to) {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("checkpoint save/load round trip is lossless") {
    TempDir tmp;
    Vocabulary vocab = small_vocab();
    ModelConfig cfg{.d = 12, .k = 4, .seed = 9};
    EmbeddingTable table = init_embeddings(3, 2, cfg, 9);
    auto path = tmp.path / "model.ckpt";
    save_checkpoint(path, table, vocab, cfg);

    CHECK(first_line(path) == "seek-checkpoint v1 d=12 k=4 entities=3 relations=2");

    Checkpoint loaded = load_checkpoint(path);
    CHECK(loaded.config.d == 12);
    CHECK(loaded.config.k == 4);
    CHECK(loaded.vocab == vocab);
    CHECK(loaded.table.entities.data == table.entities.data);    // bitwise
    CHECK(loaded.table.relations.data == table.relations.data);
}

TEST_CASE("checkpoint survives a second round trip unchanged") {
    TempDir tmp;
    Vocabulary vocab = small_vocab();
    ModelConfig cfg{.d = 8, .k = 2, .seed = 1};
    EmbeddingTable table = init_embeddings(3, 2, cfg, 1);
    save_checkpoint(tmp.path / "a.ckpt", table, vocab, cfg);
    Checkpoint once = load_checkpoint(tmp.path / "a.ckpt");
    save_checkpoint(tmp.path / "b.ckpt", once.table, once.vocab, once.config);

    std::ifstream fa(tmp.path / "a.ckpt"), fb(tmp.path / "b.ckpt");
    std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(a == b);
}

TEST_CASE("checkpoint loader rejects damaged files") {
    TempDir tmp;
    Vocabulary vocab = small_vocab();
    ModelConfig cfg{.d = 4, .k = 2, .seed = 2};
    EmbeddingTable table = init_embeddings(3, 2, cfg, 2);
    auto path = tmp.path / "model.ckpt";

    CHECK_THROWS_AS(load_checkpoint(tmp.path / "missing.ckpt"), std::runtime_error);

    save_checkpoint(path, table, vocab, cfg);
    patch_file(path, "seek-checkpoint v1", "seek-checkpoint v9");
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);

    save_checkpoint(path, table, vocab, cfg);
    patch_file(path, "entities=3", "entities=4");  // row count mismatch
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);

    save_checkpoint(path, table, vocab, cfg);
    {
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        in.close();
        auto pos = text.find("\nE ");
        REQUIRE(pos != std::string::npos);
        auto end = text.find('\n', pos + 1);
        // non-finite value in the first entity row
        std::string row = text.substr(pos + 1, end - pos - 1);
        auto space = row.rfind(' ');
        row.replace(space + 1, row.size() - space - 1, "nan");
        text.replace(pos + 1, end - pos - 1, row);
        std::ofstream out(path);
        out << text;
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
}

TEST_CASE("checkpoint loader rejects a truncated value row") {
    TempDir tmp;
    Vocabulary vocab = small_vocab();
    ModelConfig cfg{.d = 4, .k = 2, .seed = 3};
    EmbeddingTable table = init_embeddings(3, 2, cfg, 3);
    auto path = tmp.path / "model.ckpt";
    save_checkpoint(path, table, vocab, cfg);

    // drop the last value of the last line
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    auto last_space = text.find_last_of(' ');
    text = text.substr(0, last_space) + "\n";
    std::ofstream out(path);
    out << text;
    out.close();
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
}
