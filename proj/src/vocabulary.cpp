#include "seek/vocabulary.hpp"

#include <fstream>
#include <stdexcept>

namespace seek {

EntityId Vocabulary::add_entity(const std::string& name) {
    auto it = entity_to_id_.find(name);
    if (it != entity_to_id_.end()) return it->second;
    EntityId id = static_cast<EntityId>(id_to_entity_.size());
    entity_to_id_.emplace(name, id);
    id_to_entity_.push_back(name);
    return id;
}

RelationId Vocabulary::add_relation(const std::string& name) {
    auto it = relation_to_id_.find(name);
    if (it != relation_to_id_.end()) return it->second;
    RelationId id = static_cast<RelationId>(id_to_relation_.size());
    relation_to_id_.emplace(name, id);
    id_to_relation_.push_back(name);
    return id;
}

std::optional<EntityId> Vocabulary::entity_id(const std::string& name) const {
    auto it = entity_to_id_.find(name);
    if (it == entity_to_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationId> Vocabulary::relation_id(const std::string& name) const {
    auto it = relation_to_id_.find(name);
    if (it == relation_to_id_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocabulary::entity_name(EntityId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_entity_.size())
        throw std::out_of_range("entity id " + std::to_string(id) + " out of range");
    return id_to_entity_[static_cast<std::size_t>(id)];
}

const std::string& Vocabulary::relation_name(RelationId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_relation_.size())
        throw std::out_of_range("relation id " + std::to_string(id) + " out of range");
    return id_to_relation_[static_cast<std::size_t>(id)];
}

void Vocabulary::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << num_entities() << '\t' << num_relations() << '\n';
    for (std::size_t i = 0; i < id_to_entity_.size(); ++i)
        out << i << '\t' << id_to_entity_[i] << '\n';
    for (std::size_t i = 0; i < id_to_relation_.size(); ++i)
        out << i << '\t' << id_to_relation_[i] << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    auto bad = [&](const std::string& what) {
        return std::runtime_error("vocabulary file " + path.string() + ": " + what);
    };

    std::string line;
    if (!std::getline(in, line)) throw bad("missing header");
    std::size_t ne = 0, nr = 0;
    {
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw bad("malformed header");
        ne = std::stoull(line.substr(0, tab));
        nr = std::stoull(line.substr(tab + 1));
    }

    Vocabulary vocab;
    for (std::size_t i = 0; i < ne + nr; ++i) {
        if (!std::getline(in, line)) throw bad("truncated after " + std::to_string(i) + " rows");
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw bad("row without tab");
        std::size_t id = std::stoull(line.substr(0, tab));
        std::string name = line.substr(tab + 1);
        std::size_t expect = i < ne ? i : i - ne;
        if (id != expect) throw bad("non-contiguous id " + std::to_string(id));
        if (i < ne)
            vocab.add_entity(name);
        else
            vocab.add_relation(name);
    }
    if (vocab.num_entities() != ne || vocab.num_relations() != nr)
        throw bad("duplicate names collapse the id space");
    return vocab;
}

}  // namespace seek
