#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "seek/triple.hpp"

namespace seek {

/// Bidirectional mapping between entity/relation strings and dense ids.
/// Ids are contiguous, start at 0, and are assigned in first-seen order,
/// so loading the same files in the same order always yields the same ids.
class Vocabulary {
  public:
    EntityId add_entity(const std::string& name);
    RelationId add_relation(const std::string& name);

    std::optional<EntityId> entity_id(const std::string& name) const;
    std::optional<RelationId> relation_id(const std::string& name) const;

    const std::string& entity_name(EntityId id) const;
    const std::string& relation_name(RelationId id) const;

    std::size_t num_entities() const { return id_to_entity_.size(); }
    std::size_t num_relations() const { return id_to_relation_.size(); }

    /// Text dump: a `<num_entities>\t<num_relations>` header line, then one
    /// `id\tstring` line per entity, then per relation.
    void save(const std::filesystem::path& path) const;
    static Vocabulary load(const std::filesystem::path& path);

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

  private:
    std::unordered_map<std::string, EntityId> entity_to_id_;
    std::vector<std::string> id_to_entity_;
    std::unordered_map<std::string, RelationId> relation_to_id_;
    std::vector<std::string> id_to_relation_;
};

}  // namespace seek
