#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace social_gym {

// One categorical feature axis, e.g. Diet = {Herbivore, Carnivore, Mineralvore}.
struct FeatureDimension {
  std::string name;
  std::vector<std::string> values;

  bool has_value(std::string_view value) const;
  bool operator==(const FeatureDimension&) const = default;
};

struct Species {
  std::string name;
  // dimension name -> value label
  std::map<std::string, std::string> features;

  bool operator==(const Species&) const = default;
};

// Flat taxonomy of fictitious species. Immutable once built; share it
// read-only (typically through std::shared_ptr<const Ontology>).
struct Ontology {
  std::vector<FeatureDimension> dimensions;
  std::vector<Species> species;
  std::optional<std::int64_t> seed;

  const FeatureDimension* find_dimension(std::string_view name) const;
  const Species* find_species(std::string_view name) const;

  bool operator==(const Ontology&) const = default;
};

inline constexpr std::string_view kDefaultDimensionNames[] = {
    "Diet", "Habitat", "Morphology", "Locomotion", "Social Structure"};

enum class ViolationCode {
  NoDimensions,
  EmptyDimensionName,
  DuplicateDimension,
  TooFewValues,
  EmptyValue,
  DuplicateValue,
  NoSpecies,
  EmptySpeciesName,
  DuplicateSpecies,
  MissingFeature,
  UnknownFeatureDimension,
  ValueOutOfDomain,
  DuplicateVector,
  SchemaMismatch,
};

std::string_view to_string(ViolationCode code) noexcept;

struct Violation {
  ViolationCode code;
  std::string message;
  std::string location;  // e.g. "species[3].features.Diet"
};

// Empty iff every structural invariant holds, including pairwise-distinct
// feature vectors. Never throws.
std::vector<Violation> validate(const Ontology& ontology);

// SCHEMA_MISMATCH violations when the ontology does not have the requested
// species count or dimension names (in order).
std::vector<Violation> check_shape(const Ontology& ontology, std::size_t species_count,
                                   const std::vector<std::string>& dimension_names);

// Deterministic offline generator. Throws Error(Infeasible) when species_count
// exceeds values_per_dim^dims, Error(InvalidConfig) for out-of-range sizes.
Ontology generate_procedural(std::uint64_t seed, int dims, int values_per_dim, int species_count);

// Throws Error(UnknownSpecies) / Error(UnknownDimension).
const std::string& feature_value(const Ontology& ontology, std::string_view species_name,
                                 std::string_view dimension_name);

// Labels are trimmed on the way in; comparison stays case-sensitive.
std::string trim(std::string_view text);

nlohmann::ordered_json to_json(const Ontology& ontology);
// Throws Error(ParseFailed) on structural problems (not on invariant
// violations; call validate for those).
Ontology ontology_from_json(const nlohmann::json& document);

std::string serialize(const Ontology& ontology);
Ontology parse_ontology(std::string_view text);

void save_ontology(const std::filesystem::path& path, const Ontology& ontology);
Ontology load_ontology(const std::filesystem::path& path);

// SHA-256 over the canonical serialization.
std::string fingerprint(const Ontology& ontology);

}  // namespace social_gym
