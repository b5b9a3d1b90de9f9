#include "social_gym/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "social_gym/error.hpp"
#include "social_gym/hashing.hpp"
#include "social_gym/random.hpp"

namespace social_gym {
namespace {

using json = nlohmann::json;

struct DimensionPool {
  std::string_view name;
  std::vector<std::string_view> values;
};

// At least six values each, so any values_per_dim in [2, 6] can be served.
const std::vector<DimensionPool>& dimension_pools() {
  static const std::vector<DimensionPool> pools = {
      {"Diet", {"Herbivore", "Carnivore", "Mineralvore", "Photosynthetic", "Detritivore", "Omnivore"}},
      {"Habitat", {"Acid bog", "Crystal desert", "Methane sea", "Lava tubes", "Ice caverns", "Spore forest"}},
      {"Morphology", {"Gelatinous", "Chitinous", "Crystalline", "Feathered", "Segmented", "Gaseous"}},
      {"Locomotion", {"Ground-based", "Air-based", "Swimming", "Burrowing", "Rolling", "Gliding"}},
      {"Social Structure", {"Solitary", "Hive", "Pack", "Colonial", "Pair-bonded", "Nomadic herd"}},
      {"Coloration", {"Bioluminescent", "Iridescent", "Translucent", "Mottled", "Striped", "Jet black"}},
      {"Reproduction", {"Budding", "Egg-laying", "Spore release", "Fission", "Live birth", "Grafting"}},
      {"Communication", {"Chemical", "Ultrasonic", "Color flashes", "Vibration", "Telepathic", "Drumming"}},
      {"Lifespan", {"Ephemeral", "Seasonal", "Decades", "Centuries", "Millennia", "Cyclic rebirth"}},
      {"Senses", {"Echolocation", "Thermal sight", "Magnetic sense", "Compound eyes", "Tremor sense", "Blind"}},
  };
  return pools;
}

constexpr std::string_view kNamePrefixes[] = {"Zor", "Vel", "Quix", "Thra", "Mor", "Gli", "Xan", "Bru",
                                              "Kel", "Pyr", "Sna", "Dro", "Fen", "Ulk", "Yav", "Ree"};
constexpr std::string_view kNameSuffixes[] = {"blax", "thid", "ora", "mite", "pod", "zun",
                                              "gar", "lisk", "vex", "nul", "quor", "sith"};

std::vector<std::string> species_names(Rng& rng, std::size_t count) {
  std::vector<std::string> names;
  for (auto prefix : kNamePrefixes) {
    for (auto suffix : kNameSuffixes) names.push_back(std::string(prefix) + std::string(suffix));
  }
  rng.shuffle(std::span(names));
  const std::size_t base = names.size();
  for (std::size_t i = base; i < count; ++i) {
    names.push_back(fmt::format("{}-{}", names[i % base], i / base + 1));
  }
  names.resize(count);
  return names;
}

// values^dims, saturated at `cap`.
std::uint64_t vector_space_size(int dims, int values, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < dims; ++i) {
    total *= static_cast<std::uint64_t>(values);
    if (total > cap) return cap + 1;
  }
  return total;
}

std::vector<std::vector<int>> distinct_vectors(Rng& rng, int dims, int values, std::size_t count) {
  constexpr std::uint64_t kEnumerateLimit = 4096;
  const std::uint64_t space = vector_space_size(dims, values, kEnumerateLimit);
  std::vector<std::vector<int>> out;
  auto decode = [&](std::uint64_t code) {
    std::vector<int> v(static_cast<std::size_t>(dims));
    for (int d = dims - 1; d >= 0; --d) {
      v[static_cast<std::size_t>(d)] = static_cast<int>(code % static_cast<std::uint64_t>(values));
      code /= static_cast<std::uint64_t>(values);
    }
    return v;
  };
  if (space <= kEnumerateLimit) {
    std::vector<std::uint64_t> codes(space);
    for (std::uint64_t i = 0; i < space; ++i) codes[i] = i;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(codes[i], codes[i + rng.index(codes.size() - i)]);
      out.push_back(decode(codes[i]));
    }
    return out;
  }
  std::set<std::vector<int>> seen;
  while (out.size() < count) {
    std::vector<int> v(static_cast<std::size_t>(dims));
    for (auto& x : v) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(values)));
    if (seen.insert(v).second) out.push_back(std::move(v));
  }
  return out;
}

std::string require_string(const json& node, std::string_view what) {
  if (!node.is_string()) throw Error(ErrorCode::ParseFailed, fmt::format("{} must be a string", what));
  return trim(node.get<std::string>());
}

}  // namespace

bool FeatureDimension::has_value(std::string_view value) const {
  return std::find(values.begin(), values.end(), value) != values.end();
}

const FeatureDimension* Ontology::find_dimension(std::string_view name) const {
  for (const auto& d : dimensions) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const Species* Ontology::find_species(std::string_view name) const {
  for (const auto& s : species) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string_view to_string(ViolationCode code) noexcept {
  switch (code) {
    case ViolationCode::NoDimensions: return "NO_DIMENSIONS";
    case ViolationCode::EmptyDimensionName: return "EMPTY_DIMENSION_NAME";
    case ViolationCode::DuplicateDimension: return "DUPLICATE_DIMENSION";
    case ViolationCode::TooFewValues: return "TOO_FEW_VALUES";
    case ViolationCode::EmptyValue: return "EMPTY_VALUE";
    case ViolationCode::DuplicateValue: return "DUPLICATE_VALUE";
    case ViolationCode::NoSpecies: return "NO_SPECIES";
    case ViolationCode::EmptySpeciesName: return "EMPTY_SPECIES_NAME";
    case ViolationCode::DuplicateSpecies: return "DUPLICATE_SPECIES";
    case ViolationCode::MissingFeature: return "MISSING_FEATURE";
    case ViolationCode::UnknownFeatureDimension: return "UNKNOWN_FEATURE_DIMENSION";
    case ViolationCode::ValueOutOfDomain: return "VALUE_OUT_OF_DOMAIN";
    case ViolationCode::DuplicateVector: return "DUPLICATE_VECTOR";
    case ViolationCode::SchemaMismatch: return "SCHEMA_MISMATCH";
  }
  return "UNKNOWN";
}

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

std::vector<Violation> validate(const Ontology& ontology) {
  std::vector<Violation> out;
  auto add = [&out](ViolationCode code, std::string message, std::string location) {
    out.push_back({code, std::move(message), std::move(location)});
  };

  if (ontology.dimensions.empty()) add(ViolationCode::NoDimensions, "ontology has no dimensions", "dimensions");
  std::set<std::string> dim_names;
  for (std::size_t i = 0; i < ontology.dimensions.size(); ++i) {
    const auto& dim = ontology.dimensions[i];
    const auto loc = fmt::format("dimensions[{}]", i);
    const auto name = trim(dim.name);
    if (name.empty()) add(ViolationCode::EmptyDimensionName, "dimension name is empty", loc + ".name");
    if (!name.empty() && !dim_names.insert(name).second) {
      add(ViolationCode::DuplicateDimension, fmt::format("dimension '{}' listed twice", name), loc + ".name");
    }
    if (dim.values.size() < 2) {
      add(ViolationCode::TooFewValues, fmt::format("dimension '{}' has {} value(s), needs >= 2", name, dim.values.size()),
          loc + ".values");
    }
    std::set<std::string> seen;
    for (std::size_t j = 0; j < dim.values.size(); ++j) {
      const auto value = trim(dim.values[j]);
      const auto vloc = fmt::format("{}.values[{}]", loc, j);
      if (value.empty()) {
        add(ViolationCode::EmptyValue, fmt::format("dimension '{}' has an empty value label", name), vloc);
      } else if (!seen.insert(value).second) {
        add(ViolationCode::DuplicateValue, fmt::format("dimension '{}' repeats value '{}'", name, value), vloc);
      }
    }
  }

  if (ontology.species.empty()) add(ViolationCode::NoSpecies, "ontology has no species", "species");
  std::set<std::string> species_names_seen;
  std::map<std::vector<std::string>, std::string> vectors;
  for (std::size_t i = 0; i < ontology.species.size(); ++i) {
    const auto& sp = ontology.species[i];
    const auto loc = fmt::format("species[{}]", i);
    const auto name = trim(sp.name);
    if (name.empty()) add(ViolationCode::EmptySpeciesName, "species name is empty", loc + ".name");
    if (!name.empty() && !species_names_seen.insert(name).second) {
      add(ViolationCode::DuplicateSpecies, fmt::format("species '{}' listed twice", name), loc + ".name");
    }
    for (const auto& [dim_name, value] : sp.features) {
      if (ontology.find_dimension(trim(dim_name)) == nullptr) {
        add(ViolationCode::UnknownFeatureDimension,
            fmt::format("species '{}' assigns unknown dimension '{}'", name, dim_name),
            fmt::format("{}.features.{}", loc, dim_name));
      }
    }
    std::vector<std::string> vec;
    bool complete = true;
    for (const auto& dim : ontology.dimensions) {
      const auto it = sp.features.find(dim.name);
      const auto floc = fmt::format("{}.features.{}", loc, dim.name);
      if (it == sp.features.end()) {
        add(ViolationCode::MissingFeature, fmt::format("species '{}' has no value for '{}'", name, dim.name), floc);
        complete = false;
        continue;
      }
      const auto value = trim(it->second);
      if (!dim.has_value(value)) {
        add(ViolationCode::ValueOutOfDomain,
            fmt::format("species '{}' assigns '{}' to '{}', outside its domain", name, value, dim.name), floc);
      }
      vec.push_back(value);
    }
    if (!complete) continue;
    auto [pos, inserted] = vectors.emplace(vec, name);
    if (!inserted) {
      add(ViolationCode::DuplicateVector,
          fmt::format("species '{}' and '{}' share an identical feature vector", pos->second, name), loc);
    }
  }
  return out;
}

std::vector<Violation> check_shape(const Ontology& ontology, std::size_t species_count,
                                   const std::vector<std::string>& dimension_names) {
  std::vector<Violation> out;
  if (ontology.species.size() != species_count) {
    out.push_back({ViolationCode::SchemaMismatch,
                   fmt::format("expected {} species, got {}", species_count, ontology.species.size()), "species"});
  }
  std::vector<std::string> actual;
  for (const auto& d : ontology.dimensions) actual.push_back(d.name);
  if (actual != dimension_names) {
    out.push_back({ViolationCode::SchemaMismatch,
                   fmt::format("expected dimensions [{}], got [{}]", fmt::join(dimension_names, ", "),
                               fmt::join(actual, ", ")),
                   "dimensions"});
  }
  return out;
}

Ontology generate_procedural(std::uint64_t seed, int dims, int values_per_dim, int species_count) {
  if (dims < 1) throw Error(ErrorCode::InvalidConfig, "dims must be >= 1");
  if (values_per_dim < 2 || values_per_dim > 6) throw Error(ErrorCode::InvalidConfig, "values per dimension must be in [2, 6]");
  if (species_count < 1) throw Error(ErrorCode::InvalidConfig, "species count must be >= 1");
  const auto space = vector_space_size(dims, values_per_dim, static_cast<std::uint64_t>(species_count));
  if (space < static_cast<std::uint64_t>(species_count)) {
    throw Error(ErrorCode::Infeasible,
                fmt::format("{} species need distinct vectors but only {} exist ({} dims x {} values)", species_count,
                            space, dims, values_per_dim));
  }

  Rng rng(seed);
  Ontology ontology;
  ontology.seed = static_cast<std::int64_t>(seed);
  const auto& pools = dimension_pools();
  for (int d = 0; d < dims; ++d) {
    FeatureDimension dim;
    if (static_cast<std::size_t>(d) < pools.size()) {
      const auto& pool = pools[static_cast<std::size_t>(d)];
      dim.name = std::string(pool.name);
      std::vector<std::string> values(pool.values.begin(), pool.values.end());
      rng.shuffle(std::span(values));
      values.resize(static_cast<std::size_t>(values_per_dim));
      dim.values = std::move(values);
    } else {
      dim.name = fmt::format("Trait {}", d + 1);
      for (int v = 0; v < values_per_dim; ++v) dim.values.push_back(fmt::format("Variant {}", static_cast<char>('A' + v)));
    }
    ontology.dimensions.push_back(std::move(dim));
  }

  const auto names = species_names(rng, static_cast<std::size_t>(species_count));
  const auto vectors = distinct_vectors(rng, dims, values_per_dim, static_cast<std::size_t>(species_count));
  for (std::size_t i = 0; i < names.size(); ++i) {
    Species sp{names[i], {}};
    for (std::size_t d = 0; d < ontology.dimensions.size(); ++d) {
      const auto& dim = ontology.dimensions[d];
      sp.features.emplace(dim.name, dim.values[static_cast<std::size_t>(vectors[i][d])]);
    }
    ontology.species.push_back(std::move(sp));
  }
  return ontology;
}

const std::string& feature_value(const Ontology& ontology, std::string_view species_name,
                                 std::string_view dimension_name) {
  const Species* sp = ontology.find_species(species_name);
  if (sp == nullptr) throw Error(ErrorCode::UnknownSpecies, fmt::format("unknown species '{}'", species_name));
  if (ontology.find_dimension(dimension_name) == nullptr) {
    throw Error(ErrorCode::UnknownDimension, fmt::format("unknown dimension '{}'", dimension_name));
  }
  const auto it = sp->features.find(std::string(dimension_name));
  if (it == sp->features.end()) {
    throw Error(ErrorCode::UnknownDimension,
                fmt::format("species '{}' has no value for '{}'", species_name, dimension_name));
  }
  return it->second;
}

nlohmann::ordered_json to_json(const Ontology& ontology) {
  nlohmann::ordered_json doc;
  doc["dimensions"] = nlohmann::ordered_json::array();
  for (const auto& dim : ontology.dimensions) {
    doc["dimensions"].push_back({{"name", dim.name}, {"values", dim.values}});
  }
  doc["species"] = nlohmann::ordered_json::array();
  for (const auto& sp : ontology.species) {
    nlohmann::ordered_json features = nlohmann::ordered_json::object();
    // dimension order first, then any stray keys so invalid ontologies survive a round trip
    for (const auto& dim : ontology.dimensions) {
      if (auto it = sp.features.find(dim.name); it != sp.features.end()) features[dim.name] = it->second;
    }
    for (const auto& [key, value] : sp.features) {
      if (!features.contains(key)) features[key] = value;
    }
    doc["species"].push_back({{"name", sp.name}, {"features", std::move(features)}});
  }
  if (ontology.seed) doc["seed"] = *ontology.seed;
  return doc;
}

Ontology ontology_from_json(const json& document) {
  if (!document.is_object()) throw Error(ErrorCode::ParseFailed, "ontology document must be an object");
  if (!document.contains("dimensions") || !document["dimensions"].is_array()) {
    throw Error(ErrorCode::ParseFailed, "ontology needs a 'dimensions' array");
  }
  if (!document.contains("species") || !document["species"].is_array()) {
    throw Error(ErrorCode::ParseFailed, "ontology needs a 'species' array");
  }
  Ontology ontology;
  for (const auto& node : document["dimensions"]) {
    if (!node.is_object() || !node.contains("name") || !node.contains("values") || !node["values"].is_array()) {
      throw Error(ErrorCode::ParseFailed, "each dimension needs 'name' and 'values'");
    }
    FeatureDimension dim{require_string(node["name"], "dimension name"), {}};
    for (const auto& v : node["values"]) dim.values.push_back(require_string(v, "dimension value"));
    ontology.dimensions.push_back(std::move(dim));
  }
  for (const auto& node : document["species"]) {
    if (!node.is_object() || !node.contains("name") || !node.contains("features") || !node["features"].is_object()) {
      throw Error(ErrorCode::ParseFailed, "each species needs 'name' and a 'features' object");
    }
    Species sp{require_string(node["name"], "species name"), {}};
    for (const auto& [key, value] : node["features"].items()) {
      sp.features[trim(key)] = require_string(value, "feature value");
    }
    ontology.species.push_back(std::move(sp));
  }
  if (document.contains("seed") && !document["seed"].is_null()) {
    if (!document["seed"].is_number_integer()) throw Error(ErrorCode::ParseFailed, "'seed' must be an integer");
    ontology.seed = document["seed"].get<std::int64_t>();
  }
  return ontology;
}

std::string serialize(const Ontology& ontology) { return to_json(ontology).dump(2) + "\n"; }

Ontology parse_ontology(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseFailed, fmt::format("ontology is not valid JSON: {}", e.what()));
  }
  return ontology_from_json(doc);
}

void save_ontology(const std::filesystem::path& path, const Ontology& ontology) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << serialize(ontology);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Ontology load_ontology(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_ontology(buffer.str());
}

std::string fingerprint(const Ontology& ontology) { return sha256_hex(serialize(ontology)); }

}  // namespace social_gym
