#include <set>

#include <gtest/gtest.h>

#include "social_gym/hashing.hpp"
#include "social_gym/ontology.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

using testing::TempDir;
using testing::zorblax;

bool has_code(const std::vector<Violation>& violations, ViolationCode code) {
  for (const auto& v : violations) {
    if (v.code == code) return true;
  }
  return false;
}

TEST(Ontology, FixtureValidates) {
  const auto& o = *zorblax();
  EXPECT_TRUE(validate(o).empty());
  EXPECT_EQ(o.species.size(), 10u);
  EXPECT_EQ(o.dimensions.size(), 5u);
  EXPECT_EQ(feature_value(o, "Zorblax", "Diet"), "Mineralvore");
  EXPECT_EQ(feature_value(o, "Zorblax", "Habitat"), "Acid bog");
}

TEST(Ontology, FeatureValueErrors) {
  const auto& o = *zorblax();
  EXPECT_ERROR_CODE(feature_value(o, "Nobody", "Diet"), ErrorCode::UnknownSpecies);
  EXPECT_ERROR_CODE(feature_value(o, "Zorblax", "Colour"), ErrorCode::UnknownDimension);
}

TEST(Ontology, ValidateCatchesEachViolation) {
  const auto base = *zorblax();

  auto dup_vector = base;
  dup_vector.species[1].features = dup_vector.species[0].features;
  EXPECT_TRUE(has_code(validate(dup_vector), ViolationCode::DuplicateVector));

  auto missing = base;
  missing.species[2].features.erase("Diet");
  EXPECT_TRUE(has_code(validate(missing), ViolationCode::MissingFeature));

  auto out_of_domain = base;
  out_of_domain.species[3].features["Diet"] = "Photosynthetic";
  EXPECT_TRUE(has_code(validate(out_of_domain), ViolationCode::ValueOutOfDomain));

  auto extra = base;
  extra.species[0].features["Colour"] = "Blue";
  EXPECT_TRUE(has_code(validate(extra), ViolationCode::UnknownFeatureDimension));

  auto dup_species = base;
  dup_species.species[1].name = dup_species.species[0].name;
  EXPECT_TRUE(has_code(validate(dup_species), ViolationCode::DuplicateSpecies));

  auto one_value = base;
  one_value.dimensions[0].values.resize(1);
  EXPECT_TRUE(has_code(validate(one_value), ViolationCode::TooFewValues));

  auto dup_value = base;
  dup_value.dimensions[0].values[1] = dup_value.dimensions[0].values[0];
  EXPECT_TRUE(has_code(validate(dup_value), ViolationCode::DuplicateValue));

  auto dup_dim = base;
  dup_dim.dimensions.push_back(dup_dim.dimensions[0]);
  EXPECT_TRUE(has_code(validate(dup_dim), ViolationCode::DuplicateDimension));

  Ontology empty;
  EXPECT_TRUE(has_code(validate(empty), ViolationCode::NoDimensions));
  EXPECT_TRUE(has_code(validate(empty), ViolationCode::NoSpecies));
}

TEST(Ontology, CheckShape) {
  const auto& o = *zorblax();
  std::vector<std::string> names(std::begin(kDefaultDimensionNames), std::end(kDefaultDimensionNames));
  EXPECT_TRUE(check_shape(o, 10, names).empty());
  EXPECT_TRUE(has_code(check_shape(o, 12, names), ViolationCode::SchemaMismatch));
  names[0] = "Food";
  EXPECT_TRUE(has_code(check_shape(o, 10, names), ViolationCode::SchemaMismatch));
}

// Pairwise distinctness checked by brute force, independent of validate().
bool vectors_pairwise_distinct(const Ontology& o) {
  for (std::size_t i = 0; i < o.species.size(); ++i) {
    for (std::size_t j = i + 1; j < o.species.size(); ++j) {
      bool same = true;
      for (const auto& dim : o.dimensions) {
        if (o.species[i].features.at(dim.name) != o.species[j].features.at(dim.name)) same = false;
      }
      if (same) return false;
    }
  }
  return true;
}

TEST(Ontology, ProceduralAlwaysValidAndDistinct) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int dims = 2 + static_cast<int>(seed % 4);
    const int values = 2 + static_cast<int>(seed % 3);
    int space = 1;
    for (int d = 0; d < dims; ++d) space *= values;
    const int species = std::min(space, 3 + static_cast<int>(seed % 12));
    const auto o = generate_procedural(seed, dims, values, species);
    ASSERT_TRUE(validate(o).empty()) << "seed " << seed;
    ASSERT_TRUE(vectors_pairwise_distinct(o)) << "seed " << seed;
    ASSERT_EQ(o.species.size(), static_cast<std::size_t>(species));
  }
}

TEST(Ontology, ProceduralIsDeterministic) {
  EXPECT_EQ(generate_procedural(7, 5, 3, 10), generate_procedural(7, 5, 3, 10));
  EXPECT_NE(generate_procedural(7, 5, 3, 10), generate_procedural(8, 5, 3, 10));
}

TEST(Ontology, ProceduralInfeasible) {
  EXPECT_ERROR_CODE(generate_procedural(1, 2, 2, 5), ErrorCode::Infeasible);
  EXPECT_NO_THROW(generate_procedural(1, 2, 2, 4));
  EXPECT_ERROR_CODE(generate_procedural(1, 0, 3, 5), ErrorCode::InvalidConfig);
}

TEST(Ontology, JsonRoundTrip) {
  const auto o = generate_procedural(3, 5, 3, 10);
  EXPECT_EQ(parse_ontology(serialize(o)), o);
  EXPECT_EQ(serialize(parse_ontology(serialize(o))), serialize(o));

  TempDir dir;
  save_ontology(dir / "o.json", o);
  EXPECT_EQ(load_ontology(dir / "o.json"), o);
}

TEST(Ontology, ParseErrors) {
  EXPECT_ERROR_CODE(parse_ontology("not json"), ErrorCode::ParseFailed);
  EXPECT_ERROR_CODE(parse_ontology("{\"species\": []}"), ErrorCode::ParseFailed);
  EXPECT_ERROR_CODE(parse_ontology("{\"dimensions\": [{\"name\": 3, \"values\": []}], \"species\": []}"),
                    ErrorCode::ParseFailed);
}

TEST(Ontology, LabelsAreTrimmed) {
  const auto o = parse_ontology(R"({"dimensions":[{"name":" Diet ","values":[" A","B "]}],
    "species":[{"name":" X ","features":{" Diet":"A "}},{"name":"Y","features":{"Diet":"B"}}]})");
  EXPECT_TRUE(validate(o).empty());
  EXPECT_EQ(o.dimensions[0].name, "Diet");
  EXPECT_EQ(o.species[0].name, "X");
  EXPECT_EQ(feature_value(o, "X", "Diet"), "A");
}

TEST(Ontology, FingerprintIsSha256OfSerialization) {
  const auto& o = *zorblax();
  EXPECT_EQ(fingerprint(o), sha256_hex(serialize(o)));
  EXPECT_EQ(fingerprint(o).size(), 64u);
}

TEST(Hashing, KnownSha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hashing, DeriveSeedIsStableAndLabelSensitive) {
  EXPECT_EQ(derive_seed(1, "TD"), derive_seed(1, "TD"));
  EXPECT_NE(derive_seed(1, "TD"), derive_seed(1, "BU"));
  EXPECT_NE(derive_seed(1, "TD"), derive_seed(2, "TD"));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(derive_seed(0, std::to_string(i)));
  EXPECT_EQ(seen.size(), 1000u);
}

}  // namespace
}  // namespace social_gym
