// Copyright 2026 The Coltype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coltype/ontology.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace coltype {
namespace {

using ::testing::HasSubstr;

constexpr char kOntology[] =
    "# people and places\n"
    "version\t4\n"
    "location\tlocation\t-\tplace\n"
    "city\tcity\tlocation\ttown,municipality\n"
    "zip_code\tzip code\t-\tpostcode,postal code\n";

TEST(OntologyTest, LoadsTypesAndInjectsUnknown) {
  auto ontology = LoadOntology(kOntology);
  ASSERT_TRUE(ontology.ok()) << ontology.status();
  EXPECT_EQ(ontology->version(), 4);
  EXPECT_EQ(ontology->TypeIds(),
            (std::vector<std::string>{"city", "location", "unknown",
                                      "zip_code"}));
  EXPECT_EQ(ontology->Find("city")->parent_id, "location");
  EXPECT_EQ(ontology->Find("unknown")->synonyms.size(), 0u);
}

TEST(OntologyTest, ResolvesNormalizedNamesAndSynonyms) {
  auto ontology = LoadOntology(kOntology);
  ASSERT_TRUE(ontology.ok());
  EXPECT_EQ(ontology->ResolveName("Zip_Code")->id, "zip_code");
  EXPECT_EQ(ontology->ResolveName("postalCode")->id, "zip_code");
  EXPECT_EQ(ontology->ResolveName("TOWN")->id, "city");
  EXPECT_EQ(ontology->ResolveName("unknown"), nullptr);
  EXPECT_EQ(ontology->ResolveName("salary"), nullptr);
}

TEST(OntologyTest, ErrorsCarryLineNumbers) {
  auto missing_field = LoadOntology("version\t1\ncity\tcity\t-\n");
  ASSERT_FALSE(missing_field.ok());
  EXPECT_THAT(std::string(missing_field.status().message()),
              HasSubstr("line 2"));

  auto duplicate =
      LoadOntology("version\t1\n# x\ncity\tcity\t-\t-\ncity\tcity\t-\t-\n");
  ASSERT_FALSE(duplicate.ok());
  EXPECT_THAT(std::string(duplicate.status().message()), HasSubstr("line 4"));

  auto no_header = LoadOntology("city\tcity\t-\t-\n");
  ASSERT_FALSE(no_header.ok());
  EXPECT_THAT(std::string(no_header.status().message()), HasSubstr("line 1"));
}

TEST(OntologyTest, RejectsCyclesAndDanglingParents) {
  EXPECT_FALSE(
      LoadOntology("version\t1\na\ta\tb\t-\nb\tb\ta\t-\n").ok());
  EXPECT_FALSE(LoadOntology("version\t1\na\ta\ta\t-\n").ok());
  EXPECT_FALSE(LoadOntology("version\t1\na\ta\tmissing\t-\n").ok());
  EXPECT_FALSE(LoadOntology("version\t1\nunknown\tunknown\t-\tx\n").ok());
}

TEST(OntologyTest, AddUserTypeBumpsVersionOncePerNewType) {
  auto ontology = LoadOntology(kOntology);
  ASSERT_TRUE(ontology.ok());
  auto salary = ontology->AddUserType("Annual Salary");
  ASSERT_TRUE(salary.ok());
  EXPECT_EQ(salary->id, "annual_salary");
  EXPECT_EQ(salary->source, TypeSource::kUser);
  EXPECT_EQ(ontology->version(), 5);

  // Resolving an existing name is not a mutation.
  auto again = ontology->AddUserType("annual_salary");
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(again->id, "annual_salary");
  auto town = ontology->AddUserType("town");
  ASSERT_TRUE(town.ok());
  EXPECT_EQ(town->id, "city");
  EXPECT_EQ(ontology->version(), 5);

  EXPECT_FALSE(ontology->AddUserType("__").ok());
  EXPECT_FALSE(ontology->AddUserType("Unknown").ok());
  EXPECT_EQ(ontology->version(), 5);
}

TEST(OntologyTest, FileContentRoundTrips) {
  auto ontology = LoadOntology(kOntology);
  ASSERT_TRUE(ontology.ok());
  auto reloaded = LoadOntology(ontology->ToFileContent());
  ASSERT_TRUE(reloaded.ok()) << reloaded.status();
  EXPECT_EQ(reloaded->types(), ontology->types());
  EXPECT_EQ(reloaded->version(), ontology->version());
}

}  // namespace
}  // namespace coltype
