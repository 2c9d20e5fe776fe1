// Copyright 2026 The hopmc Authors
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

#include "hopmc/model_config.h"

#include <gtest/gtest.h>

#include <stdexcept>

namespace hopmc {
namespace {

TEST(KeyValueConfigTest, ParsesCommentsAndWhitespace) {
  const auto cfg = KeyValueConfig::parse(
      "# header\n"
      "\n"
      "  musfib.gain =  0.001 \r\n"
      "common.mass=75\n");
  EXPECT_EQ(cfg.entries().size(), 2u);
  EXPECT_EQ(cfg.get("musfib.gain").value(), "0.001");
  EXPECT_DOUBLE_EQ(cfg.get_double("common.mass").value(), 75.0);
  EXPECT_FALSE(cfg.get("missing").has_value());
}

TEST(KeyValueConfigTest, LaterEntryWins) {
  const auto cfg = KeyValueConfig::parse("a = 1\na = 2\n");
  EXPECT_EQ(cfg.get("a").value(), "2");
}

TEST(KeyValueConfigTest, MalformedLines) {
  EXPECT_THROW(KeyValueConfig::parse("no equals sign\n"), std::invalid_argument);
  EXPECT_THROW(KeyValueConfig::parse(" = 3\n"), std::invalid_argument);
}

TEST(ParseDoubleTest, RejectsGarbageAndNonFinite) {
  EXPECT_DOUBLE_EQ(parse_double(" -2.5e-3 ", "x"), -2.5e-3);
  EXPECT_THROW(parse_double("1.0abc", "x"), std::invalid_argument);
  EXPECT_THROW(parse_double("", "x"), std::invalid_argument);
  EXPECT_THROW(parse_double("inf", "x"), std::invalid_argument);
  EXPECT_THROW(parse_double("nan", "x"), std::invalid_argument);
}

TEST(ModelOverridesTest, AppliesOwnPrefixOnly) {
  const auto cfg = KeyValueConfig::parse(
      "musfib.u0 = 0.03\n"
      "muslin.u0 = 0.5\n"
      "common.gravity = 9.8\n");
  ModelSpec spec = ModelSpec::musfib();
  apply_model_overrides(spec, cfg);
  EXPECT_DOUBLE_EQ(spec.musfib_params().u0, 0.03);
  EXPECT_DOUBLE_EQ(spec.common.gravity, 9.8);

  ModelSpec lin = ModelSpec::muslin();
  apply_model_overrides(lin, cfg);
  EXPECT_DOUBLE_EQ(lin.muslin_params().u0, 0.5);
}

TEST(ModelOverridesTest, UnknownFieldIsError) {
  ModelSpec spec = ModelSpec::musfib();
  EXPECT_THROW(apply_model_overrides(spec, KeyValueConfig::parse("musfib.mu = 1\n")),
               std::invalid_argument);
}

TEST(ModelOverridesTest, InvalidResultIsError) {
  ModelSpec spec = ModelSpec::muslin();
  EXPECT_THROW(apply_model_overrides(spec, KeyValueConfig::parse("muslin.tau = -1\n")),
               std::invalid_argument);
}

TEST(ModelOverridesTest, MotorMassFollowsBodyMass) {
  ModelSpec spec = ModelSpec::dcmot();
  apply_model_overrides(spec, KeyValueConfig::parse("common.mass = 70\n"));
  EXPECT_NEAR(spec.dcmot_params().body_mass, 100 * 0.212 / 2500 * 70, 1e-15);

  ModelSpec bad = ModelSpec::dcmot();
  EXPECT_THROW(apply_model_overrides(bad, KeyValueConfig::parse("dcmot.body_mass = 0.68\n")),
               std::invalid_argument);
}

TEST(ModelKeyTest, RecognizesParameterKeys) {
  EXPECT_TRUE(is_model_key("musfib.shape"));
  EXPECT_TRUE(is_model_key("dcmot.k_p"));
  EXPECT_TRUE(is_model_key("common.rest_length"));
  EXPECT_FALSE(is_model_key("muslin.shape"));
  EXPECT_FALSE(is_model_key("solver.abs_tol"));
  EXPECT_FALSE(is_model_key("mass"));
}

}  // namespace
}  // namespace hopmc
