// Copyright 2026 The weakpol Authors. All Rights Reserved.
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

#pragma once

#include <array>
#include <cstdint>

namespace weakpol::testing {

// Published test-set rows: confusion counts and the four rounded metrics.
struct ConfusionFixture {
  const char* strategy;
  const char* model;
  std::int64_t tn, fn, fp, tp;
  double precision, recall, f1, accuracy;
};

inline constexpr std::array<ConfusionFixture, 28> kConfusionFixtures{{
    {"none", "AdaBoost", 12966, 187, 93, 517, 0.8475, 0.7344, 0.7869, 0.9797},
    {"none", "Bagging", 13041, 184, 18, 520, 0.9665, 0.7386, 0.8374, 0.9853},
    {"none", "DT", 12869, 178, 190, 526, 0.7346, 0.7472, 0.7408, 0.9733},
    {"none", "LR", 12998, 177, 61, 527, 0.8963, 0.7486, 0.8158, 0.9827},
    {"none", "MLP", 12988, 127, 71, 577, 0.8904, 0.8196, 0.8536, 0.9856},
    {"none", "RF", 13052, 186, 7, 518, 0.9867, 0.7358, 0.8430, 0.9860},
    {"none", "XGBoost", 13031, 128, 28, 576, 0.9536, 0.8182, 0.8807, 0.9887},
    {"cost_sensitive", "AdaBoost", 12966, 187, 93, 517, 0.8475, 0.7344, 0.7869, 0.9797},
    {"cost_sensitive", "Bagging", 13041, 178, 18, 526, 0.9669, 0.7472, 0.8429, 0.9858},
    {"cost_sensitive", "DT", 12898, 191, 161, 513, 0.7611, 0.7287, 0.7446, 0.9744},
    {"cost_sensitive", "LR", 12120, 41, 939, 663, 0.4139, 0.9418, 0.5750, 0.9288},
    {"cost_sensitive", "MLP", 12994, 109, 65, 595, 0.9015, 0.8452, 0.8724, 0.9874},
    {"cost_sensitive", "RF", 13052, 190, 7, 514, 0.9866, 0.7301, 0.8392, 0.9857},
    {"cost_sensitive", "XGBoost", 13015, 110, 44, 594, 0.9310, 0.8438, 0.8852, 0.9888},
    {"smote_pre_cv", "AdaBoost", 12314, 86, 745, 618, 0.4534, 0.8778, 0.5980, 0.9396},
    {"smote_pre_cv", "Bagging", 12918, 107, 141, 597, 0.8089, 0.8480, 0.8280, 0.9820},
    {"smote_pre_cv", "DT", 12666, 132, 393, 572, 0.5927, 0.8125, 0.6854, 0.9619},
    {"smote_pre_cv", "LR", 12286, 55, 773, 649, 0.4564, 0.9219, 0.6105, 0.9398},
    {"smote_pre_cv", "MLP", 12945, 107, 114, 597, 0.8397, 0.8480, 0.8438, 0.9839},
    {"smote_pre_cv", "RF", 12955, 107, 104, 597, 0.8516, 0.8480, 0.8498, 0.9847},
    {"smote_pre_cv", "XGBoost", 12987, 104, 72, 600, 0.8929, 0.8523, 0.8721, 0.9872},
    {"smote_in_cv", "AdaBoost", 12434, 85, 625, 619, 0.4976, 0.8793, 0.6355, 0.9484},
    {"smote_in_cv", "Bagging", 12898, 109, 161, 595, 0.7870, 0.8452, 0.8151, 0.9804},
    {"smote_in_cv", "DT", 12651, 130, 408, 574, 0.5845, 0.8153, 0.6809, 0.9609},
    {"smote_in_cv", "LR", 12281, 55, 778, 649, 0.4548, 0.9219, 0.6091, 0.9395},
    {"smote_in_cv", "MLP", 12954, 109, 105, 595, 0.8500, 0.8452, 0.8476, 0.9845},
    {"smote_in_cv", "RF", 12958, 105, 101, 599, 0.8557, 0.8509, 0.8533, 0.9850},
    {"smote_in_cv", "XGBoost", 12976, 102, 83, 602, 0.8788, 0.8551, 0.8668, 0.9866},
}};

inline constexpr double kFixtureTolerance = 0.0005;

}  // namespace weakpol::testing

