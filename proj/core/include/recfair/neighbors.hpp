// Copyright 2026 The recfair authors
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

#pragma once

#include "recfair/dataio.hpp"
#include "recfair/runs.hpp"

namespace recfair::neighbors {

enum class KnnFlavor { user, item };

// Plain cosine KNN, no shrinkage. K defaults to 50; the cutoff is the run
// length. Score ties break by ascending item index.
struct KnnConfig {
  KnnFlavor flavor = KnnFlavor::user;
  std::size_t neighbors = 50;
  std::size_t cutoff = 10;
};

// U-KNN: score(u,i) = sum over u's top-K cosine neighbors v of
// sim(u,v) * profile(v,i). I-KNN: each train item j spreads sim(i,j) to the
// items i in j's top-K neighbor list. Train items are excluded from the
// candidates; every user must have at least `cutoff` candidate items left.
effmetrics::RankedRun recommend(const dataio::InteractionDataset& train,
                                const KnnConfig& cfg);

}  // namespace recfair::neighbors
