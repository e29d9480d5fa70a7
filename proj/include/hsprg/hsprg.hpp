// Copyright 2026 The hsprg Authors
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


// Umbrella header.

#pragma once

#include "hsprg/bits.hpp"
#include "hsprg/common.hpp"
#include "hsprg/dgjsv.hpp"
#include "hsprg/distributions.hpp"
#include "hsprg/ffield.hpp"
#include "hsprg/halfspace.hpp"
#include "hsprg/harness.hpp"
#include "hsprg/hashing.hpp"
#include "hsprg/json_io.hpp"
#include "hsprg/mz_generator.hpp"
#include "hsprg/regularity.hpp"
#include "hsprg/rng.hpp"
#include "hsprg/robp.hpp"
#include "hsprg/sandwich_poly.hpp"
#include "hsprg/stats.hpp"
