// Copyright 2026 The qpower Authors
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

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace qpower {

using Rng = std::mt19937_64;

/// Seed for the named sub-stream @p stream of a base seed, optionally keyed
/// by extra integers (run index, qubit count, ...). Pure function.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream,
                          std::initializer_list<std::uint64_t> keys = {});

inline Rng make_rng(std::uint64_t base, std::string_view stream,
                    std::initializer_list<std::uint64_t> keys = {}) {
  return Rng(derive_seed(base, stream, keys));
}

}  // namespace qpower
