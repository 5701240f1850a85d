/*
 * Copyright 2026 The bitscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

/** \file bitscan.hpp
 *  \brief Umbrella header for the whole library.
 */

#include "bitscan/append_column.hpp"   // IWYU pragma: export
#include "bitscan/binarizer.hpp"       // IWYU pragma: export
#include "bitscan/distance.hpp"        // IWYU pragma: export
#include "bitscan/engine.hpp"          // IWYU pragma: export
#include "bitscan/errors.hpp"          // IWYU pragma: export
#include "bitscan/index_file.hpp"      // IWYU pragma: export
#include "bitscan/jsonl.hpp"           // IWYU pragma: export
#include "bitscan/metrics.hpp"         // IWYU pragma: export
#include "bitscan/oracle.hpp"          // IWYU pragma: export
#include "bitscan/synthetic.hpp"       // IWYU pragma: export
#include "bitscan/topk.hpp"            // IWYU pragma: export
#include "bitscan/types.hpp"           // IWYU pragma: export
