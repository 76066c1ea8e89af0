// Copyright 2026 The sqzsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQZSUB_PARALLEL_H
#define SQZSUB_PARALLEL_H

namespace sqzsub {

/// Selects between the OpenMP kernels and the serial reference loops they are
/// tested against. Both produce bitwise identical results: parallel kernels
/// only distribute independent work items and reduce partial results in a
/// fixed order.
enum class Execution {
    Serial,
    Parallel,
};

int available_threads();

}  // namespace sqzsub

#endif
