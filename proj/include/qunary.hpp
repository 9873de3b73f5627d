// Copyright 2026 The qunary Authors
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

#include "qunary/bench.hpp"
#include "qunary/binary.hpp"
#include "qunary/decompose.hpp"
#include "qunary/estimation.hpp"
#include "qunary/gate.hpp"
#include "qunary/market.hpp"
#include "qunary/noise.hpp"
#include "qunary/resources.hpp"
#include "qunary/statevector.hpp"
#include "qunary/unary.hpp"
