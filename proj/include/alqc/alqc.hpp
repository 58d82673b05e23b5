// Copyright 2026 The alqc Authors
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

#pragma once

#include "alqc/active_learning.hpp"
#include "alqc/classifier.hpp"
#include "alqc/committee.hpp"
#include "alqc/common.hpp"
#include "alqc/csv.hpp"
#include "alqc/datasets.hpp"
#include "alqc/harness.hpp"
#include "alqc/qsim.hpp"
#include "alqc/route_planner.hpp"
#include "alqc/svg.hpp"
#include "alqc/theory.hpp"
