/*
Copyright 2026 The mincluster Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include "mincluster/cluster_find.hpp"
#include "mincluster/digraph.hpp"
#include "mincluster/error.hpp"
#include "mincluster/graph.hpp"
#include "mincluster/graph_io.hpp"
#include "mincluster/msp_paths.hpp"
#include "mincluster/randgen.hpp"
#include "mincluster/rng.hpp"
#include "mincluster/sp_reduce.hpp"
#include "mincluster/stats.hpp"
#include "mincluster/syncpoints.hpp"
