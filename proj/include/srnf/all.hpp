/*
Copyright 2026 The srnf-wfr Authors

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

#include "srnf/core.hpp"
#include "srnf/hull.hpp"
#include "srnf/io.hpp"
#include "srnf/manifold.hpp"
#include "srnf/measure.hpp"
#include "srnf/mesh.hpp"
#include "srnf/minkowski.hpp"
#include "srnf/oracle.hpp"
#include "srnf/shapes.hpp"
#include "srnf/srnf.hpp"
#include "srnf/wfr.hpp"
