// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spinvar/analysis.hpp"
#include "spinvar/cpn_geometry.hpp"
#include "spinvar/errors.hpp"
#include "spinvar/json_io.hpp"
#include "spinvar/numerics.hpp"
#include "spinvar/quadrature.hpp"
#include "spinvar/rng.hpp"
#include "spinvar/spin_algebra.hpp"
#include "spinvar/states.hpp"
#include "spinvar/uncertainty.hpp"
