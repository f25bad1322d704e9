// SPDX-License-Identifier: MIT
#pragma once

#include "densim/channels.hpp"
#include "densim/circuit.hpp"
#include "densim/complex_matrix.hpp"
#include "densim/deutsch.hpp"
#include "densim/eig.hpp"
#include "densim/fit.hpp"
#include "densim/gates.hpp"
#include "densim/metrics.hpp"
#include "densim/rng.hpp"
#include "densim/state.hpp"
#include "densim/tomography.hpp"
