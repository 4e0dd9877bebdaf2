// SPDX-License-Identifier: Apache-2.0
// Umbrella header: the whole library in one include.
#pragma once

#include "mclink/ber.hpp"
#include "mclink/channel.hpp"
#include "mclink/config.hpp"
#include "mclink/decision_rule.hpp"
#include "mclink/detector.hpp"
#include "mclink/distributions.hpp"
#include "mclink/errors.hpp"
#include "mclink/optimizer.hpp"
#include "mclink/particle.hpp"
#include "mclink/quadrature.hpp"
#include "mclink/rng.hpp"
#include "mclink/serialize.hpp"
#include "mclink/simulate.hpp"
#include "mclink/special.hpp"
#include "mclink/sweep.hpp"
