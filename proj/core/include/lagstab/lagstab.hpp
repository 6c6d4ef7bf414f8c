#pragma once

#include "lagstab/error.hpp"
#include "lagstab/expr.hpp"
#include "lagstab/geometry.hpp"
#include "lagstab/jet.hpp"
#include "lagstab/quadrature.hpp"
#include "lagstab/sim.hpp"
#include "lagstab/synth.hpp"
#include "lagstab/system.hpp"
#include "lagstab/variational.hpp"
