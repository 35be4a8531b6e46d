#pragma once

#include "hsgrowth/brinkman.hpp"
#include "hsgrowth/config.hpp"
#include "hsgrowth/errors.hpp"
#include "hsgrowth/expression.hpp"
#include "hsgrowth/frame_io.hpp"
#include "hsgrowth/grid.hpp"
#include "hsgrowth/invariants.hpp"
#include "hsgrowth/sim.hpp"
#include "hsgrowth/transport.hpp"
