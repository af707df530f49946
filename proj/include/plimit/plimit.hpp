#pragma once

#include "plimit/error.hpp"
#include "plimit/grid.hpp"
#include "plimit/field.hpp"
#include "plimit/weight.hpp"
#include "plimit/geo_limits.hpp"
#include "plimit/plap.hpp"
#include "plimit/viscosity.hpp"
#include "plimit/io.hpp"
#include "plimit/config.hpp"
#include "plimit/commands.hpp"
