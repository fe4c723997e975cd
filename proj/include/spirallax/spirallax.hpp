#pragma once

#include "errors.hpp"
#include "projgeo.hpp"
#include "spiral.hpp"
#include "lift.hpp"
#include "coords.hpp"
#include "shiftmap.hpp"
#include "laurent.hpp"
#include "laxspec.hpp"
#include "suite.hpp"
