#pragma once

#include "conewolff/cone_maps.hpp"
#include "conewolff/exponent_schedule.hpp"
#include "conewolff/plates.hpp"
