#pragma once

#include "conewolff/cutoffs.hpp"
#include "conewolff/finite_type_rescale.hpp"
#include "conewolff/multipliers.hpp"
#include "conewolff/symbols.hpp"
