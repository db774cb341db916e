#pragma once

#include "conewolff/averaging.hpp"
#include "conewolff/decoupling.hpp"
#include "conewolff/fields.hpp"
