#pragma once

#include "conewolff/cone_chart.hpp"
#include "conewolff/curve.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/generator.hpp"
