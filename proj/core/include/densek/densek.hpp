#pragma once

#include "densek/baselines.hpp"
#include "densek/error.hpp"
#include "densek/graph.hpp"
#include "densek/metrics.hpp"
#include "densek/penalty.hpp"
#include "densek/problem.hpp"
#include "densek/solver.hpp"
