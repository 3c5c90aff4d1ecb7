#pragma once

#include <steerkit/vec3.hpp>
#include <steerkit/effect.hpp>
#include <steerkit/dense.hpp>
#include <steerkit/sampling.hpp>
#include <steerkit/quadrature.hpp>
#include <steerkit/partition.hpp>
#include <steerkit/polygon.hpp>
#include <steerkit/sim_three.hpp>
#include <steerkit/sim_four.hpp>
#include <steerkit/steering.hpp>
#include <steerkit/feasibility.hpp>
#include <steerkit/json_io.hpp>
