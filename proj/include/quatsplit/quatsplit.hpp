#pragma once

#include "quatsplit/algebra.hpp"
#include "quatsplit/errors.hpp"
#include "quatsplit/exact_arith.hpp"
#include "quatsplit/lattice.hpp"
#include "quatsplit/matrix.hpp"
#include "quatsplit/pipeline.hpp"
#include "quatsplit/quadfield.hpp"
#include "quatsplit/quadform.hpp"
#include "quatsplit/quaternion.hpp"
#include "quatsplit/reduction.hpp"
