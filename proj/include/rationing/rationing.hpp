#pragma once

#include "rationing/error.hpp"
#include "rationing/model.hpp"
#include "rationing/chain.hpp"
#include "rationing/tridiagonal.hpp"
#include "rationing/poisson.hpp"
#include "rationing/sensitivity.hpp"
#include "rationing/static_policy.hpp"
#include "rationing/optimizer.hpp"
#include "rationing/sim.hpp"
#include "rationing/io.hpp"
#include "rationing/reproduce.hpp"
