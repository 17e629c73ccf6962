#pragma once

#include "locbounds/bound_kernels.hpp"
#include "locbounds/correlation_bounds.hpp"
#include "locbounds/errors.hpp"
#include "locbounds/fit.hpp"
#include "locbounds/fse_bounds.hpp"
#include "locbounds/hk_constants.hpp"
#include "locbounds/holo_engine.hpp"
#include "locbounds/kernel_json.hpp"
#include "locbounds/verify.hpp"
#include "locbounds/ed/instances.hpp"
#include "locbounds/ed/lattice.hpp"
#include "locbounds/ed/operators.hpp"
#include "locbounds/ed/response.hpp"
#include "locbounds/ed/spectrum.hpp"
