#ifndef GRASSINV_GRASSINV_HPP
#define GRASSINV_GRASSINV_HPP

#include "grassinv/errors.hpp"
#include "grassinv/invariants.hpp"
#include "grassinv/matrix.hpp"
#include "grassinv/mc.hpp"
#include "grassinv/quadrature.hpp"
#include "grassinv/report.hpp"
#include "grassinv/rng.hpp"
#include "grassinv/sampler.hpp"
#include "grassinv/specfun.hpp"
#include "grassinv/verify.hpp"

namespace grassinv {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // GRASSINV_GRASSINV_HPP
