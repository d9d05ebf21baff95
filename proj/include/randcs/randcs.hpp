#ifndef RANDCS_RANDCS_HPP
#define RANDCS_RANDCS_HPP

#include "randcs/baselines.hpp"
#include "randcs/error.hpp"
#include "randcs/fixture_io.hpp"
#include "randcs/harness.hpp"
#include "randcs/numerics.hpp"
#include "randcs/random.hpp"
#include "randcs/recovery.hpp"
#include "randcs/report.hpp"
#include "randcs/sensing.hpp"

#endif  // RANDCS_RANDCS_HPP
