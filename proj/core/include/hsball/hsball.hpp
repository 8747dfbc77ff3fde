#pragma once

#include "hsball/boundary.hpp"
#include "hsball/coeff_tables.hpp"
#include "hsball/dual_system.hpp"
#include "hsball/errors.hpp"
#include "hsball/extension.hpp"
#include "hsball/kernels.hpp"
#include "hsball/moebius.hpp"
#include "hsball/params.hpp"
#include "hsball/pick.hpp"
#include "hsball/polyfn.hpp"
#include "hsball/rng.hpp"
#include "hsball/serialize.hpp"
#include "hsball/version.hpp"
