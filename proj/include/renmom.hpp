#pragma once

// Umbrella header: pulls in the whole library.

#include "renmom/core.hpp"
#include "renmom/special_functions.hpp"
#include "renmom/quadrature.hpp"
#include "renmom/distributions.hpp"
#include "renmom/closed_form.hpp"
#include "renmom/schemes.hpp"
#include "renmom/log_moments.hpp"
#include "renmom/serialization.hpp"
