#pragma once

// Umbrella header for the library (everything except the command line).

#include "trinoid/asymptotics.hpp"
#include "trinoid/classify.hpp"
#include "trinoid/config.hpp"
#include "trinoid/constellation.hpp"
#include "trinoid/errors.hpp"
#include "trinoid/io.hpp"
#include "trinoid/params.hpp"
#include "trinoid/quadrature.hpp"
#include "trinoid/surfaces.hpp"
#include "trinoid/weierstrass.hpp"
