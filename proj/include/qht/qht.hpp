#pragma once

#include "qht/error.hpp"
#include "qht/fcs.hpp"
#include "qht/io.hpp"
#include "qht/ldp.hpp"
#include "qht/models.hpp"
#include "qht/operator.hpp"
#include "qht/parallel.hpp"
#include "qht/quadrature.hpp"
#include "qht/quasifree.hpp"
#include "qht/random.hpp"
#include "qht/state.hpp"
#include "qht/testing.hpp"
