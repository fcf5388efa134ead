#pragma once

#include "tgc/capacity.hpp"
#include "tgc/error.hpp"
#include "tgc/logbody.hpp"
#include "tgc/measures.hpp"
#include "tgc/quadrature.hpp"
#include "tgc/rng.hpp"
#include "tgc/simplex.hpp"
#include "tgc/transform.hpp"
