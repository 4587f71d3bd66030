#pragma once

#include "lsd/bases.hpp"
#include "lsd/decomposition.hpp"
#include "lsd/density.hpp"
#include "lsd/error.hpp"
#include "lsd/families.hpp"
#include "lsd/matrix.hpp"
#include "lsd/measures.hpp"
#include "lsd/oracle.hpp"
#include "lsd/tolerances.hpp"
