#pragma once

#include "bounds.hpp"
#include "clifford.hpp"
#include "config.hpp"
#include "error.hpp"
#include "functionals.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "mub.hpp"
#include "seesaw.hpp"
