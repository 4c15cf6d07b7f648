#ifndef MCCSP_MCCSP_HPP
#define MCCSP_MCCSP_HPP

#include "mccsp/core.hpp"
#include "mccsp/polymorphism.hpp"
#include "mccsp/minimality.hpp"
#include "mccsp/greedy.hpp"
#include "mccsp/blp.hpp"
#include "mccsp/reductions.hpp"
#include "mccsp/io.hpp"

#endif  // MCCSP_MCCSP_HPP
