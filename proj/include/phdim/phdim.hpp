#ifndef PHDIM_PHDIM_HPP
#define PHDIM_PHDIM_HPP

#include "phdim/baselines.hpp"
#include "phdim/bounds.hpp"
#include "phdim/errors.hpp"
#include "phdim/estimator.hpp"
#include "phdim/generators.hpp"
#include "phdim/geometry.hpp"
#include "phdim/io.hpp"
#include "phdim/line_fit.hpp"
#include "phdim/random.hpp"

#endif  // PHDIM_PHDIM_HPP
