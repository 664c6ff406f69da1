#pragma once

#include "uclab/error.hpp"
#include "uclab/summation.hpp"
#include "uclab/parallel.hpp"
#include "uclab/periodic.hpp"
#include "uclab/line.hpp"
#include "uclab/bridge.hpp"
#include "uclab/frames.hpp"
#include "uclab/special.hpp"
#include "uclab/hermite.hpp"
#include "uclab/minimizer.hpp"
#include "uclab/wavelets.hpp"
#include "uclab/io.hpp"
