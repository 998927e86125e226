#pragma once

// Umbrella header.

#include "archheight/batch.hpp"
#include "archheight/bound_engine.hpp"
#include "archheight/curve_model.hpp"
#include "archheight/errors.hpp"
#include "archheight/exact.hpp"
#include "archheight/height_oracle.hpp"
#include "archheight/input.hpp"
#include "archheight/place.hpp"
#include "archheight/report.hpp"
#include "archheight/torsion_constants.hpp"
