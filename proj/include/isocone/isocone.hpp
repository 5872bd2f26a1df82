#pragma once

#include "isocone/analysis.hpp"
#include "isocone/cone_model.hpp"
#include "isocone/config.hpp"
#include "isocone/document.hpp"
#include "isocone/errors.hpp"
#include "isocone/solvers.hpp"
#include "isocone/types.hpp"
