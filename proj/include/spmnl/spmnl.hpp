#pragma once

#include "chi_square.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "iia.hpp"
#include "kernels.hpp"
#include "model_core.hpp"
#include "parametric.hpp"
#include "profile.hpp"
#include "random.hpp"
#include "simulate.hpp"
