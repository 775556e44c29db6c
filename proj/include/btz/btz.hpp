#pragma once

#include "btz/error.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"
#include "btz/causality.hpp"
#include "btz/developing.hpp"
#include "btz/surfaces.hpp"
#include "btz/extensions.hpp"
#include "btz/modular.hpp"
#include "btz/sampling.hpp"
#include "btz/io.hpp"
#include "btz/verify.hpp"
