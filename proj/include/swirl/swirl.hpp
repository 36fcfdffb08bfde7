#pragma once

#include "swirl/core.hpp"
#include "swirl/errors.hpp"
#include "swirl/euler.hpp"
#include "swirl/field.hpp"
#include "swirl/jump.hpp"
#include "swirl/profile_io.hpp"
#include "swirl/viscous.hpp"
