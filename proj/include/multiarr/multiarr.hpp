#pragma once

#include "field.hpp"
#include "polynomial.hpp"
#include "linear_algebra.hpp"
#include "arrangement.hpp"
#include "derivation.hpp"
#include "euler_restriction.hpp"
#include "freeness.hpp"
#include "catalog.hpp"
