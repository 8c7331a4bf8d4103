#pragma once

#include "eja/algebra.hpp"
#include "eja/bounds.hpp"
#include "eja/interpolation.hpp"
#include "eja/jacobi.hpp"
#include "eja/norms.hpp"
#include "eja/operators.hpp"
#include "eja/opnorm.hpp"
#include "eja/random.hpp"
#include "eja/serialize.hpp"
#include "eja/spectral.hpp"
#include "eja/verifier.hpp"
