#pragma once

#include "ofplus/asymptotics.hpp"
#include "ofplus/deformation.hpp"
#include "ofplus/errors.hpp"
#include "ofplus/fock.hpp"
#include "ofplus/freedist.hpp"
#include "ofplus/fspec.hpp"
#include "ofplus/haar.hpp"
#include "ofplus/matrix.hpp"
#include "ofplus/partitions.hpp"
#include "ofplus/scalar.hpp"
#include "ofplus/symmetry.hpp"
#include "ofplus/weingarten.hpp"
