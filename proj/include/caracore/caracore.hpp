#pragma once

// Exact Caratheodory-set coresets, covariance-preserving compressions, and
// the least-mean-squares solver boosters built on them.

#include "caracore/bench.hpp"
#include "caracore/caratheodory.hpp"
#include "caracore/covariance.hpp"
#include "caracore/cv.hpp"
#include "caracore/datasets.hpp"
#include "caracore/errors.hpp"
#include "caracore/linalg.hpp"
#include "caracore/lms.hpp"
#include "caracore/matrix.hpp"
#include "caracore/pca.hpp"
#include "caracore/report.hpp"
#include "caracore/sketches.hpp"
#include "caracore/solvers.hpp"
#include "caracore/sparse_caratheodory.hpp"
#include "caracore/verify.hpp"
#include "caracore/weighted_set.hpp"
