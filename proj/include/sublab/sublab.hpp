#ifndef SUBLAB_SUBLAB_HPP
#define SUBLAB_SUBLAB_HPP

#include "sublab/error.hpp"
#include "sublab/parallel.hpp"
#include "sublab/manifold.hpp"
#include "sublab/curve.hpp"
#include "sublab/lattice.hpp"
#include "sublab/models.hpp"
#include "sublab/submersion.hpp"
#include "sublab/bundle.hpp"
#include "sublab/claims.hpp"
#include "sublab/finite_metric.hpp"
#include "sublab/nets.hpp"
#include "sublab/gromov_hausdorff.hpp"
#include "sublab/bundle_space.hpp"
#include "sublab/config.hpp"
#include "sublab/scenarios.hpp"
#include "sublab/collapse.hpp"
#include "sublab/verify.hpp"

#endif  // SUBLAB_SUBLAB_HPP
