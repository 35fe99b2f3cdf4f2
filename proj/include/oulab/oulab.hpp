#pragma once

// Everything except the command-line layer.

#include "oulab/core/types.hpp"

#include "oulab/hermite/hermite.hpp"
#include "oulab/hermite/multi_index.hpp"
#include "oulab/hermite/quadrature.hpp"
#include "oulab/hermite/spectral_function.hpp"

#include "oulab/operators/assembly.hpp"
#include "oulab/operators/fields.hpp"
#include "oulab/operators/model.hpp"
#include "oulab/operators/operator_matrix.hpp"

#include "oulab/calculus/calculus.hpp"
#include "oulab/calculus/expm.hpp"
#include "oulab/calculus/identities.hpp"
#include "oulab/calculus/integrals.hpp"
#include "oulab/calculus/matfun.hpp"

#include "oulab/mehler/mehler.hpp"

#include "oulab/probes/bump.hpp"
#include "oulab/probes/commutator.hpp"
#include "oulab/probes/offdiag.hpp"
#include "oulab/probes/propagation.hpp"
#include "oulab/probes/region.hpp"
#include "oulab/probes/support.hpp"

#include "oulab/lp/experiments.hpp"
#include "oulab/lp/witness.hpp"
