#ifndef DADMM_DADMM_HPP
#define DADMM_DADMM_HPP

#include "dadmm/admm.hpp"
#include "dadmm/consensus.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/graph.hpp"
#include "dadmm/metrics.hpp"
#include "dadmm/problem.hpp"
#include "dadmm/problem_io.hpp"
#include "dadmm/prox.hpp"
#include "dadmm/state.hpp"

#endif  // DADMM_DADMM_HPP
