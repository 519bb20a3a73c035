#ifndef COPKIT_COPKIT_HPP_
#define COPKIT_COPKIT_HPP_

#include "copkit/copula.hpp"
#include "copkit/coupling.hpp"
#include "copkit/dependence.hpp"
#include "copkit/error.hpp"
#include "copkit/margins.hpp"
#include "copkit/multisensory.hpp"
#include "copkit/numeric.hpp"
#include "copkit/random.hpp"
#include "copkit/vine.hpp"

#endif // COPKIT_COPKIT_HPP_
