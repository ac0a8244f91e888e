#ifndef LATTICEOPS_LATTICEOPS_HPP
#define LATTICEOPS_LATTICEOPS_HPP

#include "latticeops/error.hpp"
#include "latticeops/scalar.hpp"
#include "latticeops/polynomial.hpp"
#include "latticeops/lattice.hpp"
#include "latticeops/operators.hpp"
#include "latticeops/pair.hpp"
#include "latticeops/functional.hpp"
#include "latticeops/classical.hpp"
#include "latticeops/families.hpp"
#include "latticeops/characterize.hpp"

#endif  // LATTICEOPS_LATTICEOPS_HPP
