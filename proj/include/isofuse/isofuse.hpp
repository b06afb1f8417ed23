#ifndef ISOFUSE_ISOFUSE_HPP
#define ISOFUSE_ISOFUSE_HPP

#include "isofuse/rational.hpp"
#include "isofuse/based_algebra.hpp"
#include "isofuse/partition.hpp"
#include "isofuse/fusion.hpp"
#include "isofuse/scheme_io.hpp"
#include "isofuse/orbitals.hpp"
#include "isofuse/polynomial.hpp"
#include "isofuse/factor.hpp"
#include "isofuse/eigen.hpp"
#include "isofuse/parallel.hpp"
#include "isofuse/lattice.hpp"

#endif // ISOFUSE_ISOFUSE_HPP
