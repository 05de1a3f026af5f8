#pragma once

#include "matula/arborification.hpp"
#include "matula/arith.hpp"
#include "matula/errors.hpp"
#include "matula/forest.hpp"
#include "matula/nap.hpp"
#include "matula/primes.hpp"
#include "matula/summatory.hpp"
#include "matula/verify.hpp"
