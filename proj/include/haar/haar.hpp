#ifndef HAAR_HAAR_HPP
#define HAAR_HAAR_HPP

#include "constructions.hpp"
#include "convolution.hpp"
#include "dynamics.hpp"
#include "equivalences.hpp"
#include "groupoid.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "systems.hpp"
#include "transfer.hpp"

#endif // HAAR_HAAR_HPP
