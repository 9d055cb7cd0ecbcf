#pragma once

#include "markov_torus/rational.hpp"
#include "markov_torus/quad_real.hpp"
#include "markov_torus/continued_fraction.hpp"
#include "markov_torus/sft.hpp"
#include "markov_torus/torus.hpp"
#include "markov_torus/partition.hpp"
#include "markov_torus/construct.hpp"
#include "markov_torus/verification.hpp"
#include "markov_torus/coding.hpp"
#include "markov_torus/multmap.hpp"
#include "markov_torus/io.hpp"
