#pragma once

#include "flawsim/analyzer.hpp"
#include "flawsim/bitstring.hpp"
#include "flawsim/certifier.hpp"
#include "flawsim/distribution.hpp"
#include "flawsim/entropy.hpp"
#include "flawsim/error.hpp"
#include "flawsim/exact.hpp"
#include "flawsim/flaw_set.hpp"
#include "flawsim/forensics.hpp"
#include "flawsim/instance_io.hpp"
#include "flawsim/instances.hpp"
#include "flawsim/model.hpp"
#include "flawsim/priority.hpp"
#include "flawsim/rng.hpp"
#include "flawsim/simulator.hpp"
#include "flawsim/types.hpp"
