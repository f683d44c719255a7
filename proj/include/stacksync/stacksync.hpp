#ifndef STACKSYNC_STACKSYNC_HPP
#define STACKSYNC_STACKSYNC_HPP

#include "stacksync/blind_counter.hpp"
#include "stacksync/dfa_sync.hpp"
#include "stacksync/json_io.hpp"
#include "stacksync/machine.hpp"
#include "stacksync/multicounter.hpp"
#include "stacksync/pda_sync.hpp"
#include "stacksync/reductions.hpp"
#include "stacksync/transducer.hpp"
#include "stacksync/turn_decision.hpp"
#include "stacksync/witness.hpp"

#endif  // STACKSYNC_STACKSYNC_HPP
