#pragma once

#include "sptree/bitrow.hpp"
#include "sptree/parallel.hpp"
#include "sptree/protocol.hpp"
#include "sptree/slack_matrix.hpp"
#include "sptree/tree.hpp"
#include "sptree/verification.hpp"
