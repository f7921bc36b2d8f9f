#include "doctest.h"
#include "gem3/moves.hpp"

using namespace gem3;

TEST_CASE("placeholder moves") { CHECK(find_dipoles(gem_s3_2(), 1).empty()); }
