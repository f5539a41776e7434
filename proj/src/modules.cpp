#include "looplab/linkstate.hpp"
