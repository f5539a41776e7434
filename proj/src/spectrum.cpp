#include "looplab/spectrum.hpp"
