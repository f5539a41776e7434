#include "looplab/amatrix.hpp"
