module;
[...]
#include <list>
[...]
module LinearAlgebra :implementation_partition_base_utilities;
import :interface_partition_base_utilities;
DEAL_II_NAMESPACE_OPEN
[...]                  // implementation of the classes and functions of utilities.cc
DEAL_II_NAMESPACE_CLOSE
