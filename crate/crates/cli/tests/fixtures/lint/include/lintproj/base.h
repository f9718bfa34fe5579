#ifndef lintproj_base_h
#define lintproj_base_h

LINTPROJ_NAMESPACE_OPEN
int base();
LINTPROJ_NAMESPACE_CLOSE

#endif
