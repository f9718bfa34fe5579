#ifndef lintproj_marker_in_conditional_h
#define lintproj_marker_in_conditional_h
#ifdef LINTPROJ_WITH_PETSC
LINTPROJ_NAMESPACE_OPEN
int petsc_only();
LINTPROJ_NAMESPACE_CLOSE
#endif

#endif
