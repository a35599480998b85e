# Tests package for the spectral lab
