"""
Numerical core: states, channels, rate functionals and the frontier optimizer.
"""
