"""
qhelper
Rate regions for fully quantum source compression with a quantum helper
"""

__version__ = "1.0.0"
__author__ = "qhelper developers"
__description__ = "Entropic rate regions, frontier tracing and resource-inequality certificates"
