"""
SALHI - modeling and gain optimization for the SU(1,1) atom-light hybrid interferometer
"""

__version__ = "0.1.0"
