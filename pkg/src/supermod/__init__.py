"""Exact N=2 superconformal modules from modules over differential operators.

The package builds, degenerates, and cross-checks families of modules over
the N=2 superconformal algebras (Ramond and Neveu-Schwarz sectors) starting
from four families of modules over differential operators on the punctured
line, entirely in exact arithmetic over rational-function fields.
"""

__version__ = "0.1.0"
