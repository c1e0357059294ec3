"""grassgeo: exact Grassmann-graded superspace calculus and verification."""

__version__ = "0.1.0"
