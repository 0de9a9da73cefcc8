"""Matrix exponentials as Cayley-Hamilton polynomials and SU(N) simplex geometry."""

__version__ = "0.1.0"
