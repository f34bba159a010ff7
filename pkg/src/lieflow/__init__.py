"""Root systems, Weyl characters, Demazure operators and Schrodinger kernels on compact Lie groups."""

__version__ = "0.1.0"
